#include "mngu/runner/svg.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "mngu/format.hpp"

namespace mngu {

namespace {

constexpr int kWidth = 800;
constexpr int kHeight = 500;
constexpr int kMarginLeft = 60;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 40;
constexpr int kMarginBottom = 45;

const char* const kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

struct Range {
  Scalar lo = 0;
  Scalar hi = 1;
};

Range value_range(const std::vector<Curve>& curves) {
  bool any = false;
  Range r{0, 0};
  for (const Curve& curve : curves) {
    for (Scalar v : curve.series.ci_low) {
      if (!any || v < r.lo) r.lo = v;
      if (!any || v > r.hi) r.hi = v;
      any = true;
    }
    for (Scalar v : curve.series.ci_high) {
      r.lo = std::min(r.lo, v);
      r.hi = std::max(r.hi, v);
    }
  }
  if (!any) return {0, 1};
  if (r.hi == r.lo) {
    r.lo -= 1;
    r.hi += 1;
  }
  const Scalar pad = 0.05 * (r.hi - r.lo);
  return {r.lo - pad, r.hi + pad};
}

std::string fmt(Scalar v) { return format_scalar(v); }

}  // namespace

void write_curve_svg(std::ostream& out, const std::vector<Curve>& curves,
                     const std::string& title) {
  std::size_t max_len = 0;
  for (const Curve& curve : curves)
    max_len = std::max(max_len, curve.series.mean.size());

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth
      << "\" height=\"" << kHeight << "\" viewBox=\"0 0 " << kWidth << ' '
      << kHeight << "\">\n";
  out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << kWidth / 2 << "\" y=\"24\" text-anchor=\"middle\" "
         "font-family=\"sans-serif\" font-size=\"16\">"
      << title << "</text>\n";

  const int plot_w = kWidth - kMarginLeft - kMarginRight;
  const int plot_h = kHeight - kMarginTop - kMarginBottom;

  if (max_len == 0) {
    out << "<text x=\"" << kWidth / 2 << "\" y=\"" << kHeight / 2
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\">no data</text>\n</svg>\n";
    return;
  }

  const Range range = value_range(curves);
  const Scalar x_span = max_len > 1 ? static_cast<Scalar>(max_len - 1) : 1;
  auto x_at = [&](std::size_t i) {
    return static_cast<Scalar>(kMarginLeft) +
           static_cast<Scalar>(plot_w) * static_cast<Scalar>(i) / x_span;
  };
  auto y_at = [&](Scalar v) {
    return static_cast<Scalar>(kMarginTop) +
           static_cast<Scalar>(plot_h) * (range.hi - v) / (range.hi - range.lo);
  };

  // Axes and tick labels.
  out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h
      << "\" x2=\"" << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h
      << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\""
      << kMarginLeft << "\" y2=\"" << kMarginTop + plot_h
      << "\" stroke=\"black\"/>\n";
  for (int tick = 0; tick <= 4; ++tick) {
    const Scalar v = range.lo + (range.hi - range.lo) *
                                    static_cast<Scalar>(tick) / Scalar(4);
    out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << fmt(y_at(v) + 4)
        << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << fmt(v) << "</text>\n";
    const std::size_t idx = max_len > 1
                                ? static_cast<std::size_t>(
                                      (max_len - 1) * static_cast<std::size_t>(tick) / 4)
                                : 0;
    out << "<text x=\"" << fmt(x_at(idx)) << "\" y=\""
        << kMarginTop + plot_h + 18
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"11\">"
        << idx << "</text>\n";
  }
  out << "<text x=\"" << kMarginLeft + plot_w / 2 << "\" y=\"" << kHeight - 8
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\">episode</text>\n";
  out << "<text x=\"16\" y=\"" << kMarginTop + plot_h / 2
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
         "font-size=\"12\" transform=\"rotate(-90 16 "
      << kMarginTop + plot_h / 2 << ")\">smoothed return</text>\n";

  for (std::size_t c = 0; c < curves.size(); ++c) {
    const AggregateSeries& s = curves[c].series;
    const char* color = kPalette[c % kPaletteSize];
    if (s.mean.empty()) continue;

    out << "<polygon fill=\"" << color << "\" fill-opacity=\"0.15\" "
           "stroke=\"none\" points=\"";
    for (std::size_t i = 0; i < s.ci_high.size(); ++i)
      out << fmt(x_at(i)) << ',' << fmt(y_at(s.ci_high[i])) << ' ';
    for (std::size_t i = s.ci_low.size(); i-- > 0;)
      out << fmt(x_at(i)) << ',' << fmt(y_at(s.ci_low[i])) << ' ';
    out << "\"/>\n";

    out << "<polyline fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < s.mean.size(); ++i)
      out << fmt(x_at(i)) << ',' << fmt(y_at(s.mean[i])) << ' ';
    out << "\"/>\n";

    const int ly = kMarginTop + 10 + static_cast<int>(c) * 18;
    out << "<line x1=\"" << kMarginLeft + 10 << "\" y1=\"" << ly << "\" x2=\""
        << kMarginLeft + 34 << "\" y2=\"" << ly << "\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kMarginLeft + 40 << "\" y=\"" << ly + 4
        << "\" font-family=\"sans-serif\" font-size=\"12\">" << curves[c].label
        << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace mngu
