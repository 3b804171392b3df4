#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "mngu/nn/mlp.hpp"

// Central-difference reference gradients for every parameter of a network,
// evaluated against an arbitrary scalar loss closure.
namespace oracle {

struct FdGrads {
  std::vector<mngu::MatrixX> weights;
  std::vector<mngu::VectorX> biases;
};

inline FdGrads finite_difference(mngu::MultiLayerPerceptron& net,
                                 const std::function<mngu::Scalar()>& loss,
                                 mngu::Scalar h) {
  using mngu::Index;
  using mngu::Scalar;
  FdGrads out;
  for (Index l = 0; l < net.layer_count(); ++l) {
    mngu::MatrixX wg(net.weights(l).rows(), net.weights(l).cols());
    for (Index r = 0; r < wg.rows(); ++r) {
      for (Index c = 0; c < wg.cols(); ++c) {
        Scalar& p = net.weights(l)(r, c);
        const Scalar saved = p;
        p = saved + h;
        const Scalar above = loss();
        p = saved - h;
        const Scalar below = loss();
        p = saved;
        wg(r, c) = (above - below) / (2 * h);
      }
    }
    out.weights.push_back(std::move(wg));
    mngu::VectorX bg(net.biases(l).size());
    for (Index r = 0; r < bg.size(); ++r) {
      Scalar& p = net.biases(l)[r];
      const Scalar saved = p;
      p = saved + h;
      const Scalar above = loss();
      p = saved - h;
      const Scalar below = loss();
      p = saved;
      bg[r] = (above - below) / (2 * h);
    }
    out.biases.push_back(std::move(bg));
  }
  return out;
}

// Worst relative error between analytic and reference gradients, with an
// absolute floor so near-zero entries compare absolutely.
inline mngu::Scalar worst_gradient_error(const mngu::MultiLayerPerceptron& net,
                                         const FdGrads& reference,
                                         mngu::Scalar abs_floor) {
  using mngu::Index;
  using mngu::Scalar;
  Scalar worst = 0;
  auto account = [&](Scalar analytic, Scalar fd) {
    const Scalar diff = std::abs(analytic - fd);
    const Scalar scale = std::max(std::max(std::abs(analytic), std::abs(fd)),
                                  abs_floor);
    worst = std::max(worst, diff / scale);
  };
  for (Index l = 0; l < net.layer_count(); ++l) {
    for (Index r = 0; r < net.weights(l).rows(); ++r)
      for (Index c = 0; c < net.weights(l).cols(); ++c)
        account(net.weight_grads(l)(r, c), reference.weights[l](r, c));
    for (Index r = 0; r < net.biases(l).size(); ++r)
      account(net.bias_grads(l)[r], reference.biases[l][r]);
  }
  return worst;
}

}  // namespace oracle
