#include "mngu/nn/losses.hpp"

#include <cmath>
#include <string>

#include "mngu/errors.hpp"

namespace mngu {

LossGrad huber_q_loss(const VectorX& predicted_q, const VectorX& target_q) {
  if (predicted_q.size() != target_q.size())
    throw UsageError("huber_q_loss length mismatch");
  const Index n = predicted_q.size();
  const Scalar inv_n = Scalar(1) / static_cast<Scalar>(n);
  Scalar loss = 0;
  VectorX grad(n);
  for (Index i = 0; i < n; ++i) {
    const Scalar d = predicted_q[i] - target_q[i];
    if (std::abs(d) <= Scalar(1)) {
      loss += Scalar(0.5) * d * d;
      grad[i] = d * inv_n;
    } else {
      loss += std::abs(d) - Scalar(0.5);
      grad[i] = (d > 0 ? Scalar(1) : Scalar(-1)) * inv_n;
    }
  }
  return {loss * inv_n, std::move(grad)};
}

LossGrad cross_entropy_from_logits(const VectorX& logits, int true_class) {
  if (true_class < 0 || true_class >= logits.size())
    throw UsageError("true_class " + std::to_string(true_class) +
                     " out of range for " + std::to_string(logits.size()) +
                     " logits");
  const Scalar peak = logits.maxCoeff();
  ArrayX shifted = logits.array() - peak;
  ArrayX expd = shifted.exp();
  const Scalar total = expd.sum();
  const Scalar loss = std::log(total) - shifted[true_class];
  VectorX grad = (expd / total).matrix();
  grad[true_class] -= Scalar(1);
  return {loss, std::move(grad)};
}

BatchLossGrad cross_entropy_from_logits(const MatrixX& logits,
                                        const std::vector<int>& true_classes) {
  const Index batch = logits.cols();
  if (static_cast<Index>(true_classes.size()) != batch)
    throw UsageError("cross_entropy batch size mismatch");
  if (batch == 0) throw UsageError("cross_entropy on an empty batch");
  const Scalar inv_b = Scalar(1) / static_cast<Scalar>(batch);
  Scalar loss = 0;
  MatrixX grad(logits.rows(), batch);
  for (Index b = 0; b < batch; ++b) {
    LossGrad one = cross_entropy_from_logits(VectorX(logits.col(b)),
                                             true_classes[static_cast<std::size_t>(b)]);
    loss += one.loss;
    grad.col(b) = one.grad * inv_b;
  }
  return {loss * inv_b, std::move(grad)};
}

}  // namespace mngu
