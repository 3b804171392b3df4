#pragma once

#include <vector>

#include "mngu/types.hpp"

namespace mngu {

struct LossGrad {
  Scalar loss;
  VectorX grad;
};

struct BatchLossGrad {
  Scalar loss;
  MatrixX grad;
};

// Mean Huber loss (delta = 1) over elements, gradient w.r.t. predicted_q.
LossGrad huber_q_loss(const VectorX& predicted_q, const VectorX& target_q);

// Softmax cross-entropy from raw logits; grad = softmax(logits) - onehot.
// Throws UsageError when true_class is out of range.
LossGrad cross_entropy_from_logits(const VectorX& logits, int true_class);

// Column-per-sample batch form; loss is the mean over columns and grad is
// already divided by the batch size.
BatchLossGrad cross_entropy_from_logits(const MatrixX& logits,
                                        const std::vector<int>& true_classes);

}  // namespace mngu
