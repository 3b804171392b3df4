#include "mngu/nn/adam.hpp"

#include <cmath>
#include <string>

#include "mngu/errors.hpp"

namespace mngu {

AdamState::AdamState(const MultiLayerPerceptron& net, AdamConfig config)
    : config_(config) {
  for (Index l = 0; l < net.layer_count(); ++l) {
    m_weights_.push_back(MatrixX::Zero(net.weights(l).rows(), net.weights(l).cols()));
    v_weights_.push_back(MatrixX::Zero(net.weights(l).rows(), net.weights(l).cols()));
    m_biases_.push_back(VectorX::Zero(net.biases(l).size()));
    v_biases_.push_back(VectorX::Zero(net.biases(l).size()));
  }
}

void AdamState::step(MultiLayerPerceptron& net) {
  for (Index l = 0; l < net.layer_count(); ++l) {
    if (!net.weight_grads(l).allFinite() || !net.bias_grads(l).allFinite())
      throw DivergenceError("non-finite gradient in layer " + std::to_string(l));
  }
  ++step_count_;
  const Scalar b1 = config_.beta1;
  const Scalar b2 = config_.beta2;
  const Scalar correction1 =
      Scalar(1) - std::pow(b1, static_cast<Scalar>(step_count_));
  const Scalar correction2 =
      Scalar(1) - std::pow(b2, static_cast<Scalar>(step_count_));
  for (Index l = 0; l < net.layer_count(); ++l) {
    auto gw = net.weight_grads(l).array();
    auto gb = net.bias_grads(l).array();
    m_weights_[l].array() = b1 * m_weights_[l].array() + (1 - b1) * gw;
    v_weights_[l].array() = b2 * v_weights_[l].array() + (1 - b2) * gw.square();
    m_biases_[l].array() = b1 * m_biases_[l].array() + (1 - b1) * gb;
    v_biases_[l].array() = b2 * v_biases_[l].array() + (1 - b2) * gb.square();
    net.weights(l).array() -=
        config_.learning_rate * (m_weights_[l].array() / correction1) /
        ((v_weights_[l].array() / correction2).sqrt() + config_.epsilon);
    net.biases(l).array() -=
        config_.learning_rate * (m_biases_[l].array() / correction1) /
        ((v_biases_[l].array() / correction2).sqrt() + config_.epsilon);
  }
}

}  // namespace mngu
