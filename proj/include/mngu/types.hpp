#pragma once

#include <Eigen/Core>

namespace mngu {

using Scalar = double;
using Index = Eigen::Index;

using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
using Vector2 = Eigen::Matrix<Scalar, 2, 1>;
using ArrayX = Eigen::Array<Scalar, Eigen::Dynamic, 1>;

}  // namespace mngu
