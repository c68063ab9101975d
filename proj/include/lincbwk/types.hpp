#pragma once

#include <Eigen/Dense>

#include <cstddef>

namespace lincbwk {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// m x K matrix; column a-1 is the context of arm a. Arm 0 is the no-op.
using ContextSlate = Eigen::MatrixXd;

using ArmIndex = std::size_t;
inline constexpr ArmIndex kNoOp = 0;

}  // namespace lincbwk
