#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace ctxassoc {

using Real = double;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Index = Eigen::Index;

} // namespace ctxassoc
