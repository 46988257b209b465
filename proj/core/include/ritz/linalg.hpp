#pragma once

#include <Eigen/Dense>

namespace ritz {

using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace ritz
