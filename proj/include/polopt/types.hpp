#pragma once

#include <Eigen/Dense>

namespace polopt {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

}  // namespace polopt
