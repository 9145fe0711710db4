#pragma once

#include <Eigen/Dense>

namespace nullcurve {

/// Lawson-Hanson nonnegative least squares: min |A x - b| over x >= 0.
Eigen::VectorXd nnls(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, int max_iter = 0);

} // namespace nullcurve
