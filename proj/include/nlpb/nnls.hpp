// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/Dense>

namespace nlpb {

struct NnlsResult {
    Eigen::VectorXd x;
    double residual_norm = 0.0;
    int iterations = 0;
    bool converged = false;
};

/// Lawson-Hanson active-set solver for min ||A x - b||_2 subject to x >= 0.
NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iter = 0,
                double tol = 0.0);

}  // namespace nlpb
