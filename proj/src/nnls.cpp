// SPDX-License-Identifier: Apache-2.0
#include "nlpb/nnls.hpp"

#include <algorithm>
#include <limits>
#include <vector>

namespace nlpb {

namespace {

// Unconstrained least squares restricted to the passive columns.
Eigen::VectorXd passive_solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b,
                              const std::vector<bool>& passive) {
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
        if (passive[static_cast<std::size_t>(j)]) cols.push_back(j);
    }
    Eigen::MatrixXd sub(a.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = a.col(cols[k]);
    const Eigen::VectorXd zs = sub.colPivHouseholderQr().solve(b);

    Eigen::VectorXd z = Eigen::VectorXd::Zero(a.cols());
    for (std::size_t k = 0; k < cols.size(); ++k) z(cols[k]) = zs(static_cast<Eigen::Index>(k));
    return z;
}

}  // namespace

NnlsResult nnls(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, int max_iter, double tol) {
    const Eigen::Index n = a.cols();
    if (max_iter <= 0) max_iter = static_cast<int>(3 * n) + 10;
    if (tol <= 0.0) {
        tol = 10.0 * std::numeric_limits<double>::epsilon() * a.cwiseAbs().maxCoeff() *
              static_cast<double>(std::max(a.rows(), n));
    }

    NnlsResult out;
    out.x = Eigen::VectorXd::Zero(n);
    std::vector<bool> passive(static_cast<std::size_t>(n), false);

    Eigen::VectorXd w = a.transpose() * (b - a * out.x);
    while (out.iterations < max_iter) {
        Eigen::Index best = -1;
        double best_w = tol;
        for (Eigen::Index j = 0; j < n; ++j) {
            if (!passive[static_cast<std::size_t>(j)] && w(j) > best_w) {
                best_w = w(j);
                best = j;
            }
        }
        if (best < 0) {
            out.converged = true;
            break;
        }
        passive[static_cast<std::size_t>(best)] = true;

        for (;;) {
            ++out.iterations;
            Eigen::VectorXd z = passive_solve(a, b, passive);
            bool feasible = true;
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) feasible = false;
            }
            if (feasible) {
                out.x = z;
                break;
            }
            // Step back to the boundary and drop the columns that hit zero.
            double alpha = std::numeric_limits<double>::infinity();
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && z(j) <= 0.0) {
                    alpha = std::min(alpha, out.x(j) / (out.x(j) - z(j)));
                }
            }
            out.x += alpha * (z - out.x);
            for (Eigen::Index j = 0; j < n; ++j) {
                if (passive[static_cast<std::size_t>(j)] && out.x(j) <= tol) {
                    passive[static_cast<std::size_t>(j)] = false;
                    out.x(j) = 0.0;
                }
            }
            if (out.iterations >= max_iter) break;
        }
        w = a.transpose() * (b - a * out.x);
    }
    out.residual_norm = (a * out.x - b).norm();
    return out;
}

}  // namespace nlpb
