// SPDX-License-Identifier: Apache-2.0
#include "nlpb/coherent.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "nlpb/nnls.hpp"

namespace nlpb {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// log(|z|^{2n} / eps_n!), -inf for z = 0 and n > 0.
double log_term(const EpsilonSequence& eps, double log_abs2, std::size_t n) {
    if (n == 0) return 0.0;
    return static_cast<double>(n) * log_abs2 - eps.log_factorial(n);
}

}  // namespace

CoherentState build_xi(const EpsilonSequence& eps, Complex z, Index dim, const Tolerances& tol) {
    if (dim < 2) throw Error(ErrorCode::DimMismatch, "need at least two basis vectors");
    const auto d = static_cast<std::size_t>(dim);
    if (eps.size() < d) throw Error(ErrorCode::DimMismatch, "epsilon sequence shorter than dim");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
        throw Error(ErrorCode::InvalidParams, "z must be finite");
    }

    const double abs2 = std::norm(z);
    const double log_abs2 = abs2 > 0.0 ? std::log(abs2) : -std::numeric_limits<double>::infinity();

    std::vector<double> logs(d);
    for (std::size_t n = 0; n < d; ++n) logs[n] = log_term(eps, log_abs2, n);
    const double peak = *std::max_element(logs.begin(), logs.end());
    std::vector<double> scaled(d);
    for (std::size_t n = 0; n < d; ++n) scaled[n] = std::exp(logs[n] - peak);
    const double log_n = peak + std::log(pairwise_sum(scaled));

    // Geometric bound on sum_{n >= D} |z|^{2n}/eps_n!: successive ratios are
    // |z|^2/eps_{n+1} <= r once n >= D - 1.
    const double r = abs2 / eps[d - 1];
    double tail = 0.0;
    if (abs2 > 0.0) {
        tail = r < 1.0 ? std::exp(logs[d - 1] - log_n) * r / (1.0 - r)
                       : std::numeric_limits<double>::infinity();
    }
    if (!(tail <= tol.tail)) {
        throw Error(ErrorCode::OutsideRadius, "tail bound " + format_real(tail) +
                                                  " exceeds " + format_real(tol.tail));
    }

    Vector c(dim);
    const double arg = std::arg(z);
    for (std::size_t n = 0; n < d; ++n) {
        const double mag = std::exp(0.5 * (logs[n] - log_n));
        c(static_cast<Index>(n)) = n == 0 ? Complex(mag, 0.0)
                                          : std::polar(mag, static_cast<double>(n) * arg);
    }

    const double radius = std::exp(eps.log_factorial(d - 1) / (2.0 * static_cast<double>(d - 1)));
    return CoherentState{z, StateVector(std::move(c)), std::exp(log_n), tail, radius};
}

double check_eigenproperty(const CoherentState& state, const FockOperator& a) {
    const Vector& xi = state.coeffs.coeffs();
    if (a.dim() != xi.size()) throw Error(ErrorCode::DimMismatch, "operator and state differ");
    const Index inner_rows = xi.size() - 1;
    const Vector diff = (a.matrix() * xi - state.z * xi).head(inner_rows);
    return diff.norm() / xi.norm();
}

double check_eigenproperty(const CoherentState& state, const NlpbFamily& fam) {
    const std::size_t top = fam.interior_top();
    const Vector& c = state.coeffs.coeffs();
    if (static_cast<std::size_t>(c.size()) <= top) {
        throw Error(ErrorCode::DimMismatch, "state shorter than the family interior");
    }
    const Matrix& am = fam.a().matrix();
    Vector xi = Vector::Zero(fam.dim());
    Vector diff = Vector::Zero(fam.dim());
    for (std::size_t n = 0; n <= top; ++n) {
        const Vector& phi = fam.phi()[n].coeffs();
        const Complex cn = c(static_cast<Index>(n));
        xi += cn * phi;
        if (n > 0) diff += cn * (am * phi);
        if (n < top) diff -= state.z * cn * phi;
    }
    return diff.norm() / xi.norm();
}

// ---------------------------------------------------------------------------

std::vector<double> check_moment_measure(const EpsilonSequence& eps, const RadialMeasure& measure,
                                         std::size_t k_max) {
    if (k_max >= eps.size()) throw Error(ErrorCode::DimMismatch, "K exceeds the sequence");
    std::vector<double> out(k_max + 1);
    std::vector<double> terms(measure.nodes.size());
    for (std::size_t k = 0; k <= k_max; ++k) {
        for (std::size_t j = 0; j < terms.size(); ++j) {
            terms[j] = measure.weights[j] * std::pow(measure.nodes[j], 2.0 * static_cast<double>(k));
        }
        const double target = eps.factorial(k) / kTwoPi;
        out[k] = std::abs(pairwise_sum(terms) - target) / target;
    }
    return out;
}

double default_support_cap(const EpsilonSequence& eps, std::size_t k_max) {
    double m = 0.0;
    for (std::size_t k = 0; k <= std::min(k_max, eps.size() - 1); ++k) m = std::max(m, eps[k]);
    return 3.0 * std::sqrt(m);
}

MomentSolution solve_moment_problem(const EpsilonSequence& eps, std::size_t k_max,
                                    double support_cap, std::size_t nodes) {
    if (nodes < k_max + 1) throw Error(ErrorCode::BadGrid, "need at least K + 1 nodes");
    if (!(support_cap > 0.0) || !std::isfinite(support_cap)) {
        throw Error(ErrorCode::BadGrid, "support cap must be positive and finite");
    }
    if (k_max >= eps.size()) throw Error(ErrorCode::BadGrid, "K exceeds the sequence");

    std::vector<double> grid(nodes);
    if (nodes == 1) {
        grid[0] = support_cap;
    } else {
        grid[0] = 0.0;
        const double lo = support_cap * 1e-3;
        const double step = std::log(support_cap / lo) / static_cast<double>(nodes > 2 ? nodes - 2 : 1);
        for (std::size_t j = 1; j < nodes; ++j) {
            grid[j] = j + 1 == nodes ? support_cap : lo * std::exp(step * static_cast<double>(j - 1));
        }
    }

    // Rows scaled to unit targets, columns to unit norm.
    const auto rows = static_cast<Index>(k_max + 1);
    const auto cols = static_cast<Index>(nodes);
    Eigen::MatrixXd a(rows, cols);
    for (Index k = 0; k < rows; ++k) {
        const double target = eps.factorial(static_cast<std::size_t>(k)) / kTwoPi;
        for (Index j = 0; j < cols; ++j) {
            a(k, j) = std::pow(grid[static_cast<std::size_t>(j)], 2.0 * static_cast<double>(k)) / target;
        }
    }
    Eigen::VectorXd scale = a.colwise().norm().transpose();
    for (Index j = 0; j < cols; ++j) {
        if (scale(j) > 0.0) a.col(j) /= scale(j);
    }
    const NnlsResult sol = nnls(a, Eigen::VectorXd::Ones(rows));

    MomentSolution out;
    out.measure.support_cap = support_cap;
    for (Index j = 0; j < cols; ++j) {
        const double w = sol.x(j) / scale(j);
        if (w > 0.0 && std::isfinite(w)) {
            out.measure.nodes.push_back(grid[static_cast<std::size_t>(j)]);
            out.measure.weights.push_back(w);
        }
    }
    const std::vector<double> res = check_moment_measure(eps, out.measure, k_max);
    out.feasibility = *std::max_element(res.begin(), res.end());
    return out;
}

RadialMeasure gauss_laguerre_measure(std::size_t n) {
    if (n == 0) throw Error(ErrorCode::BadGrid, "need at least one node");
    const auto m = static_cast<Index>(n);
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(m, m);
    for (Index i = 0; i < m; ++i) {
        jac(i, i) = 2.0 * static_cast<double>(i) + 1.0;
        if (i + 1 < m) jac(i, i + 1) = jac(i + 1, i) = static_cast<double>(i + 1);
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac, Eigen::EigenvaluesOnly);

    // L_n(x) and L_{n+1}(x) by the three-term recurrence.
    auto laguerre = [n](double x, double& ln, double& ln1) {
        double prev = 1.0;
        double cur = 1.0 - x;
        for (std::size_t k = 1; k < n; ++k) {
            const double kd = static_cast<double>(k);
            const double next = ((2.0 * kd + 1.0 - x) * cur - kd * prev) / (kd + 1.0);
            prev = cur;
            cur = next;
        }
        ln = n == 0 ? 1.0 : cur;
        const double nd = static_cast<double>(n);
        ln1 = ((2.0 * nd + 1.0 - x) * cur - nd * prev) / (nd + 1.0);
    };

    RadialMeasure out;
    const double nd = static_cast<double>(n);
    for (Index i = 0; i < m; ++i) {
        double x = es.eigenvalues()(i);
        double ln = 0.0;
        double ln1 = 0.0;
        for (int it = 0; it < 3; ++it) {
            laguerre(x, ln, ln1);
            // x L_n'(x) = n L_n(x) - n L_{n-1}(x) = (n+1) L_{n+1} - (2n+1-x) L_n + n L_n.
            const double deriv = ((nd + 1.0) * ln1 - (nd + 1.0 - x) * ln) / x;
            if (deriv == 0.0 || !std::isfinite(deriv)) break;
            x -= ln / deriv;
        }
        laguerre(x, ln, ln1);
        const double w = x / ((nd + 1.0) * (nd + 1.0) * ln1 * ln1);
        out.nodes.push_back(std::sqrt(x));
        out.weights.push_back(w / kTwoPi);
    }
    out.support_cap = out.nodes.back();
    return out;
}

double check_identity_resolution(const EpsilonSequence& eps, const RadialMeasure& measure,
                                 std::size_t block, std::size_t n_theta) {
    if (block == 0 || block > eps.size()) {
        throw Error(ErrorCode::DimMismatch, "block must fit the sequence");
    }
    if (n_theta == 0) throw Error(ErrorCode::BadGrid, "need at least one angle");
    const auto b = static_cast<Index>(block);
    Matrix acc = Matrix::Zero(b, b);
    const double dtheta = kTwoPi / static_cast<double>(n_theta);

    Vector v(b);
    for (std::size_t j = 0; j < measure.nodes.size(); ++j) {
        const double r = measure.nodes[j];
        const double w = measure.weights[j];
        for (std::size_t l = 0; l < n_theta; ++l) {
            const double theta = dtheta * static_cast<double>(l);
            for (Index n = 0; n < b; ++n) {
                const auto nn = static_cast<std::size_t>(n);
                const double mag = n == 0 ? 1.0
                                          : std::pow(r, static_cast<double>(n)) *
                                                std::exp(-0.5 * eps.log_factorial(nn));
                v(n) = std::polar(mag, static_cast<double>(n) * theta);
            }
            acc.noalias() += (w * dtheta) * (v * v.adjoint());
        }
    }
    return max_norm(acc - Matrix::Identity(b, b));
}

HeisenbergProduct heisenberg_product(const CoherentState& state, const FockOperator& a) {
    const Vector& xi = state.coeffs.coeffs();
    if (a.dim() != xi.size()) throw Error(ErrorCode::DimMismatch, "operator and state differ");
    const Vector av = a.matrix() * xi;
    const Vector adv = a.matrix().adjoint() * xi;
    const double sq = xi.squaredNorm();

    const Complex mean_a = xi.dot(av) / sq;
    const double mean_q = std::sqrt(2.0) * mean_a.real();
    const double mean_p = std::sqrt(2.0) * mean_a.imag();
    const double q2 = 0.5 * (av + adv).squaredNorm() / sq;
    const double p2 = 0.5 * (av - adv).squaredNorm() / sq;
    const double var_q = std::max(0.0, q2 - mean_q * mean_q);
    const double var_p = std::max(0.0, p2 - mean_p * mean_p);

    HeisenbergProduct out;
    out.lhs = std::sqrt(var_q * var_p);
    out.rhs = 0.5 * std::abs(adv.squaredNorm() / sq - std::norm(state.z));
    return out;
}

}  // namespace nlpb
