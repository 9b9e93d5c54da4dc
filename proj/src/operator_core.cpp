// SPDX-License-Identifier: Apache-2.0
#include "nlpb/operator_core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace nlpb {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::RejectedSequence: return "RejectedSequence";
        case ErrorCode::DimMismatch: return "DimMismatch";
        case ErrorCode::NotHermitian: return "NotHermitian";
        case ErrorCode::NotPositive: return "NotPositive";
        case ErrorCode::NotDiagonalizable: return "NotDiagonalizable";
        case ErrorCode::NoVacuum: return "NoVacuum";
        case ErrorCode::DegenerateVacuum: return "DegenerateVacuum";
        case ErrorCode::ZeroOverlap: return "ZeroOverlap";
        case ErrorCode::SingularT: return "SingularT";
        case ErrorCode::LadderMismatch: return "LadderMismatch";
        case ErrorCode::InvalidF: return "InvalidF";
        case ErrorCode::NonMonotone: return "NonMonotone";
        case ErrorCode::InvalidParams: return "InvalidParams";
        case ErrorCode::NegativeEpsilon: return "NegativeEpsilon";
        case ErrorCode::InvalidS: return "InvalidS";
        case ErrorCode::InvalidQ: return "InvalidQ";
        case ErrorCode::NotHermitianS: return "NotHermitianS";
        case ErrorCode::OutsideRadius: return "OutsideRadius";
        case ErrorCode::BadGrid: return "BadGrid";
        case ErrorCode::ConfigError: return "ConfigError";
    }
    return "Unknown";
}

// ---------------------------------------------------------------------------
// EpsilonSequence

EpsilonSequence make_epsilon(std::vector<double> values) {
    if (values.empty()) {
        throw Error(ErrorCode::RejectedSequence, "empty sequence");
    }
    for (std::size_t n = 0; n < values.size(); ++n) {
        if (!std::isfinite(values[n])) {
            throw Error(ErrorCode::RejectedSequence, "non-finite entry at n = " + std::to_string(n));
        }
    }
    if (values[0] != 0.0) {
        throw Error(ErrorCode::RejectedSequence, "e_0 must be exactly 0");
    }
    for (std::size_t n = 1; n < values.size(); ++n) {
        if (!(values[n] > values[n - 1])) {
            throw Error(ErrorCode::RejectedSequence,
                        "not strictly increasing at n = " + std::to_string(n));
        }
    }

    EpsilonSequence eps;
    eps.factorials_.resize(values.size());
    eps.log_factorials_.resize(values.size());
    eps.factorials_[0] = 1.0;
    eps.log_factorials_[0] = 0.0;
    for (std::size_t n = 1; n < values.size(); ++n) {
        eps.factorials_[n] = eps.factorials_[n - 1] * values[n];
        eps.log_factorials_[n] = eps.log_factorials_[n - 1] + std::log(values[n]);
    }
    eps.values_ = std::move(values);
    return eps;
}

EpsilonSequence EpsilonSequence::linear(std::size_t length) {
    return generate(length, [](std::size_t n) { return static_cast<double>(n); });
}

EpsilonSequence EpsilonSequence::quon(double q, std::size_t length) {
    // (1 - q^n) / (1 - q) instead of the running sum 1 + q + ... + q^{n-1}.
    return generate(length, [q](std::size_t n) {
        if (n == 0) return 0.0;
        const auto nd = static_cast<double>(n);
        if (q > 0.0) return -std::expm1(nd * std::log1p(q - 1.0)) / (1.0 - q);
        return (1.0 - std::pow(q, nd)) / (1.0 - q);
    });
}

EpsilonSequence EpsilonSequence::generate(std::size_t length,
                                          const std::function<double(std::size_t)>& g) {
    std::vector<double> values(length);
    for (std::size_t n = 0; n < length; ++n) values[n] = g(n);
    return make_epsilon(std::move(values));
}

// ---------------------------------------------------------------------------
// FockOperator / StateVector

double max_norm(const Matrix& m) {
    return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

FockOperator::FockOperator(Matrix entries) : entries_(std::move(entries)) {
    if (entries_.rows() != entries_.cols()) {
        throw Error(ErrorCode::DimMismatch, "operator must be square");
    }
    if (entries_.rows() < 2) {
        throw Error(ErrorCode::DimMismatch, "operator dimension must be at least 2");
    }
    if (!entries_.allFinite()) {
        throw Error(ErrorCode::InvalidParams, "operator has non-finite entries");
    }
}

FockOperator FockOperator::identity(Index dim) { return FockOperator(Matrix::Identity(dim, dim)); }

FockOperator FockOperator::zero(Index dim) { return FockOperator(Matrix::Zero(dim, dim)); }

FockOperator FockOperator::diagonal(std::span<const double> diag) {
    const auto d = static_cast<Index>(diag.size());
    Matrix m = Matrix::Zero(d, d);
    for (Index i = 0; i < d; ++i) m(i, i) = diag[static_cast<std::size_t>(i)];
    return FockOperator(std::move(m));
}

double FockOperator::max_norm() const { return nlpb::max_norm(entries_); }

StateVector::StateVector(Vector coeffs) : coeffs_(std::move(coeffs)) {
    if (coeffs_.size() == 0) {
        throw Error(ErrorCode::DimMismatch, "state vector must be nonempty");
    }
    if (!coeffs_.allFinite()) {
        throw Error(ErrorCode::InvalidParams, "state vector has non-finite entries");
    }
}

StateVector StateVector::basis(Index dim, Index n) {
    Vector v = Vector::Zero(dim);
    v(n) = 1.0;
    return StateVector(std::move(v));
}

namespace {

void require_same_dim(Index a, Index b, const char* op) {
    if (a != b) {
        throw Error(ErrorCode::DimMismatch, std::string(op) + ": " + std::to_string(a) +
                                                " vs " + std::to_string(b));
    }
}

}  // namespace

FockOperator operator*(const FockOperator& x, const FockOperator& y) {
    require_same_dim(x.dim(), y.dim(), "product");
    return FockOperator(x.matrix() * y.matrix());
}

FockOperator operator+(const FockOperator& x, const FockOperator& y) {
    require_same_dim(x.dim(), y.dim(), "sum");
    return FockOperator(x.matrix() + y.matrix());
}

FockOperator operator-(const FockOperator& x, const FockOperator& y) {
    require_same_dim(x.dim(), y.dim(), "difference");
    return FockOperator(x.matrix() - y.matrix());
}

FockOperator operator*(Complex s, const FockOperator& x) { return FockOperator(s * x.matrix()); }

StateVector operator*(const FockOperator& x, const StateVector& v) {
    require_same_dim(x.dim(), v.dim(), "apply");
    return StateVector(x.matrix() * v.coeffs());
}

Complex inner(const StateVector& x, const StateVector& y) {
    require_same_dim(x.dim(), y.dim(), "inner");
    return x.coeffs().dot(y.coeffs());
}

// ---------------------------------------------------------------------------
// Operations

FockOperator adjoint(const FockOperator& x) { return FockOperator(x.matrix().adjoint()); }

FockOperator commutator(const FockOperator& x, const FockOperator& y) {
    require_same_dim(x.dim(), y.dim(), "commutator");
    return FockOperator(x.matrix() * y.matrix() - y.matrix() * x.matrix());
}

bool is_hermitian(const Matrix& m, double rel_tol) {
    if (m.rows() != m.cols()) return false;
    const double scale = max_norm(m);
    return max_norm(m - m.adjoint()) <= rel_tol * scale;
}

FockOperator positive_sqrt(const FockOperator& x, const Tolerances& tol) {
    const double scale = x.max_norm();
    if (!is_hermitian(x.matrix(), tol.herm_rel)) {
        throw Error(ErrorCode::NotHermitian, "positive_sqrt needs a Hermitian argument");
    }
    const Matrix h = 0.5 * (x.matrix() + x.matrix().adjoint());
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    const Eigen::VectorXd& lambda = es.eigenvalues();
    if (lambda.size() > 0 && lambda.minCoeff() < -tol.herm_rel * scale) {
        throw Error(ErrorCode::NotPositive,
                    "smallest eigenvalue " + format_real(lambda.minCoeff()));
    }
    const Eigen::VectorXd root = lambda.cwiseMax(0.0).cwiseSqrt();
    const Matrix& v = es.eigenvectors();
    Matrix r = v * root.asDiagonal() * v.adjoint();
    // Exact Hermiticity of the returned root.
    r = 0.5 * (r + r.adjoint()).eval();
    return FockOperator(std::move(r));
}

FockOperator apply_function(const FockOperator& x, const std::function<Complex(Complex)>& f,
                            const Tolerances& tol) {
    if (is_hermitian(x.matrix(), tol.herm_rel)) {
        const Matrix h = 0.5 * (x.matrix() + x.matrix().adjoint());
        Eigen::SelfAdjointEigenSolver<Matrix> es(h);
        const Eigen::VectorXd& lambda = es.eigenvalues();
        Vector fl(lambda.size());
        for (Index i = 0; i < lambda.size(); ++i) fl(i) = f(Complex(lambda(i), 0.0));
        const Matrix& v = es.eigenvectors();
        return FockOperator(v * fl.asDiagonal() * v.adjoint());
    }

    Eigen::ComplexEigenSolver<Matrix> es(x.matrix());
    if (es.info() != Eigen::Success) {
        throw Error(ErrorCode::NotDiagonalizable, "eigendecomposition did not converge");
    }
    const Matrix& v = es.eigenvectors();
    Eigen::JacobiSVD<Matrix> svd(v);
    const auto& sv = svd.singularValues();
    const double smin = sv(sv.size() - 1);
    if (!(smin > 0.0) || sv(0) / smin > tol.cond_cap) {
        throw Error(ErrorCode::NotDiagonalizable, "eigenbasis condition number exceeds cap");
    }
    Vector fl(es.eigenvalues().size());
    for (Index i = 0; i < fl.size(); ++i) fl(i) = f(es.eigenvalues()(i));
    const Matrix vinv = v.partialPivLu().inverse();
    return FockOperator(v * fl.asDiagonal() * vinv);
}

FockOperator lowering(const EpsilonSequence& eps, Index dim) {
    if (static_cast<std::size_t>(dim) > eps.size()) {
        throw Error(ErrorCode::DimMismatch, "epsilon sequence shorter than the operator dimension");
    }
    Matrix a = Matrix::Zero(dim, dim);
    for (Index n = 1; n < dim; ++n) a(n - 1, n) = std::sqrt(eps[static_cast<std::size_t>(n)]);
    return FockOperator(std::move(a));
}

FockOperator number_operator(Index dim) {
    Matrix n = Matrix::Zero(dim, dim);
    for (Index i = 0; i < dim; ++i) n(i, i) = static_cast<double>(i);
    return FockOperator(std::move(n));
}

double pairwise_sum(std::span<const double> terms) {
    if (terms.size() <= 8) {
        double s = 0.0;
        for (double t : terms) s += t;
        return s;
    }
    const std::size_t half = terms.size() / 2;
    return pairwise_sum(terms.first(half)) + pairwise_sum(terms.subspan(half));
}

}  // namespace nlpb
