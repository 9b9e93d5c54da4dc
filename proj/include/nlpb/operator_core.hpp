// SPDX-License-Identifier: Apache-2.0
//
// Truncated Fock-space linear algebra.
//
// Every operator lives on span{e_0, ..., e_{D-1}}. Raising actions out of
// e_{D-1} map to zero, so identities that need one more rung than the space
// provides are only ever asserted on interior indices.
#pragma once

#include <Eigen/Dense>

#include <complex>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "nlpb/error.hpp"

namespace nlpb {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Numerical thresholds shared by every module. Relative thresholds are
/// scaled by the max-norm of the operator they are applied to.
struct Tolerances {
    double herm_rel = 1e-10;         // Hermiticity, relative to ||X||_max
    double residual_rel = 1e-9;      // square-root / ladder residuals
    double vacuum_rel = 1e-10;       // kernel detection, relative to ||a||_max
    double battery = 1e-9;           // ladder, eigen and commutator identities
    double gram = 1e-9;              // biorthogonality of the two ladders
    double roundtrip = 1e-8;         // frame-root decomposition checks
    double intertwining = 1e-8;
    double riesz_stability = 0.05;   // max relative change of a "stable" bound
    double tail = 1e-12;             // coherent-state omitted mass
    double coherent = 1e-9;
    double moments = 1e-6;
    double cond_cap = 1e12;          // largest acceptable condition number
};

/// Strictly increasing spectrum 0 = e_0 < e_1 < ... with generalized
/// factorials e_n! = e_1 e_2 ... e_n.
///
/// `factorial(n)` is the stored cumulative product and may overflow to +inf
/// for long, fast-growing sequences; `log_factorial(n)` is always finite.
class EpsilonSequence {
public:
    static EpsilonSequence linear(std::size_t length);
    static EpsilonSequence quon(double q, std::size_t length);
    /// e_n = g(n) for n = 0 .. length-1, validated like any explicit list.
    static EpsilonSequence generate(std::size_t length, const std::function<double(std::size_t)>& g);

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t n) const { return values_[n]; }
    double factorial(std::size_t n) const { return factorials_[n]; }
    double log_factorial(std::size_t n) const { return log_factorials_[n]; }

    std::span<const double> values() const noexcept { return values_; }
    std::span<const double> factorials() const noexcept { return factorials_; }

    friend EpsilonSequence make_epsilon(std::vector<double> values);

private:
    EpsilonSequence() = default;

    std::vector<double> values_;
    std::vector<double> factorials_;
    std::vector<double> log_factorials_;
};

/// Validates and wraps an explicit spectrum. Throws RejectedSequence when the
/// list is empty, e_0 != 0, an entry is non-finite or the list is not
/// strictly increasing.
EpsilonSequence make_epsilon(std::vector<double> values);

/// Dense D x D complex matrix on the truncated Fock basis (D >= 2, finite).
class FockOperator {
public:
    explicit FockOperator(Matrix entries);

    static FockOperator identity(Index dim);
    static FockOperator zero(Index dim);
    static FockOperator diagonal(std::span<const double> diag);

    Index dim() const noexcept { return entries_.rows(); }
    const Matrix& matrix() const noexcept { return entries_; }
    Complex operator()(Index i, Index j) const { return entries_(i, j); }

    double max_norm() const;

private:
    Matrix entries_;
};

/// Length-D complex coefficient vector on the truncated Fock basis.
class StateVector {
public:
    explicit StateVector(Vector coeffs);

    static StateVector basis(Index dim, Index n);

    Index dim() const noexcept { return coeffs_.size(); }
    const Vector& coeffs() const noexcept { return coeffs_; }
    Complex operator[](Index i) const { return coeffs_(i); }
    double norm() const { return coeffs_.norm(); }

private:
    Vector coeffs_;
};

FockOperator operator*(const FockOperator& x, const FockOperator& y);
FockOperator operator+(const FockOperator& x, const FockOperator& y);
FockOperator operator-(const FockOperator& x, const FockOperator& y);
FockOperator operator*(Complex s, const FockOperator& x);
StateVector operator*(const FockOperator& x, const StateVector& v);

/// <x, y>, antilinear in the first argument.
Complex inner(const StateVector& x, const StateVector& y);

double max_norm(const Matrix& m);

FockOperator adjoint(const FockOperator& x);

/// XY - YX. Throws DimMismatch.
FockOperator commutator(const FockOperator& x, const FockOperator& y);

/// Hermitian positive semidefinite square root. Throws NotHermitian when
/// ||X - X^H||_max exceeds herm_rel * ||X||_max and NotPositive when the
/// smallest eigenvalue is below -herm_rel * ||X||_max.
FockOperator positive_sqrt(const FockOperator& x, const Tolerances& tol = {});

/// f(X) through an eigendecomposition. Hermitian inputs use the unitary
/// eigenbasis; anything else uses a general eigenbasis whose condition number
/// must stay below tol.cond_cap (NotDiagonalizable otherwise).
FockOperator apply_function(const FockOperator& x, const std::function<Complex(Complex)>& f,
                            const Tolerances& tol = {});

/// Weighted shift a e_n = sqrt(e_n) e_{n-1} on the first `dim` basis vectors.
FockOperator lowering(const EpsilonSequence& eps, Index dim);

/// diag(0, 1, ..., D-1).
FockOperator number_operator(Index dim);

bool is_hermitian(const Matrix& m, double rel_tol);

/// Pairwise (cascade) summation; deterministic for a given input order.
double pairwise_sum(std::span<const double> terms);

}  // namespace nlpb
