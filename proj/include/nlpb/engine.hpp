// SPDX-License-Identifier: Apache-2.0
//
// Construction and verification of non-linear pseudo-boson families.
//
// A family is the triple (a, b, eps) together with the two ladders
//
//     phi_n = b^n phi_0 / sqrt(eps_n!),    eta_n = (a^H)^n eta_0 / sqrt(eps_n!)
//
// for n = 0 .. depth, normalized so that <phi_0, eta_0> = 1. On a truncated
// space only indices n <= depth - margin ("interior") are checked.
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "nlpb/operator_core.hpp"

namespace nlpb {

struct IndexRange {
    std::size_t lo = 0;
    std::size_t hi = 0;  // inclusive
};

struct Check {
    std::string id;
    double residual = 0.0;
    double tolerance = 0.0;
    IndexRange range;
    bool pass = false;
};

enum class RegularVerdict { Regular, NonRegularIndicated, Inconclusive };

std::string_view to_string(RegularVerdict v) noexcept;

struct VerificationReport {
    std::vector<Check> checks;
    std::optional<double> riesz_lower;
    std::optional<double> riesz_upper;
    std::optional<RegularVerdict> regular_verdict;

    /// Appends a check. pass = residual is finite and <= tolerance.
    void add(std::string id, double residual, double tolerance, IndexRange range);
    const Check* find(std::string_view id) const;
    bool all_pass() const;
    double max_residual() const;
};

class NlpbFamily {
public:
    /// Validates shapes and lengths, then rescales eta so <phi_0, eta_0> = 1.
    /// Throws DimMismatch, InvalidParams or ZeroOverlap.
    static NlpbFamily assemble(FockOperator a, FockOperator b, EpsilonSequence eps,
                               std::vector<StateVector> phi, std::vector<StateVector> eta,
                               std::size_t margin);

    const FockOperator& a() const noexcept { return a_; }
    const FockOperator& b() const noexcept { return b_; }
    const EpsilonSequence& eps() const noexcept { return eps_; }
    const std::vector<StateVector>& phi() const noexcept { return phi_; }
    const std::vector<StateVector>& eta() const noexcept { return eta_; }

    Index dim() const noexcept { return a_.dim(); }
    std::size_t depth() const noexcept { return phi_.size() - 1; }
    std::size_t margin() const noexcept { return margin_; }
    /// Largest index on which identities are asserted: depth - margin.
    std::size_t interior_top() const noexcept { return depth() - margin_; }
    /// <phi_0, eta_0> before rescaling.
    Complex raw_normalization() const noexcept { return raw_normalization_; }

    /// Columns phi_0 .. phi_count-1 (all of them by default).
    Matrix phi_matrix(std::optional<std::size_t> count = std::nullopt) const;
    Matrix eta_matrix(std::optional<std::size_t> count = std::nullopt) const;

private:
    NlpbFamily(FockOperator a, FockOperator b, EpsilonSequence eps, std::vector<StateVector> phi,
               std::vector<StateVector> eta, std::size_t margin, Complex raw);

    FockOperator a_;
    FockOperator b_;
    EpsilonSequence eps_;
    std::vector<StateVector> phi_;
    std::vector<StateVector> eta_;
    std::size_t margin_;
    Complex raw_normalization_;
};

inline constexpr std::size_t kDefaultMargin = 2;

/// Extracts the vacua of a and b^H as minimal right singular vectors and
/// climbs both ladders. Throws NoVacuum, DegenerateVacuum, ZeroOverlap.
NlpbFamily build_from_vacua(const FockOperator& a, const FockOperator& b,
                            const EpsilonSequence& eps, std::size_t depth,
                            std::size_t margin = kDefaultMargin, const Tolerances& tol = {});

/// a = T c T^-1, b = T c^H T^-1, phi_n = T basis_n, eta_n = T^-H basis_n.
/// `basis` holds an orthonormal ladder for c in its columns (Fock basis when
/// omitted). Throws SingularT, LadderMismatch.
NlpbFamily build_by_similarity(const FockOperator& c, const FockOperator& t,
                               const EpsilonSequence& eps, std::size_t depth,
                               std::size_t margin = kDefaultMargin,
                               const std::optional<Matrix>& basis = std::nullopt,
                               const Tolerances& tol = {});

/// Full identity battery: vacua, lowering, raising, eigenvalue equations for
/// M = ba and its adjoint, biorthogonality, resolution of the identity and
/// the generalized commutator, each on both ladders where applicable.
VerificationReport verify_family(const NlpbFamily& fam, const Tolerances& tol = {});

/// G_nm = <phi_n, eta_m> for n, m < count.
Matrix gram_matrix(const NlpbFamily& fam, std::size_t count);

struct FramePair {
    FockOperator s_phi;
    FockOperator s_eta;
};

/// Finite frame sums over n <= depth.
FramePair frame_operators(const NlpbFamily& fam);

/// ||P (S_phi S_eta - 1) P||_max with P the projector on e_0 .. e_top.
double check_metric_duality(const FockOperator& s_phi, const FockOperator& s_eta,
                            std::size_t top);

/// Positive root of the frame operator on the ladder span, extended by the
/// identity on its orthogonal complement, and the conjugated ladder operator.
struct FrameDecomposition {
    FockOperator t;
    FockOperator t_inv;
    FockOperator c;
    Matrix orthonormal;               // columns: T^-1 phi_n, n = 0 .. depth
    Eigen::VectorXd singular_values;  // of [phi_0 ... phi_depth], descending
};

/// Throws SingularT when the ladder is numerically rank deficient.
FrameDecomposition decompose(const NlpbFamily& fam, const Tolerances& tol = {});

struct IntertwiningResiduals {
    double number_root = 0.0;    // M T - T M_0
    double dual_root = 0.0;      // T Mdual - M_0 T
    double number_frame = 0.0;   // M S_phi - S_phi Mdual
};

IntertwiningResiduals check_intertwining(const NlpbFamily& fam, const Tolerances& tol = {});

struct RoundtripResult {
    FrameDecomposition decomposition;
    VerificationReport report;
};

/// Decomposes the family into (T, c, orthonormal ladder), checks the
/// orthonormal ladder relations and rebuilds (a, b) from (c, T).
RoundtripResult similarity_roundtrip(const NlpbFamily& fam, const Tolerances& tol = {});

struct RieszDiagnostic {
    std::vector<std::size_t> depths;
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> witness;  // max_{n <= depth} ||c phi_hat_n|| = max sqrt(eps_n)
    RegularVerdict verdict = RegularVerdict::Inconclusive;
};

/// Frame bounds over an increasing sequence of depths and a growth-based
/// verdict. A heuristic: finite sections never prove (un)boundedness.
RieszDiagnostic riesz_diagnostic(const NlpbFamily& fam, const Tolerances& tol = {});

}  // namespace nlpb
