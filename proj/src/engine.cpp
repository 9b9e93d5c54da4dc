// SPDX-License-Identifier: Apache-2.0
#include "nlpb/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace nlpb {

std::string_view to_string(RegularVerdict v) noexcept {
    switch (v) {
        case RegularVerdict::Regular: return "regular";
        case RegularVerdict::NonRegularIndicated: return "non-regular-indicated";
        case RegularVerdict::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

// ---------------------------------------------------------------------------
// VerificationReport

void VerificationReport::add(std::string id, double residual, double tolerance,
                             IndexRange range) {
    const bool pass = std::isfinite(residual) && residual <= tolerance;
    checks.push_back(Check{std::move(id), residual, tolerance, range, pass});
}

const Check* VerificationReport::find(std::string_view id) const {
    for (const auto& c : checks) {
        if (c.id == id) return &c;
    }
    return nullptr;
}

bool VerificationReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

double VerificationReport::max_residual() const {
    double m = 0.0;
    for (const auto& c : checks) {
        if (!std::isfinite(c.residual)) return std::numeric_limits<double>::infinity();
        m = std::max(m, c.residual);
    }
    return m;
}

// ---------------------------------------------------------------------------
// NlpbFamily

NlpbFamily::NlpbFamily(FockOperator a, FockOperator b, EpsilonSequence eps,
                       std::vector<StateVector> phi, std::vector<StateVector> eta,
                       std::size_t margin, Complex raw)
    : a_(std::move(a)),
      b_(std::move(b)),
      eps_(std::move(eps)),
      phi_(std::move(phi)),
      eta_(std::move(eta)),
      margin_(margin),
      raw_normalization_(raw) {}

NlpbFamily NlpbFamily::assemble(FockOperator a, FockOperator b, EpsilonSequence eps,
                                std::vector<StateVector> phi, std::vector<StateVector> eta,
                                std::size_t margin) {
    const Index d = a.dim();
    if (b.dim() != d) throw Error(ErrorCode::DimMismatch, "a and b differ in dimension");
    if (phi.size() != eta.size() || phi.size() < 2) {
        throw Error(ErrorCode::InvalidParams, "ladders must have equal length and depth >= 1");
    }
    const std::size_t depth = phi.size() - 1;
    if (static_cast<Index>(depth) >= d) {
        throw Error(ErrorCode::InvalidParams, "depth must be below the dimension");
    }
    if (depth < margin || static_cast<Index>(depth + margin) > d) {
        throw Error(ErrorCode::InvalidParams, "need margin <= depth and depth + margin <= dim");
    }
    if (eps.size() < depth + 1) {
        throw Error(ErrorCode::InvalidParams, "epsilon sequence shorter than the ladder");
    }
    for (std::size_t n = 0; n <= depth; ++n) {
        if (phi[n].dim() != d || eta[n].dim() != d) {
            throw Error(ErrorCode::DimMismatch, "ladder vector of wrong dimension");
        }
    }
    const Complex raw = inner(phi[0], eta[0]);
    if (std::abs(raw) == 0.0) {
        throw Error(ErrorCode::ZeroOverlap, "<phi_0, eta_0> = 0");
    }
    for (auto& v : eta) v = StateVector(v.coeffs() / raw);
    return NlpbFamily(std::move(a), std::move(b), std::move(eps), std::move(phi), std::move(eta),
                      margin, raw);
}

Matrix NlpbFamily::phi_matrix(std::optional<std::size_t> count) const {
    const std::size_t k = count.value_or(phi_.size());
    Matrix m(dim(), static_cast<Index>(k));
    for (std::size_t n = 0; n < k; ++n) m.col(static_cast<Index>(n)) = phi_[n].coeffs();
    return m;
}

Matrix NlpbFamily::eta_matrix(std::optional<std::size_t> count) const {
    const std::size_t k = count.value_or(eta_.size());
    Matrix m(dim(), static_cast<Index>(k));
    for (std::size_t n = 0; n < k; ++n) m.col(static_cast<Index>(n)) = eta_[n].coeffs();
    return m;
}

namespace {

// ||lhs - rhs|| relative to max(||rhs||, ref); ref is the norm of the vector
// the operator was applied to, so a vanishing right-hand side stays meaningful.
double relative_residual(const Vector& lhs, const Vector& rhs, double ref) {
    const double denom = std::max(rhs.norm(), ref);
    const double diff = (lhs - rhs).norm();
    return denom > 0.0 ? diff / denom : diff;
}

// Largest-magnitude entry rotated onto the positive real axis.
Vector fix_phase(Vector v) {
    // Near-ties resolve to the lowest index so the choice survives rounding.
    const double best = v.cwiseAbs().maxCoeff();
    if (!(best > 0.0)) return v;
    Index pick = 0;
    while (std::abs(v(pick)) < best * (1.0 - 1e-12)) ++pick;
    v *= std::conj(v(pick)) / std::abs(v(pick));
    return v;
}

struct Vacuum {
    Vector vector;
    double smallest;
    double second;
};

Vacuum minimal_right_vector(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullV);
    const auto& s = svd.singularValues();
    const Index k = s.size();
    return Vacuum{svd.matrixV().col(k - 1), s(k - 1), k >= 2 ? s(k - 2) : 0.0};
}

Matrix orthonormal_basis(const Matrix& columns) {
    Eigen::HouseholderQR<Matrix> qr(columns);
    return qr.householderQ() * Matrix::Identity(columns.rows(), columns.cols());
}

double condition_number(const Matrix& m) {
    Eigen::JacobiSVD<Matrix> svd(m);
    const auto& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    return smin > 0.0 ? s(0) / smin : std::numeric_limits<double>::infinity();
}

}  // namespace

// ---------------------------------------------------------------------------
// Builders

NlpbFamily build_from_vacua(const FockOperator& a, const FockOperator& b,
                            const EpsilonSequence& eps, std::size_t depth, std::size_t margin,
                            const Tolerances& tol) {
    if (a.dim() != b.dim()) throw Error(ErrorCode::DimMismatch, "a and b differ in dimension");
    if (depth == 0 || static_cast<Index>(depth + margin) > a.dim() ||
        static_cast<Index>(depth) >= a.dim()) {
        throw Error(ErrorCode::InvalidParams, "need 1 <= depth < dim and depth + margin <= dim");
    }
    if (eps.size() < depth + 1) {
        throw Error(ErrorCode::InvalidParams, "epsilon sequence shorter than the ladder");
    }

    const auto vacuum_of = [&](const Matrix& op, const char* name) {
        const double tau = tol.vacuum_rel * std::max(max_norm(op), 1.0);
        Vacuum v = minimal_right_vector(op);
        if (v.smallest > tau) {
            throw Error(ErrorCode::NoVacuum, std::string(name) + ": smallest singular value " +
                                                 format_real(v.smallest));
        }
        if (v.second <= tau) {
            throw Error(ErrorCode::DegenerateVacuum,
                        std::string(name) + ": kernel is more than one-dimensional");
        }
        return fix_phase(std::move(v.vector));
    };

    const Matrix& am = a.matrix();
    const Matrix& bm = b.matrix();
    const Vector phi0 = vacuum_of(am, "a");
    const Vector eta0 = vacuum_of(bm.adjoint(), "b^H");

    const Complex overlap = phi0.dot(eta0);
    if (std::abs(overlap) < tol.vacuum_rel) {
        throw Error(ErrorCode::ZeroOverlap, "vacua are orthogonal");
    }

    std::vector<StateVector> phi;
    std::vector<StateVector> eta;
    phi.reserve(depth + 1);
    eta.reserve(depth + 1);
    Vector p = phi0;
    Vector e = eta0 / overlap;
    const Matrix a_adj = am.adjoint();
    for (std::size_t n = 0; n <= depth; ++n) {
        if (n > 0) {
            const double s = std::sqrt(eps[n]);
            p = (bm * p / s).eval();
            e = (a_adj * e / s).eval();
        }
        phi.emplace_back(p);
        eta.emplace_back(e);
    }
    return NlpbFamily::assemble(a, b, eps, std::move(phi), std::move(eta), margin);
}

NlpbFamily build_by_similarity(const FockOperator& c, const FockOperator& t,
                               const EpsilonSequence& eps, std::size_t depth, std::size_t margin,
                               const std::optional<Matrix>& basis, const Tolerances& tol) {
    const Index d = c.dim();
    if (t.dim() != d) throw Error(ErrorCode::DimMismatch, "c and T differ in dimension");
    if (depth == 0 || static_cast<Index>(depth) >= d) {
        throw Error(ErrorCode::InvalidParams, "need 1 <= depth < dim");
    }
    if (eps.size() < depth + 1) {
        throw Error(ErrorCode::InvalidParams, "epsilon sequence shorter than the ladder");
    }
    if (condition_number(t.matrix()) > tol.cond_cap) {
        throw Error(ErrorCode::SingularT, "similarity is numerically singular");
    }

    const Matrix hat = basis ? *basis : Matrix(Matrix::Identity(d, static_cast<Index>(depth) + 1));
    if (hat.rows() != d || hat.cols() < static_cast<Index>(depth) + 1) {
        throw Error(ErrorCode::DimMismatch, "basis must hold depth + 1 columns of length dim");
    }

    const Matrix& cm = c.matrix();
    for (std::size_t n = 0; n <= depth; ++n) {
        const Index i = static_cast<Index>(n);
        const Vector lhs = cm * hat.col(i);
        const Vector rhs =
            n == 0 ? Vector(Vector::Zero(d)) : Vector(std::sqrt(eps[n]) * hat.col(i - 1));
        if (relative_residual(lhs, rhs, hat.col(i).norm()) > tol.residual_rel) {
            throw Error(ErrorCode::LadderMismatch,
                        "c fails its lowering relation at n = " + std::to_string(n));
        }
    }

    const Eigen::PartialPivLU<Matrix> lu(t.matrix());
    const Matrix t_inv = lu.inverse();
    const Matrix t_inv_adj = t_inv.adjoint();
    FockOperator a(t.matrix() * cm * t_inv);
    FockOperator b(t.matrix() * cm.adjoint() * t_inv);

    std::vector<StateVector> phi;
    std::vector<StateVector> eta;
    for (std::size_t n = 0; n <= depth; ++n) {
        const auto col = hat.col(static_cast<Index>(n));
        phi.emplace_back(Vector(t.matrix() * col));
        eta.emplace_back(Vector(t_inv_adj * col));
    }
    return NlpbFamily::assemble(std::move(a), std::move(b), eps, std::move(phi), std::move(eta),
                                margin);
}

// ---------------------------------------------------------------------------
// Verification battery

Matrix gram_matrix(const NlpbFamily& fam, std::size_t count) {
    return fam.phi_matrix(count).adjoint() * fam.eta_matrix(count);
}

VerificationReport verify_family(const NlpbFamily& fam, const Tolerances& tol) {
    VerificationReport report;
    const auto& eps = fam.eps();
    const auto& phi = fam.phi();
    const auto& eta = fam.eta();
    const Matrix& a = fam.a().matrix();
    const Matrix& b = fam.b().matrix();
    const Matrix a_adj = a.adjoint();
    const Matrix b_adj = b.adjoint();
    const Matrix m = b * a;
    const Matrix m_dual = a_adj * b_adj;
    const std::size_t depth = fam.depth();
    const std::size_t top = fam.interior_top();
    const std::size_t top_up = std::min(top, depth - 1);  // needs rung n + 1

    // Vacua.
    report.add("vacuum-phi", (a * phi[0].coeffs()).norm() / phi[0].norm(),
               tol.vacuum_rel * std::max(max_norm(a), 1.0), {0, 0});
    report.add("vacuum-eta", (b_adj * eta[0].coeffs()).norm() / eta[0].norm(),
               tol.vacuum_rel * std::max(max_norm(b), 1.0), {0, 0});

    double low_phi = 0.0, low_eta = 0.0, eig_phi = 0.0, eig_eta = 0.0;
    for (std::size_t n = 0; n <= top; ++n) {
        const Vector& p = phi[n].coeffs();
        const Vector& e = eta[n].coeffs();
        const double s = std::sqrt(eps[n]);
        const Vector zero = Vector::Zero(p.size());
        low_phi = std::max(low_phi, relative_residual(a * p, n ? Vector(s * phi[n - 1].coeffs()) : zero,
                                                      p.norm()));
        low_eta = std::max(low_eta, relative_residual(b_adj * e,
                                                      n ? Vector(s * eta[n - 1].coeffs()) : zero,
                                                      e.norm()));
        eig_phi = std::max(eig_phi, relative_residual(m * p, eps[n] * p, p.norm()));
        eig_eta = std::max(eig_eta, relative_residual(m_dual * e, eps[n] * e, e.norm()));
    }
    report.add("lowering-phi", low_phi, tol.battery, {0, top});
    report.add("lowering-eta", low_eta, tol.battery, {0, top});

    double up_phi = 0.0, up_eta = 0.0, com_phi = 0.0, com_eta = 0.0;
    for (std::size_t n = 0; n <= top_up; ++n) {
        const Vector& p = phi[n].coeffs();
        const Vector& e = eta[n].coeffs();
        const double s = std::sqrt(eps[n + 1]);
        const double gap = eps[n + 1] - eps[n];
        up_phi = std::max(up_phi, relative_residual(b * p, s * phi[n + 1].coeffs(), p.norm()));
        up_eta = std::max(up_eta, relative_residual(a_adj * e, s * eta[n + 1].coeffs(), e.norm()));
        const Vector com_p = a * (b * p) - b * (a * p);
        const Vector com_e = b_adj * (a_adj * e) - a_adj * (b_adj * e);
        com_phi = std::max(com_phi, relative_residual(com_p, gap * p, p.norm()));
        com_eta = std::max(com_eta, relative_residual(com_e, gap * e, e.norm()));
    }
    report.add("raising-phi", up_phi, tol.battery, {0, top_up});
    report.add("raising-eta", up_eta, tol.battery, {0, top_up});
    report.add("eigen-phi", eig_phi, tol.battery, {0, top});
    report.add("eigen-eta", eig_eta, tol.battery, {0, top});

    // Biorthogonality: diagonal against 1, off-diagonal as a cosine.
    const Matrix g = gram_matrix(fam, top + 1);
    double bio = 0.0;
    for (std::size_t i = 0; i <= top; ++i) {
        for (std::size_t j = 0; j <= top; ++j) {
            const Complex gij = g(static_cast<Index>(i), static_cast<Index>(j));
            const double dev = i == j ? std::abs(gij - 1.0)
                                      : std::abs(gij) / (phi[i].norm() * eta[j].norm());
            bio = std::max(bio, dev);
        }
    }
    report.add("biorthogonality", bio, tol.gram, {0, top});

    // Resolution of the identity. With a complete ladder the partial sum must
    // be the identity; otherwise it must fix the interior span.
    const Matrix pm = fam.phi_matrix();
    const Matrix em = fam.eta_matrix();
    const Matrix pi = pm * em.adjoint();
    double scale = 1.0;
    for (std::size_t n = 0; n <= depth; ++n) scale = std::max(scale, phi[n].norm() * eta[n].norm());
    const Index d = fam.dim();
    const Matrix id = Matrix::Identity(d, d);
    if (static_cast<Index>(depth) + 1 == d) {
        report.add("resolution-phi-eta", max_norm(pi - id) / scale, tol.battery, {0, depth});
        report.add("resolution-eta-phi", max_norm(pi.adjoint() - id) / scale, tol.battery,
                   {0, depth});
    } else {
        const Matrix q_phi = orthonormal_basis(fam.phi_matrix(top + 1));
        const Matrix q_eta = orthonormal_basis(fam.eta_matrix(top + 1));
        report.add("resolution-phi-eta", max_norm((pi - id) * q_phi) / scale, tol.battery,
                   {0, top});
        report.add("resolution-eta-phi", max_norm((pi.adjoint() - id) * q_eta) / scale,
                   tol.battery, {0, top});
    }

    report.add("commutator-phi", com_phi, tol.battery, {0, top_up});
    report.add("commutator-eta", com_eta, tol.battery, {0, top_up});
    return report;
}

// ---------------------------------------------------------------------------
// Frame operators and the similarity decomposition

FramePair frame_operators(const NlpbFamily& fam) {
    const Matrix pm = fam.phi_matrix();
    const Matrix em = fam.eta_matrix();
    return FramePair{FockOperator(pm * pm.adjoint()), FockOperator(em * em.adjoint())};
}

double check_metric_duality(const FockOperator& s_phi, const FockOperator& s_eta,
                            std::size_t top) {
    if (s_phi.dim() != s_eta.dim()) {
        throw Error(ErrorCode::DimMismatch, "frame operators differ in dimension");
    }
    const Index k = std::min<Index>(static_cast<Index>(top) + 1, s_phi.dim());
    const Matrix prod = s_phi.matrix() * s_eta.matrix();
    return max_norm(prod.topLeftCorner(k, k) - Matrix::Identity(k, k));
}

namespace {

// T = U S U^H + (1 - U U^H) from the thin SVD of the ladder matrix, so that
// T^-1 phi_n = U W^H e_n is orthonormal to working precision.
FrameDecomposition decompose_ladder(const Matrix& ladder, const Matrix& a, double cond_cap) {
    const Index d = ladder.rows();
    Eigen::JacobiSVD<Matrix> svd(ladder, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& s = svd.singularValues();
    const double smin = s(s.size() - 1);
    if (!(smin > 0.0) || s(0) / smin > cond_cap) {
        throw Error(ErrorCode::SingularT, "ladder span is numerically rank deficient");
    }
    const Matrix& u = svd.matrixU();
    const Matrix& w = svd.matrixV();
    const Matrix complement = Matrix::Identity(d, d) - u * u.adjoint();
    Matrix t = u * s.asDiagonal() * u.adjoint() + complement;
    Matrix t_inv = u * s.cwiseInverse().asDiagonal() * u.adjoint() + complement;
    t = 0.5 * (t + t.adjoint()).eval();
    t_inv = 0.5 * (t_inv + t_inv.adjoint()).eval();
    Matrix c = t_inv * a * t;
    return FrameDecomposition{FockOperator(std::move(t)), FockOperator(std::move(t_inv)),
                              FockOperator(std::move(c)), u * w.adjoint(), s};
}

}  // namespace

FrameDecomposition decompose(const NlpbFamily& fam, const Tolerances& tol) {
    return decompose_ladder(fam.phi_matrix(), fam.a().matrix(), tol.cond_cap);
}

IntertwiningResiduals check_intertwining(const NlpbFamily& fam, const Tolerances& tol) {
    const FrameDecomposition dec = decompose(fam, tol);
    const std::size_t top = fam.interior_top();
    const Matrix& a = fam.a().matrix();
    const Matrix& b = fam.b().matrix();
    const Matrix& t = dec.t.matrix();
    const Matrix& c = dec.c.matrix();
    const Matrix m = b * a;
    const Matrix m_dual = a.adjoint() * b.adjoint();
    const Matrix m0 = c.adjoint() * c;
    const Matrix s_phi = frame_operators(fam).s_phi.matrix();

    const Index k = static_cast<Index>(top) + 1;
    const Matrix q_hat = dec.orthonormal.leftCols(k);
    const Matrix q_eta = orthonormal_basis(fam.eta_matrix(top + 1));

    const auto scaled = [](const Matrix& r, const Matrix& x, const Matrix& y) {
        return max_norm(r) / std::max(1.0, max_norm(x) * max_norm(y));
    };
    IntertwiningResiduals out;
    out.number_root = scaled((m * t - t * m0) * q_hat, m, t);
    out.dual_root = scaled((t * m_dual - m0 * t) * q_eta, m_dual, t);
    out.number_frame = scaled((m * s_phi - s_phi * m_dual) * q_eta, m, s_phi);
    return out;
}

RoundtripResult similarity_roundtrip(const NlpbFamily& fam, const Tolerances& tol) {
    FrameDecomposition dec = decompose(fam, tol);
    VerificationReport report;
    const auto& eps = fam.eps();
    const std::size_t depth = fam.depth();
    const std::size_t top = fam.interior_top();
    const std::size_t top_up = std::min(top, depth - 1);
    const Matrix& hat = dec.orthonormal;
    const Matrix& c = dec.c.matrix();
    const Matrix c_adj = c.adjoint();
    const Index k = static_cast<Index>(top) + 1;

    const Matrix overlap = hat.leftCols(k).adjoint() * hat.leftCols(k);
    report.add("orthonormality", max_norm(overlap - Matrix::Identity(k, k)), tol.roundtrip,
               {0, top});

    double ladder = 0.0;
    for (std::size_t n = 0; n <= top; ++n) {
        const Index i = static_cast<Index>(n);
        const Vector rhs = n == 0 ? Vector(Vector::Zero(hat.rows()))
                                  : Vector(std::sqrt(eps[n]) * hat.col(i - 1));
        ladder = std::max(ladder, relative_residual(c * hat.col(i), rhs, 1.0));
    }
    report.add("ladder-c", ladder, tol.roundtrip, {0, top});

    double com = 0.0;
    for (std::size_t n = 0; n <= top_up; ++n) {
        const Vector v = hat.col(static_cast<Index>(n));
        const Vector lhs = c * (c_adj * v) - c_adj * (c * v);
        com = std::max(com, relative_residual(lhs, (eps[n + 1] - eps[n]) * v, 1.0));
    }
    report.add("commutator-c", com, tol.roundtrip, {0, top_up});

    // Rebuild the pair from (c, T) on the recovered orthonormal ladder.
    const NlpbFamily rebuilt =
        build_by_similarity(dec.c, dec.t, eps, depth, fam.margin(), hat, tol);
    const auto block_dev = [k](const Matrix& x, const Matrix& y) {
        return max_norm(x.topLeftCorner(k, k) - y.topLeftCorner(k, k)) /
               std::max(1.0, max_norm(y.topLeftCorner(k, k)));
    };
    report.add("reconstruct-a", block_dev(rebuilt.a().matrix(), fam.a().matrix()), tol.roundtrip,
               {0, top});
    report.add("reconstruct-b", block_dev(rebuilt.b().matrix(), fam.b().matrix()), tol.roundtrip,
               {0, top});

    return RoundtripResult{std::move(dec), std::move(report)};
}

// ---------------------------------------------------------------------------
// Riesz diagnostic

namespace {

bool diverging(const std::vector<double>& ratios, double stab) {
    if (ratios.empty()) return false;
    for (std::size_t i = 0; i < ratios.size(); ++i) {
        if (!(ratios[i] > 1.0 + stab)) return false;
        if (i > 0 && ratios[i] < ratios[i - 1]) return false;
    }
    return true;
}

}  // namespace

RieszDiagnostic riesz_diagnostic(const NlpbFamily& fam, const Tolerances& tol) {
    RieszDiagnostic out;
    const std::size_t depth = fam.depth();
    const std::size_t top = fam.interior_top();
    const bool complete = static_cast<Index>(depth) + 1 == fam.dim();

    if (complete) {
        out.depths = {depth};
    } else if (top >= 4) {
        out.depths = {top / 4, top / 2, top};
    } else {
        out.depths = {top};
    }

    const Matrix& a = fam.a().matrix();
    for (std::size_t dd : out.depths) {
        const Matrix ladder = fam.phi_matrix(dd + 1);
        Eigen::JacobiSVD<Matrix> svd(ladder, Eigen::ComputeThinU);
        const Eigen::VectorXd& s = svd.singularValues();
        out.upper.push_back(s(0) * s(0));
        out.lower.push_back(s(s.size() - 1) * s(s.size() - 1));

        // ||T^-1 a phi_n|| = ||c phi_hat_n|| with T the frame root at this depth.
        const Matrix& u = svd.matrixU();
        const Matrix proj = u.adjoint();
        double witness = 0.0;
        for (std::size_t n = 0; n <= dd; ++n) {
            const Vector ap = a * fam.phi()[n].coeffs();
            const Vector inside = proj * ap;
            const Vector outside = ap - u * inside;
            const Vector mapped = u * s.cwiseInverse().asDiagonal() * inside + outside;
            witness = std::max(witness, mapped.norm());
        }
        out.witness.push_back(witness);
    }

    if (complete) {
        out.verdict = RegularVerdict::Regular;
        return out;
    }
    if (out.depths.size() < 3) {
        out.verdict = RegularVerdict::Inconclusive;
        return out;
    }

    std::vector<double> up_ratio;
    std::vector<double> low_ratio;
    for (std::size_t i = 0; i + 1 < out.depths.size(); ++i) {
        up_ratio.push_back(out.upper[i + 1] / out.upper[i]);
        low_ratio.push_back(out.lower[i] / out.lower[i + 1]);
    }
    const double stab = tol.riesz_stability;
    if (diverging(up_ratio, stab) || diverging(low_ratio, stab)) {
        out.verdict = RegularVerdict::NonRegularIndicated;
    } else if (up_ratio.back() <= 1.0 + stab && low_ratio.back() <= 1.0 + stab) {
        out.verdict = RegularVerdict::Regular;
    } else {
        out.verdict = RegularVerdict::Inconclusive;
    }
    return out;
}

}  // namespace nlpb
