// SPDX-License-Identifier: Apache-2.0
#include "nlpb/model_zoo.hpp"

#include <cmath>

namespace nlpb::zoo {

std::string_view to_string(ModelKind kind) noexcept {
    switch (kind) {
        case ModelKind::FDeformed: return "f_deformed";
        case ModelKind::HDeformed: return "h_deformed";
        case ModelKind::SimilarityDiagonal: return "similarity_diagonal";
        case ModelKind::TwoByTwo: return "two_by_two";
        case ModelKind::Quon: return "quon";
    }
    return "unknown";
}

std::optional<ModelKind> parse_kind(std::string_view name) noexcept {
    for (ModelKind k : kAllKinds) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

double Polynomial::operator()(double x) const {
    double acc = 0.0;
    for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) acc = acc * x + *it;
    return acc;
}

Polynomial Polynomial::squared() const {
    if (coeffs.empty()) return {};
    std::vector<double> out(2 * coeffs.size() - 1, 0.0);
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        for (std::size_t j = 0; j < coeffs.size(); ++j) out[i + j] += coeffs[i] * coeffs[j];
    }
    return Polynomial{std::move(out)};
}

namespace {

Vector scaled_basis(Index dim, Index n, double scale) {
    Vector v = Vector::Zero(dim);
    v(n) = scale;
    return v;
}

ZooModel build_deformed(const Polynomial& f, Index dim, std::size_t depth, std::size_t margin,
                        bool require_f0_zero, const Tolerances& tol) {
    if (f.coeffs.empty()) throw Error(ErrorCode::InvalidF, "empty polynomial");
    if (require_f0_zero && f(0.0) != 0.0) throw Error(ErrorCode::InvalidF, "f(0) must be 0");
    for (std::size_t n = 1; n <= depth; ++n) {
        const double fn = f(static_cast<double>(n));
        if (!(fn > 0.0) || !std::isfinite(fn)) {
            throw Error(ErrorCode::InvalidF, "f(n) <= 0 at n = " + std::to_string(n));
        }
    }

    EpsilonSequence eps = [&] {
        try {
            return EpsilonSequence::generate(static_cast<std::size_t>(dim), [&](std::size_t n) {
                return static_cast<double>(n) * f(static_cast<double>(n));
            });
        } catch (const Error& e) {
            throw Error(ErrorCode::NonMonotone, e.what());
        }
    }();

    const FockOperator a = lowering(EpsilonSequence::linear(static_cast<std::size_t>(dim)), dim);
    const FockOperator b = adjoint(a);
    const FockOperator fn =
        apply_function(b * a, [&](Complex x) { return Complex(f(x.real()), 0.0); }, tol);
    const FockOperator big_b = fn * b;

    ZooModel model{build_from_vacua(a, big_b, eps, depth, margin, tol), {}, {}, a, std::nullopt, {}};

    // phi_n = sqrt([f(n)]!) e_n and eta_n = e_n / sqrt([f(n)]!).
    double log_ffact = 0.0;
    for (std::size_t n = 0; n <= depth; ++n) {
        if (n > 0) log_ffact += std::log(f(static_cast<double>(n)));
        const Index i = static_cast<Index>(n);
        model.expected_phi.push_back(scaled_basis(dim, i, std::exp(0.5 * log_ffact)));
        model.expected_eta.push_back(scaled_basis(dim, i, std::exp(-0.5 * log_ffact)));
    }
    return model;
}

}  // namespace

ZooModel make_f_deformed(const Polynomial& f, Index dim, std::size_t depth, std::size_t margin,
                         const Tolerances& tol) {
    return build_deformed(f, dim, depth, margin, true, tol);
}

ZooModel make_h_deformed(const Polynomial& h, Index dim, std::size_t depth, std::size_t margin,
                         const Tolerances& tol) {
    if (h.coeffs.empty()) throw Error(ErrorCode::InvalidF, "empty polynomial");
    const Polynomial f = h.squared();
    ZooModel model = build_deformed(f, dim, depth, margin, false, tol);
    for (std::size_t n = 0; n < model.family.eps().size(); ++n) {
        const double hn = h(static_cast<double>(n));
        const double expected = static_cast<double>(n) * hn * hn;
        if (std::abs(model.family.eps()[n] - expected) > 1e-12 * std::max(1.0, expected)) {
            throw Error(ErrorCode::InvalidF, "eps_n != n h(n)^2 at n = " + std::to_string(n));
        }
    }
    if (h(0.0) != 0.0) {
        model.warnings.emplace_back("h(0) != 0: B^H still annihilates e_0 because b = a^H");
    }
    return model;
}

// ---------------------------------------------------------------------------

double two_by_two_epsilon(double beta, double delta) {
    return -(beta - delta) * (beta - delta) / (beta * delta);
}

ZooModel make_two_by_two(double beta, double delta) {
    if (!std::isfinite(beta) || !std::isfinite(delta) || beta == 0.0 || delta == 0.0) {
        throw Error(ErrorCode::InvalidParams, "beta and delta must be finite and nonzero");
    }
    if (beta == delta) throw Error(ErrorCode::InvalidParams, "beta == delta: A and B commute");
    if (beta * delta > 0.0) {
        throw Error(ErrorCode::NegativeEpsilon, "beta * delta > 0 gives eps_1 < 0");
    }
    const double eps1 = two_by_two_epsilon(beta, delta);
    const double root = std::sqrt(eps1);
    const double y = 1.0 / std::sqrt(1.0 + beta * beta);
    const double w = 1.0 / (y * (beta - delta));

    Matrix am(2, 2);
    am << -1.0, beta, -1.0 / beta, 1.0;
    Matrix bm(2, 2);
    bm << -1.0, delta, -1.0 / delta, 1.0;

    Vector phi0(2), eta0(2), phi1(2), eta1(2);
    phi0 << y * beta, y;
    eta0 << w, -w * delta;
    phi1 << y / root * (delta - beta), y / root * (1.0 - beta / delta);
    eta1 << w / root * (delta / beta - 1.0), w / root * (beta - delta);

    std::vector<StateVector> phi{StateVector(phi0), StateVector(phi1)};
    std::vector<StateVector> eta{StateVector(eta0), StateVector(eta1)};
    NlpbFamily fam = NlpbFamily::assemble(FockOperator(am), FockOperator(bm),
                                          make_epsilon({0.0, eps1}), std::move(phi),
                                          std::move(eta), 0);
    return ZooModel{std::move(fam), {phi0, phi1}, {eta0, eta1}, std::nullopt, std::nullopt, {}};
}

// ---------------------------------------------------------------------------

std::vector<double> oscillating_weights(double alpha, double beta, Index dim) {
    std::vector<double> s(static_cast<std::size_t>(dim));
    for (std::size_t n = 0; n < s.size(); ++n) {
        s[n] = 0.5 * (alpha + beta) + 0.5 * (beta - alpha) * std::sin(static_cast<double>(n));
    }
    return s;
}

ZooModel make_similarity_diagonal(std::span<const double> s, const EpsilonSequence& eps,
                                  Index dim, std::size_t depth, std::size_t margin,
                                  const Tolerances& tol) {
    if (s.size() < static_cast<std::size_t>(dim)) {
        throw Error(ErrorCode::InvalidS, "need one weight per basis vector");
    }
    for (std::size_t n = 0; n < static_cast<std::size_t>(dim); ++n) {
        if (!(s[n] > 0.0) || !std::isfinite(s[n])) {
            throw Error(ErrorCode::InvalidS, "s_n must be positive and finite (n = " +
                                                 std::to_string(n) + ")");
        }
    }
    const FockOperator c = lowering(eps, dim);
    const FockOperator t = FockOperator::diagonal(s.first(static_cast<std::size_t>(dim)));
    ZooModel model{build_by_similarity(c, t, eps, depth, margin, std::nullopt, tol), {}, {}, c, t,
                   {}};
    for (std::size_t n = 0; n <= depth; ++n) {
        const Index i = static_cast<Index>(n);
        model.expected_phi.push_back(scaled_basis(dim, i, s[n]));
        model.expected_eta.push_back(scaled_basis(dim, i, 1.0 / s[n]));
    }
    return model;
}

// ---------------------------------------------------------------------------

double q_mutator_residual(const FockOperator& c, double q) {
    const Matrix& cm = c.matrix();
    const Index k = c.dim() - 1;
    const Matrix mut = cm * cm.adjoint() - q * (cm.adjoint() * cm);
    return max_norm(mut.topLeftCorner(k, k) - Matrix::Identity(k, k));
}

ZooModel make_quon(double q, Index dim, std::size_t depth, bool use_n0_similarity,
                   std::size_t margin, const Tolerances& tol) {
    if (!std::isfinite(q) || q <= -1.0 || q >= 1.0) {
        throw Error(ErrorCode::InvalidQ, "q must lie in (-1, 1)");
    }
    if (q <= 0.0) {
        throw Error(ErrorCode::InvalidQ, "q <= 0 gives a spectrum that is not strictly increasing");
    }
    const EpsilonSequence eps = EpsilonSequence::quon(q, static_cast<std::size_t>(dim));
    const FockOperator c = lowering(eps, dim);
    const double mutator = q_mutator_residual(c, q);
    if (mutator > tol.residual_rel) {
        throw Error(ErrorCode::LadderMismatch, "q-mutator residual " + format_real(mutator));
    }

    const FockOperator t =
        use_n0_similarity
            ? apply_function(adjoint(c) * c, [](Complex x) { return std::exp(x); }, tol)
            : FockOperator::identity(dim);
    ZooModel model{build_by_similarity(c, t, eps, depth, margin, std::nullopt, tol), {}, {}, c, t,
                   {}};
    for (std::size_t n = 0; n <= depth; ++n) {
        const Index i = static_cast<Index>(n);
        const double w = use_n0_similarity ? std::exp(eps[n]) : 1.0;
        model.expected_phi.push_back(scaled_basis(dim, i, w));
        model.expected_eta.push_back(scaled_basis(dim, i, 1.0 / w));
    }
    return model;
}

// ---------------------------------------------------------------------------

ZooModel make_bounded_similarity(const NlpbFamily& base, const FockOperator& s,
                                 const Tolerances& tol) {
    if (s.dim() != base.dim()) throw Error(ErrorCode::DimMismatch, "S and family differ in size");
    if (!is_hermitian(s.matrix(), tol.herm_rel)) {
        throw Error(ErrorCode::NotHermitianS, "S must be self-adjoint");
    }
    const FockOperator e = apply_function(s, [](Complex x) { return std::exp(x); }, tol);
    const FockOperator e_inv = apply_function(s, [](Complex x) { return std::exp(-x); }, tol);
    Eigen::JacobiSVD<Matrix> svd(e.matrix());
    const auto& sv = svd.singularValues();
    if (sv(0) / sv(sv.size() - 1) > tol.cond_cap) {
        throw Error(ErrorCode::SingularT, "e^S is too ill-conditioned");
    }

    const Matrix& em = e.matrix();
    const Matrix& eim = e_inv.matrix();
    FockOperator a(em * base.a().matrix() * eim);
    FockOperator b(em * base.b().matrix() * eim);

    std::vector<StateVector> phi;
    std::vector<StateVector> eta;
    for (std::size_t n = 0; n <= base.depth(); ++n) {
        phi.emplace_back(Vector(em * base.phi()[n].coeffs()));
        eta.emplace_back(Vector(eim * base.eta()[n].coeffs()));
    }

    // The conjugated ladder climbed from the conjugated vacuum must land on
    // e^S phi_n.
    Vector climb = phi[0].coeffs();
    for (std::size_t n = 1; n <= base.depth(); ++n) {
        climb = (b.matrix() * climb / std::sqrt(base.eps()[n])).eval();
        const Vector& target = phi[n].coeffs();
        if ((climb - target).norm() > tol.residual_rel * target.norm()) {
            throw Error(ErrorCode::LadderMismatch,
                        "conjugated ladder drifts at n = " + std::to_string(n));
        }
    }

    ZooModel model{NlpbFamily::assemble(std::move(a), std::move(b), base.eps(), phi, eta,
                                        base.margin()),
                   {}, {}, std::nullopt, std::nullopt, {}};
    for (const auto& v : phi) model.expected_phi.push_back(v.coeffs());
    for (const auto& v : eta) model.expected_eta.push_back(v.coeffs());
    return model;
}

// ---------------------------------------------------------------------------

EpsilonSequence model_epsilon(const ModelSpec& spec) {
    const auto len = static_cast<std::size_t>(spec.dim);
    switch (spec.kind) {
        case ModelKind::FDeformed:
        case ModelKind::HDeformed: {
            const Polynomial f = spec.kind == ModelKind::FDeformed ? Polynomial{spec.poly}
                                                                   : Polynomial{spec.poly}.squared();
            return EpsilonSequence::generate(len, [&](std::size_t n) {
                return static_cast<double>(n) * f(static_cast<double>(n));
            });
        }
        case ModelKind::TwoByTwo:
            return make_epsilon({0.0, two_by_two_epsilon(spec.beta, spec.delta)});
        case ModelKind::Quon:
            return EpsilonSequence::quon(spec.q, len);
        case ModelKind::SimilarityDiagonal:
            switch (spec.eps_kind) {
                case ModelSpec::EpsKind::Linear: return EpsilonSequence::linear(len);
                case ModelSpec::EpsKind::Quon: return EpsilonSequence::quon(spec.eps_q, len);
                case ModelSpec::EpsKind::Explicit: return make_epsilon(spec.eps_values);
            }
    }
    throw Error(ErrorCode::ConfigError, "unknown model kind");
}

ZooModel instantiate(const ModelSpec& spec, const Tolerances& tol) {
    switch (spec.kind) {
        case ModelKind::FDeformed:
            return make_f_deformed(Polynomial{spec.poly}, spec.dim, spec.depth, spec.margin, tol);
        case ModelKind::HDeformed:
            return make_h_deformed(Polynomial{spec.poly}, spec.dim, spec.depth, spec.margin, tol);
        case ModelKind::TwoByTwo:
            return make_two_by_two(spec.beta, spec.delta);
        case ModelKind::Quon:
            return make_quon(spec.q, spec.dim, spec.depth, spec.use_n0_similarity, spec.margin, tol);
        case ModelKind::SimilarityDiagonal: {
            const std::vector<double> s =
                spec.s.empty() ? oscillating_weights(spec.s_alpha, spec.s_beta, spec.dim) : spec.s;
            return make_similarity_diagonal(s, model_epsilon(spec), spec.dim, spec.depth,
                                            spec.margin, tol);
        }
    }
    throw Error(ErrorCode::ConfigError, "unknown model kind");
}

std::vector<ModelInfo> model_catalog() {
    return {
        {ModelKind::FDeformed, "f: polynomial coefficients (low to high)",
         "f(0) = 0, f(n) > 0 for 1 <= n <= depth, n f(n) strictly increasing",
         "A = a, B = f(N) a^H with eps_n = n f(n)"},
        {ModelKind::HDeformed, "h: polynomial coefficients (low to high)",
         "h(n)^2 > 0 for 1 <= n <= depth; h(0) != 0 warns",
         "A = a, B = h(N)^2 a^H with eps_n = n h(n)^2"},
        {ModelKind::SimilarityDiagonal,
         "s: weights, or s_alpha, s_beta: window; eps: linear | quon (eps_q) | explicit (eps_values)",
         "0 < s_alpha <= s_n <= s_beta < inf", "A = S a S^-1, B = S a^H S^-1 with S = diag(s_n)"},
        {ModelKind::TwoByTwo, "beta, delta: reals", "beta != delta, beta * delta < 0",
         "exact pair of 2x2 matrices with eps_1 = -(beta - delta)^2 / (beta delta)"},
        {ModelKind::Quon, "q: real; use_N0_similarity: bool", "0 < q < 1",
         "q-mutator ladder c c^H - q c^H c = 1, optionally conjugated by exp(c^H c)"},
    };
}

}  // namespace nlpb::zoo
