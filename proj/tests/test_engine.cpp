// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nlpb/engine.hpp"
#include "nlpb/model_zoo.hpp"

using namespace nlpb;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
    try {
        f();
    } catch (const Error& e) {
        return e.code();
    }
    ADD_FAILURE() << "expected an Error";
    return ErrorCode::ConfigError;
}

Matrix random_unitary(std::mt19937& rng, Index d) {
    std::normal_distribution<double> g(0.0, 1.0);
    Matrix raw(d, d);
    for (Index i = 0; i < d; ++i) {
        for (Index j = 0; j < d; ++j) raw(i, j) = Complex(g(rng), g(rng));
    }
    return raw.householderQr().householderQ();
}

// T = U diag(s) V^H with s in [0.5, 2]: a general, well-conditioned similarity.
Matrix random_similarity(std::mt19937& rng, Index d) {
    std::uniform_real_distribution<double> u(0.5, 2.0);
    Eigen::VectorXd s(d);
    for (Index i = 0; i < d; ++i) s(i) = u(rng);
    return random_unitary(rng, d) * s.cast<Complex>().asDiagonal() * random_unitary(rng, d).adjoint();
}

EpsilonSequence random_quon(std::mt19937& rng, std::size_t len) {
    std::uniform_real_distribution<double> u(0.4, 0.8);
    return EpsilonSequence::quon(u(rng), len);
}

// Complete ladder (depth = dim - 1) under a dense similarity.
NlpbFamily random_complete_family(std::mt19937& rng, Index dim) {
    const EpsilonSequence eps = random_quon(rng, static_cast<std::size_t>(dim));
    const FockOperator t(random_similarity(rng, dim));
    return build_by_similarity(lowering(eps, dim), t, eps, static_cast<std::size_t>(dim) - 1, 0);
}

// Truncated ladder under a similarity that preserves span{e_0 .. e_depth}.
NlpbFamily random_truncated_family(std::mt19937& rng, Index dim, std::size_t depth) {
    const EpsilonSequence eps = random_quon(rng, static_cast<std::size_t>(dim));
    const Index k = static_cast<Index>(depth) + 1;
    Matrix t = Matrix::Identity(dim, dim);
    t.topLeftCorner(k, k) = random_similarity(rng, k);
    std::uniform_real_distribution<double> u(0.5, 2.0);
    for (Index i = k; i < dim; ++i) t(i, i) = u(rng);
    return build_by_similarity(lowering(eps, dim), FockOperator(t), eps, depth);
}

bool passes(const VerificationReport& r, std::string_view id) {
    const Check* c = r.find(id);
    return c != nullptr && c->pass;
}

}  // namespace

TEST(BuildFromVacua, TwoByTwoMatchesHandComputedLadder) {
    const double beta = 2.0;
    const double delta = -1.0;
    Matrix am(2, 2);
    am << -1.0, beta, -1.0 / beta, 1.0;
    Matrix bm(2, 2);
    bm << -1.0, delta, -1.0 / delta, 1.0;
    const double eps1 = -(beta - delta) * (beta - delta) / (beta * delta);
    ASSERT_DOUBLE_EQ(eps1, 4.5);
    const NlpbFamily fam = build_from_vacua(FockOperator(am), FockOperator(bm),
                                            make_epsilon({0.0, eps1}), 1, 0);

    const double y = 1.0 / std::sqrt(5.0);
    const double w = 1.0 / (3.0 * y);
    const double r = std::sqrt(4.5);
    Vector phi0(2), eta0(2), phi1(2), eta1(2);
    phi0 << 2.0 * y, y;
    eta0 << w, w;
    phi1 << -3.0 * y / r, 3.0 * y / r;
    eta1 << -1.5 * w / r, 3.0 * w / r;
    EXPECT_LT((fam.phi()[0].coeffs() - phi0).norm(), 1e-14);
    EXPECT_LT((fam.eta()[0].coeffs() - eta0).norm(), 1e-14);
    EXPECT_LT((fam.phi()[1].coeffs() - phi1).norm(), 1e-14);
    EXPECT_LT((fam.eta()[1].coeffs() - eta1).norm(), 1e-14);

    // S_phi = y^2 diag(beta (beta - delta), 1 - beta / delta) in this basis.
    const FramePair frames = frame_operators(fam);
    Matrix s_phi = Matrix::Zero(2, 2);
    s_phi(0, 0) = y * y * beta * (beta - delta);
    s_phi(1, 1) = y * y * (1.0 - beta / delta);
    EXPECT_LT(max_norm(frames.s_phi.matrix() - s_phi), 1e-14);
    EXPECT_LT(max_norm(frames.s_phi.matrix() * frames.s_eta.matrix() - Matrix::Identity(2, 2)),
              1e-13);

    const VerificationReport rep = verify_family(fam);
    EXPECT_TRUE(rep.all_pass()) << rep.max_residual();
    EXPECT_LT(rep.max_residual(), 1e-13);
}

TEST(BuildFromVacua, VacuumErrors) {
    const auto eps = EpsilonSequence::linear(6);
    const FockOperator a = lowering(eps, 6);
    EXPECT_EQ(code_of([&] { build_from_vacua(FockOperator::identity(6), adjoint(a), eps, 3); }),
              ErrorCode::NoVacuum);
    EXPECT_EQ(code_of([&] { build_from_vacua(FockOperator::zero(6), adjoint(a), eps, 3); }),
              ErrorCode::DegenerateVacuum);
    // ker a = e_0, ker b^H = e_5 for b = a: orthogonal vacua.
    Matrix bm = Matrix::Zero(6, 6);
    for (Index n = 0; n + 1 < 6; ++n) bm(n + 1, n) = 1.0;
    EXPECT_EQ(code_of([&] { build_from_vacua(a, FockOperator(bm.adjoint()), eps, 3); }),
              ErrorCode::ZeroOverlap);
    EXPECT_EQ(code_of([&] { build_from_vacua(a, adjoint(a), eps, 6); }), ErrorCode::InvalidParams);
}

TEST(BuildFromVacua, PhaseConventionIsDeterministic) {
    // A global phase on the operators must not change the ladder.
    const auto eps = EpsilonSequence::linear(8);
    const FockOperator a = lowering(eps, 8);
    const Complex phase = std::polar(1.0, 0.7);
    const NlpbFamily f1 = build_from_vacua(a, adjoint(a), eps, 5);
    const NlpbFamily f2 = build_from_vacua(phase * a, adjoint(a), eps, 5);
    EXPECT_EQ(f1.phi()[0].coeffs(), f2.phi()[0].coeffs());
    EXPECT_GT(f1.phi()[0][0].real(), 0.0);
}

TEST(VerifyFamily, PerturbedSpectrumFailsBattery) {
    // f(x) = x with eps_n = n f(n) (1 + 0.1): ladder and Gram checks break.
    const auto fam = zoo::make_f_deformed(zoo::Polynomial{{0.0, 1.0}}, 30, 20).family;
    const auto bad = EpsilonSequence::generate(30, [](std::size_t n) {
        return 1.1 * static_cast<double>(n * n);
    });
    const NlpbFamily perturbed = build_from_vacua(fam.a(), fam.b(), bad, 20);
    const VerificationReport rep = verify_family(perturbed);
    EXPECT_FALSE(rep.all_pass());
    EXPECT_GE(rep.max_residual(), 1e-2);
    EXPECT_FALSE(passes(rep, "lowering-phi"));
    EXPECT_FALSE(passes(rep, "biorthogonality"));
}

TEST(VerifyFamily, LoweringAndBiorthogonalityAgreeAcrossZoo) {
    // Valid families pass both, perturbed spectra fail both.
    std::vector<NlpbFamily> families;
    families.push_back(zoo::make_f_deformed(zoo::Polynomial{{0.0, 1.0}}, 30, 20).family);
    families.push_back(zoo::make_h_deformed(zoo::Polynomial{{1.0, 0.5}}, 24, 16).family);
    families.push_back(zoo::make_quon(0.5, 40, 30, true).family);
    families.push_back(zoo::make_two_by_two(2.0, -1.0).family);
    const auto s = zoo::oscillating_weights(0.5, 1.5, 30);
    families.push_back(
        zoo::make_similarity_diagonal(s, EpsilonSequence::linear(30), 30, 20).family);

    for (const auto& fam : families) {
        const VerificationReport good = verify_family(fam);
        EXPECT_TRUE(passes(good, "lowering-phi"));
        EXPECT_EQ(passes(good, "lowering-phi"), passes(good, "biorthogonality"));

        std::vector<double> v(fam.eps().values().begin(), fam.eps().values().end());
        for (std::size_t n = 1; n < v.size(); ++n) v[n] *= 1.1;
        const NlpbFamily bad =
            build_from_vacua(fam.a(), fam.b(), make_epsilon(v), fam.depth(), fam.margin());
        const VerificationReport rep = verify_family(bad);
        EXPECT_EQ(passes(rep, "lowering-phi"), passes(rep, "biorthogonality"));
        EXPECT_FALSE(passes(rep, "lowering-phi"));
    }
}

TEST(VerifyFamily, LinearSpectrumGivesCanonicalCommutator) {
    const auto s = zoo::oscillating_weights(0.5, 1.5, 20);
    const NlpbFamily fam =
        zoo::make_similarity_diagonal(s, EpsilonSequence::linear(20), 20, 14).family;
    const Matrix com = commutator(fam.a(), fam.b()).matrix();
    for (std::size_t n = 0; n + 1 <= fam.interior_top(); ++n) {
        const Vector& p = fam.phi()[n].coeffs();
        EXPECT_LT((com * p - p).norm(), 1e-12 * p.norm()) << n;
    }
}

namespace {

void expect_family_properties(const NlpbFamily& fam, int trial) {
    const VerificationReport rep = verify_family(fam);
    EXPECT_TRUE(rep.all_pass()) << "trial " << trial << " max " << rep.max_residual();

    const std::size_t k = fam.interior_top() + 1;
    const Matrix g = gram_matrix(fam, k);
    EXPECT_LT(max_norm(g - Matrix::Identity(static_cast<Index>(k), static_cast<Index>(k))), 1e-9);

    const FramePair frames = frame_operators(fam);
    EXPECT_TRUE(is_hermitian(frames.s_phi.matrix(), 1e-14));
    EXPECT_TRUE(is_hermitian(frames.s_eta.matrix(), 1e-14));
    Eigen::SelfAdjointEigenSolver<Matrix> es(frames.s_phi.matrix());
    EXPECT_GE(es.eigenvalues().minCoeff(), -1e-12 * es.eigenvalues().maxCoeff());
    EXPECT_LT(check_metric_duality(frames.s_phi, frames.s_eta, fam.interior_top()), 1e-9);

    const RoundtripResult rt = similarity_roundtrip(fam);
    EXPECT_TRUE(rt.report.all_pass()) << "trial " << trial << " max " << rt.report.max_residual();
    const IntertwiningResiduals iw = check_intertwining(fam);
    EXPECT_LT(iw.number_root, 1e-8) << trial;
    EXPECT_LT(iw.dual_root, 1e-8) << trial;
    EXPECT_LT(iw.number_frame, 1e-8) << trial;
}

}  // namespace

TEST(Properties, RandomCompleteFamilies) {
    std::mt19937 rng(424242);
    for (int trial = 0; trial < 12; ++trial) {
        const Index dim = 3 + static_cast<Index>(rng() % 14);
        expect_family_properties(random_complete_family(rng, dim), trial);
    }
}

TEST(Properties, RandomTruncatedFamilies) {
    std::mt19937 rng(1337);
    for (int trial = 0; trial < 12; ++trial) {
        const Index dim = 8 + static_cast<Index>(rng() % 16);
        const std::size_t depth = static_cast<std::size_t>(dim) - 3 - rng() % 3;
        expect_family_properties(random_truncated_family(rng, dim, depth), trial);
    }
}

TEST(Properties, DenseSimilarityOnTruncatedSpaceIsOutOfReach) {
    // A similarity mixing the ladder span with its complement cannot be
    // recovered from a finite ladder: the battery holds, the round trip does not.
    std::mt19937 rng(77);
    const Index dim = 12;
    const EpsilonSequence eps = EpsilonSequence::quon(0.5, 12);
    const NlpbFamily fam =
        build_by_similarity(lowering(eps, dim), FockOperator(random_similarity(rng, dim)), eps, 9);
    EXPECT_TRUE(verify_family(fam).all_pass());
    EXPECT_FALSE(similarity_roundtrip(fam).report.all_pass());
}

TEST(Decompose, RootAgreesWithPositiveSqrtOnLadderSpan) {
    const NlpbFamily fam = zoo::make_quon(0.5, 20, 14, true).family;
    const FrameDecomposition dec = decompose(fam);
    const FramePair frames = frame_operators(fam);
    const Matrix root = positive_sqrt(frames.s_phi).matrix();
    const Matrix& u = dec.orthonormal;  // spans the same space as the ladder
    const Matrix span = fam.phi_matrix();
    const Matrix q = span.householderQr().householderQ() *
                     Matrix::Identity(span.rows(), span.cols());
    EXPECT_LT(max_norm(dec.t.matrix() * q - root * q), 1e-10 * max_norm(root));
    EXPECT_LT(max_norm(dec.t.matrix() * dec.t_inv.matrix() -
                       Matrix::Identity(fam.dim(), fam.dim())),
              1e-10);
    EXPECT_LT(max_norm(u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())), 1e-12);
}

TEST(Roundtrip, QuonAndSimilarityDiagonal) {
    const auto s = zoo::oscillating_weights(0.5, 1.5, 40);
    for (const NlpbFamily& fam :
         {zoo::make_quon(0.5, 40, 30, true).family,
          zoo::make_similarity_diagonal(s, EpsilonSequence::quon(0.5, 40), 40, 30).family}) {
        const RoundtripResult rt = similarity_roundtrip(fam);
        for (const auto& c : rt.report.checks) EXPECT_LE(c.residual, 1e-8) << c.id;
    }
}

TEST(Riesz, VerdictsOnZooFamilies) {
    EXPECT_EQ(riesz_diagnostic(zoo::make_quon(0.5, 40, 30, true).family).verdict,
              RegularVerdict::Regular);
    EXPECT_EQ(riesz_diagnostic(zoo::make_two_by_two(2.0, -1.0).family).verdict,
              RegularVerdict::Regular);
    const auto s = zoo::oscillating_weights(0.5, 1.5, 40);
    EXPECT_EQ(
        riesz_diagnostic(
            zoo::make_similarity_diagonal(s, EpsilonSequence::linear(40), 40, 30).family)
            .verdict,
        RegularVerdict::Regular);
    const RieszDiagnostic f =
        riesz_diagnostic(zoo::make_f_deformed(zoo::Polynomial{{0.0, 1.0}}, 30, 20).family);
    EXPECT_EQ(f.verdict, RegularVerdict::NonRegularIndicated);
    for (std::size_t i = 0; i + 1 < f.depths.size(); ++i) {
        EXPECT_GE(f.upper[i + 1] / f.upper[i], 10.0);
        EXPECT_LE(f.witness[i], f.witness[i + 1]);
    }
    // Too shallow to say anything.
    EXPECT_EQ(riesz_diagnostic(zoo::make_quon(0.5, 6, 4, true).family).verdict,
              RegularVerdict::Inconclusive);
}

TEST(Riesz, WitnessIsMonotoneInDepth) {
    std::mt19937 rng(5);
    for (int trial = 0; trial < 5; ++trial) {
        const NlpbFamily fam = random_truncated_family(rng, 24, 20);
        const RieszDiagnostic d = riesz_diagnostic(fam);
        for (std::size_t i = 0; i + 1 < d.witness.size(); ++i) {
            EXPECT_LE(d.witness[i], d.witness[i + 1] * (1.0 + 1e-12));
        }
    }
}

TEST(Assemble, RejectsMismatchedLadders) {
    const auto eps = EpsilonSequence::linear(4);
    const FockOperator a = lowering(eps, 4);
    std::vector<StateVector> phi{StateVector::basis(4, 0), StateVector::basis(4, 1)};
    std::vector<StateVector> eta{StateVector::basis(4, 0)};
    EXPECT_THROW(NlpbFamily::assemble(a, adjoint(a), eps, phi, eta, 0), Error);
    std::vector<StateVector> eta_orth{StateVector::basis(4, 1), StateVector::basis(4, 0)};
    EXPECT_EQ(code_of([&] { NlpbFamily::assemble(a, adjoint(a), eps, phi, eta_orth, 0); }),
              ErrorCode::ZeroOverlap);
}

TEST(VerificationReport, NonFiniteResidualFails) {
    VerificationReport r;
    r.add("x", std::nan(""), 1.0, {0, 0});
    r.add("y", 0.5, 1.0, {0, 0});
    EXPECT_FALSE(r.find("x")->pass);
    EXPECT_TRUE(r.find("y")->pass);
    EXPECT_FALSE(r.all_pass());
    EXPECT_EQ(r.find("z"), nullptr);
}
