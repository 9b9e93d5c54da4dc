// SPDX-License-Identifier: Apache-2.0
#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "nlpb/model_zoo.hpp"

using namespace nlpb;
using namespace nlpb::zoo;

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

double closed_form_gap(const ZooModel& m) {
    double worst = 0.0;
    for (std::size_t n = 0; n < m.expected_phi.size(); ++n) {
        const double s = std::max(1.0, m.expected_phi[n].norm());
        worst = std::max(worst, (m.family.phi()[n].coeffs() - m.expected_phi[n]).norm() / s);
        const double t = std::max(1.0, m.expected_eta[n].norm());
        worst = std::max(worst, (m.family.eta()[n].coeffs() - m.expected_eta[n]).norm() / t);
    }
    return worst;
}

}  // namespace

TEST(Kinds, RoundTripThroughNames) {
    for (auto k : kAllKinds) EXPECT_EQ(parse_kind(to_string(k)), k);
    EXPECT_FALSE(parse_kind("qoun").has_value());
}

TEST(Polynomial, HornerAndSquare) {
    const Polynomial p{{1.0, -2.0, 0.5}};
    EXPECT_DOUBLE_EQ(p(3.0), 1.0 - 6.0 + 4.5);
    const Polynomial sq = p.squared();
    for (double x : {-1.5, 0.0, 0.7, 4.0}) EXPECT_NEAR(sq(x), p(x) * p(x), 1e-12 * (1 + sq(x)));
}

// B^n e_0 by repeated multiplication with the dense operator, against the
// ladder rescaled by sqrt(eps_n!).
TEST(FDeformed, LadderMatchesDirectPowers) {
    for (const Polynomial& f : {Polynomial{{0.0, 1.0}}, Polynomial{{0.0, 0.5, 0.25}}}) {
        const ZooModel m = make_f_deformed(f, 24, 14);
        const Matrix& b = m.family.b().matrix();
        Vector v = Vector::Zero(24);
        v(0) = 1.0;
        for (std::size_t n = 0; n <= 14; ++n) {
            double ffact = 1.0;
            for (std::size_t k = 1; k <= n; ++k) ffact *= f(static_cast<double>(k));
            const double nfact = std::tgamma(static_cast<double>(n) + 1.0);
            EXPECT_NEAR(v(static_cast<Index>(n)).real(), ffact * std::sqrt(nfact),
                        1e-11 * ffact * std::sqrt(nfact));
            EXPECT_NEAR(v.norm(), ffact * std::sqrt(nfact), 1e-11 * v.norm());
            const Vector phi = v / std::sqrt(m.family.eps().factorial(n));
            EXPECT_LT((phi - m.family.phi()[n].coeffs()).norm(), 1e-10 * phi.norm()) << n;
            v = b * v;
        }
        EXPECT_LT(closed_form_gap(m), 1e-9);
    }
}

TEST(FDeformed, CommutatorActsAsTwoNPlusOne) {
    const ZooModel m = make_f_deformed(Polynomial{{0.0, 1.0}}, 30, 20);
    const FockOperator comm = commutator(m.family.a(), m.family.b());
    for (std::size_t n = 0; n <= m.family.interior_top(); ++n) {
        const Vector lhs = (comm * m.family.phi()[n]).coeffs();
        const Vector rhs = static_cast<double>(2 * n + 1) * m.family.phi()[n].coeffs();
        EXPECT_LT((lhs - rhs).norm(), 1e-9 * rhs.norm()) << n;
    }
}

TEST(FDeformed, Rejections) {
    EXPECT_EQ(code_of([] { make_f_deformed(Polynomial{{1.0, 1.0}}, 10, 5); }), ErrorCode::InvalidF);
    EXPECT_EQ(code_of([] { make_f_deformed(Polynomial{{0.0, -1.0}}, 10, 5); }), ErrorCode::InvalidF);
    // n f(n) = n (3 - n) turns over at n = 1.5; f stays positive on 1 .. 2.
    EXPECT_EQ(code_of([] { make_f_deformed(Polynomial{{0.0, 3.0, -1.0}}, 6, 2, 0); }),
              ErrorCode::NonMonotone);
}

TEST(HDeformed, MatchesFDeformedWithSquare) {
    const Polynomial h{{1.0, 0.5}};
    const ZooModel hm = make_h_deformed(h, 24, 16);
    ASSERT_EQ(hm.warnings.size(), 1u);
    for (std::size_t n = 0; n < 24; ++n) {
        const double hn = h(static_cast<double>(n));
        EXPECT_NEAR(hm.family.eps()[n], n * hn * hn, 1e-12 * (1.0 + n * hn * hn));
    }
    const ZooModel quiet = make_h_deformed(Polynomial{{0.0, 1.0}}, 12, 6);
    EXPECT_TRUE(quiet.warnings.empty());
}

TEST(TwoByTwo, Spectrum) {
    EXPECT_DOUBLE_EQ(two_by_two_epsilon(2.0, -1.0), 4.5);
    const ZooModel m = make_two_by_two(2.0, -1.0);
    EXPECT_DOUBLE_EQ(m.family.eps()[1], 4.5);
    EXPECT_LT(closed_form_gap(m), 1e-12);
}

TEST(TwoByTwo, NotCanonical) {
    const ZooModel m = make_two_by_two(2.0, -1.0);
    const Matrix comm = commutator(m.family.a(), m.family.b()).matrix();
    EXPECT_GT(max_norm(comm), 0.1);
    EXPECT_GT(max_norm(comm - Matrix::Identity(2, 2)), 0.1);
}

TEST(TwoByTwo, Rejections) {
    EXPECT_EQ(code_of([] { make_two_by_two(1.0, 1.0); }), ErrorCode::InvalidParams);
    EXPECT_EQ(code_of([] { make_two_by_two(0.0, -1.0); }), ErrorCode::InvalidParams);
    EXPECT_EQ(code_of([] { make_two_by_two(2.0, 3.0); }), ErrorCode::NegativeEpsilon);
}

TEST(Quon, MutatorAndGram) {
    const ZooModel m = make_quon(0.5, 40, 30, true);
    EXPECT_LT(q_mutator_residual(*m.base_ladder, 0.5), 1e-10);
    const Matrix g = gram_matrix(m.family, 31);
    EXPECT_LT(max_norm(g - Matrix::Identity(31, 31)), 1e-12);
    EXPECT_LT(closed_form_gap(m), 1e-9);
}

TEST(Quon, MutatorDetectsWrongQ) {
    const FockOperator c = lowering(EpsilonSequence::quon(0.5, 20), 20);
    EXPECT_GT(q_mutator_residual(c, 0.6), 1e-2);
}

TEST(Quon, Rejections) {
    for (double q : {0.0, -0.5, 1.0, 1.5, std::nan("")}) {
        EXPECT_EQ(code_of([q] { make_quon(q, 10, 5, false); }), ErrorCode::InvalidQ) << q;
    }
}

TEST(SimilarityDiagonal, WeightsAndRejections) {
    const auto w = oscillating_weights(0.5, 1.5, 50);
    for (double s : w) {
        EXPECT_GE(s, 0.5);
        EXPECT_LE(s, 1.5);
    }
    const EpsilonSequence eps = EpsilonSequence::quon(0.5, 40);
    const ZooModel m = make_similarity_diagonal(oscillating_weights(0.5, 1.5, 40), eps, 40, 30);
    EXPECT_LT(closed_form_gap(m), 1e-9);
    std::vector<double> bad(40, 1.0);
    bad[7] = 0.0;
    EXPECT_EQ(code_of([&] { make_similarity_diagonal(bad, eps, 40, 30); }), ErrorCode::InvalidS);
    bad.resize(10, 1.0);
    EXPECT_EQ(code_of([&] { make_similarity_diagonal(bad, eps, 40, 30); }), ErrorCode::InvalidS);
}

TEST(BoundedSimilarity, ConjugatesTheLadder) {
    const ZooModel base = make_quon(0.5, 16, 10, false);
    std::mt19937 rng(5);
    std::normal_distribution<double> g(0.0, 0.2);
    Matrix s(16, 16);
    for (Index i = 0; i < 16; ++i) {
        for (Index j = 0; j < 16; ++j) s(i, j) = Complex(g(rng), g(rng));
    }
    s = (s + s.adjoint()).eval() / 2.0;
    const ZooModel m = make_bounded_similarity(base.family, FockOperator(s));
    const VerificationReport r = verify_family(m.family);
    EXPECT_TRUE(r.all_pass()) << r.max_residual();
    Matrix skew = s;
    skew(0, 1) += Complex(0.0, 1.0);
    EXPECT_EQ(code_of([&] { make_bounded_similarity(base.family, FockOperator(skew)); }),
              ErrorCode::NotHermitianS);
}

TEST(ModelSpec, EpsilonWithoutBuilding) {
    ModelSpec spec;
    spec.kind = ModelKind::FDeformed;
    spec.poly = {0.0, 1.0};
    spec.dim = 12;
    spec.depth = 8;
    const EpsilonSequence eps = model_epsilon(spec);
    ASSERT_EQ(eps.size(), 12u);
    EXPECT_DOUBLE_EQ(eps[5], 25.0);

    spec.kind = ModelKind::SimilarityDiagonal;
    spec.eps_kind = ModelSpec::EpsKind::Linear;
    EXPECT_DOUBLE_EQ(model_epsilon(spec)[5], 5.0);
    EXPECT_TRUE(verify_family(instantiate(spec).family).all_pass());
}

TEST(Catalog, OneRowPerKind) {
    const auto rows = model_catalog();
    ASSERT_EQ(rows.size(), std::size(kAllKinds));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_EQ(rows[i].kind, kAllKinds[i]);
        EXPECT_FALSE(rows[i].description.empty());
    }
}
