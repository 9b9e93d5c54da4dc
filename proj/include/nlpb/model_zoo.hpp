// SPDX-License-Identifier: Apache-2.0
//
// Ready-made families with closed-form expectations:
//
//   f_deformed           A = a, B = f(N) a^H, eps_n = n f(n)
//   h_deformed           f = h^2
//   two_by_two           exact 2x2 pair parameterized by (beta, delta)
//   similarity_diagonal  weighted shift conjugated by diag(s_n)
//   quon                 q-mutator ladder, optionally conjugated by exp(c^H c)
//
// plus the bounded similarity A -> e^S A e^-S applied to any family.
#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "nlpb/engine.hpp"

namespace nlpb::zoo {

enum class ModelKind { FDeformed, HDeformed, SimilarityDiagonal, TwoByTwo, Quon };

inline constexpr ModelKind kAllKinds[] = {ModelKind::FDeformed, ModelKind::HDeformed,
                                         ModelKind::SimilarityDiagonal, ModelKind::TwoByTwo,
                                         ModelKind::Quon};

std::string_view to_string(ModelKind kind) noexcept;
std::optional<ModelKind> parse_kind(std::string_view name) noexcept;

/// Real polynomial, coefficients in increasing degree.
struct Polynomial {
    std::vector<double> coeffs;

    double operator()(double x) const;
    Polynomial squared() const;
};

struct ZooModel {
    NlpbFamily family;
    std::vector<Vector> expected_phi;  // closed forms for n = 0 .. depth
    std::vector<Vector> expected_eta;
    std::optional<FockOperator> base_ladder;  // orthonormal-ladder operator, when one exists
    std::optional<FockOperator> similarity;   // T with a = T c T^-1, when built that way
    std::vector<std::string> warnings;
};

/// Throws InvalidF (f(0) != 0, or f(n) <= 0 for 1 <= n <= depth) and
/// NonMonotone (n f(n) not strictly increasing on 0 .. dim-1).
ZooModel make_f_deformed(const Polynomial& f, Index dim, std::size_t depth,
                         std::size_t margin = kDefaultMargin, const Tolerances& tol = {});

/// f = h^2. h(0) != 0 is accepted with a warning.
ZooModel make_h_deformed(const Polynomial& h, Index dim, std::size_t depth,
                         std::size_t margin = kDefaultMargin, const Tolerances& tol = {});

/// eps_1 = -(beta - delta)^2 / (beta delta).
double two_by_two_epsilon(double beta, double delta);

/// Throws InvalidParams (beta or delta zero/non-finite, beta == delta) and
/// NegativeEpsilon (beta delta > 0). Depth 1, margin 0: the space is complete.
ZooModel make_two_by_two(double beta, double delta);

/// Throws InvalidS when some s_n is non-positive or non-finite, or s has fewer
/// than dim entries.
ZooModel make_similarity_diagonal(std::span<const double> s, const EpsilonSequence& eps,
                                  Index dim, std::size_t depth,
                                  std::size_t margin = kDefaultMargin,
                                  const Tolerances& tol = {});

/// s_n = (alpha + beta)/2 + (beta - alpha)/2 sin(n), a sequence filling [alpha, beta].
std::vector<double> oscillating_weights(double alpha, double beta, Index dim);

/// Throws InvalidQ for q outside (0, 1): q in (-1, 0] gives a spectrum that is
/// not strictly increasing.
ZooModel make_quon(double q, Index dim, std::size_t depth, bool use_n0_similarity,
                   std::size_t margin = kDefaultMargin, const Tolerances& tol = {});

/// max |(c c^H - q c^H c - 1)_{ij}| over i, j <= dim - 2.
double q_mutator_residual(const FockOperator& c, double q);

/// Conjugates `base` by e^S. Throws NotHermitianS and SingularT.
ZooModel make_bounded_similarity(const NlpbFamily& base, const FockOperator& s,
                                 const Tolerances& tol = {});

/// Flat description of a model, the unit the config file serializes.
struct ModelSpec {
    ModelKind kind = ModelKind::Quon;
    Index dim = 40;
    std::size_t depth = 30;
    std::size_t margin = kDefaultMargin;

    std::vector<double> poly{0.0, 1.0};  // f or h
    double beta = 2.0;                   // two_by_two
    double delta = -1.0;
    double q = 0.5;                      // quon
    bool use_n0_similarity = true;
    std::vector<double> s;               // similarity_diagonal, explicit weights
    double s_alpha = 0.5;                // ... or a window for oscillating_weights
    double s_beta = 1.5;

    enum class EpsKind { Linear, Quon, Explicit };
    EpsKind eps_kind = EpsKind::Quon;    // similarity_diagonal spectrum
    double eps_q = 0.5;
    std::vector<double> eps_values;
};

/// Spectrum of the described model (needed by the coherent-state and moment
/// suites before or without building the family).
EpsilonSequence model_epsilon(const ModelSpec& spec);

ZooModel instantiate(const ModelSpec& spec, const Tolerances& tol = {});

struct ModelInfo {
    ModelKind kind;
    std::string parameters;
    std::string ranges;
    std::string description;
};

std::vector<ModelInfo> model_catalog();

}  // namespace nlpb::zoo
