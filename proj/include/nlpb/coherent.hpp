// SPDX-License-Identifier: Apache-2.0
//
// Non-linear coherent states
//
//     Xi(z) = N(|z|^2)^{-1/2} sum_n z^n / sqrt(eps_n!) e_n,   N(x) = sum_n x^n / eps_n!
//
// and the radial moment problem behind their resolution of the identity.
#pragma once

#include <vector>

#include "nlpb/engine.hpp"

namespace nlpb {

struct CoherentState {
    Complex z;
    StateVector coeffs;           // on e_0 .. e_{D-1}
    double norm_n = 1.0;          // partial sum of N(|z|^2)
    double tail = 0.0;            // bound on the omitted mass relative to N
    double radius_estimate = 0.0; // (eps_{D-1}!)^{1/(2(D-1))}
};

/// Throws OutsideRadius when the tail bound exceeds tol.tail, DimMismatch when
/// eps is shorter than dim.
CoherentState build_xi(const EpsilonSequence& eps, Complex z, Index dim,
                       const Tolerances& tol = {});

/// ||(A Xi - z Xi)_{0..D-2}|| / ||Xi|| on the Fock basis.
double check_eigenproperty(const CoherentState& state, const FockOperator& a);

/// Same with Xi expanded on the family ladder, sum_{n <= top} c_n phi_n,
/// the last rung excluded.
double check_eigenproperty(const CoherentState& state, const NlpbFamily& fam);

struct RadialMeasure {
    std::vector<double> nodes;   // strictly increasing, in [0, support_cap]
    std::vector<double> weights; // nonnegative
    double support_cap = 0.0;
};

/// |sum_j w_j r_j^{2k} - eps_k!/(2 pi)| / (eps_k!/(2 pi)) for k = 0 .. K.
std::vector<double> check_moment_measure(const EpsilonSequence& eps, const RadialMeasure& measure,
                                         std::size_t k_max);

struct MomentSolution {
    RadialMeasure measure;
    double feasibility = 0.0;  // max of check_moment_measure over k <= K
};

/// 3 max_{k <= K} sqrt(eps_k).
double default_support_cap(const EpsilonSequence& eps, std::size_t k_max);

/// NNLS over node 0 plus M - 1 geometric nodes in [R 1e-3, R]. Throws BadGrid
/// when M < K + 1, R is not positive or K exceeds the sequence.
MomentSolution solve_moment_problem(const EpsilonSequence& eps, std::size_t k_max,
                                    double support_cap, std::size_t nodes);

/// n-point Gauss-Laguerre rule mapped to dlambda(r) = e^{-r^2} r dr / pi,
/// whose moments are k!/(2 pi).
RadialMeasure gauss_laguerre_measure(std::size_t n);

/// Product rule over n_theta uniform angles times the radial measure;
/// returns ||result - I||_max on the leading block.
double check_identity_resolution(const EpsilonSequence& eps, const RadialMeasure& measure,
                                 std::size_t block, std::size_t n_theta);

struct HeisenbergProduct {
    double lhs = 0.0;  // dQ dP
    double rhs = 0.0;  // |<A A^H> - |z|^2| / 2
};

HeisenbergProduct heisenberg_product(const CoherentState& state, const FockOperator& a);

}  // namespace nlpb
