#pragma once

#include "qmaxent/distribution.hpp"

#include <utility>
#include <vector>

// Entropy functionals of the one-parameter family
//   H_q^(f) = f((sum_i p_i^q)^(1/(1-q))),
// divergences, diversity indices and joint-distribution information measures.
// Everything is in nats (display conversion to bits is a CLI concern).
//
// Note on the q-direction of Renyi entropy: for fixed p it is non-increasing
// in q (some texts state the opposite); the property suite asserts
// non-increasing.

namespace qmaxent {

// -sum p_i ln p_i, with 0 ln 0 = 0. Result in [0, ln n].
double shannon_entropy(const ProbabilityDistribution& p);

// sum p_i ln(p_i / r_i). Throws DivergenceInfinite when some p_i > 0 has
// r_i = 0, InvalidArgument on length mismatch.
double kl_divergence(const ProbabilityDistribution& p, const ProbabilityDistribution& r);

// (1/(1-q)) ln sum p_i^q; Shannon at the q = 1 limit branch.
double renyi_entropy(const ProbabilityDistribution& p, EntropicOrder q);

// (1/(q-1)) (1 - sum p_i^q); Shannon at the q = 1 limit branch.
double tsallis_entropy(const ProbabilityDistribution& p, EntropicOrder q);

// The family value under the selected f: power-sum root (identity), ln
// (= renyi_entropy) or ln_q (= tsallis_entropy).
double generalized_entropy(const ProbabilityDistribution& p, EntropicOrder q, EntropyVariant variant);

// exp(renyi_entropy): the effective number of equally common states.
double hill_number(const ProbabilityDistribution& p, EntropicOrder q);

struct ProfilePoint {
    double q;
    double hill;
};

// Pointwise hill numbers over a grid of orders; non-increasing in q.
std::vector<ProfilePoint> diversity_profile(const ProbabilityDistribution& p,
                                            const std::vector<EntropicOrder>& q_grid);

// Shannon entropies of the row-sum and column-sum marginals.
std::pair<double, double> marginal_entropies(const JointDistribution& j);

// -sum P(i,j) ln P(i,j) over all cells.
double joint_entropy(const JointDistribution& j);

// sum P(i,j) ln(P(i,j) / (P(i)P(j))); >= 0, zero iff the joint factorizes.
// Satisfies I = H(A) + H(B) - H(A,B).
double mutual_information(const JointDistribution& j);

// exp(h_a + h_b - i_ab): effective state count corrected for shared
// information. Throws InvalidMutualInformation when i_ab is outside
// [0, min(h_a, h_b)].
double effective_species_corrected(double h_a, double h_b, double i_ab);

} // namespace qmaxent
