#pragma once

#include "qmaxent/distribution.hpp"

#include <string>
#include <vector>

// Classical maximum-entropy inference over a finite state space: given m
// observables f_i with target means F_i, solve the dual problem for the
// Lagrange multipliers of the Gibbs form p_x ~ exp(-sum_i lambda_i f_i(x)).

namespace qmaxent {

struct ConstraintSet {
    std::vector<std::string> states;             // |Omega| labels
    std::vector<std::vector<double>> observables; // m rows of length |Omega|
    std::vector<double> targets;                  // m

    std::size_t num_states() const { return states.size(); }
    std::size_t num_constraints() const { return observables.size(); }

    // Shape checks plus the strict-interior feasibility test: each target
    // must lie inside (min_x f_i, max_x f_i) with slack 1e-12, except that a
    // constant observable is accepted when its target matches the constant.
    // Throws InvalidArgument / InfeasibleTargets.
    void validate() const;
};

struct GibbsDistribution {
    std::vector<double> lambdas;
    double log_z;
    ProbabilityDistribution probs;
    std::vector<double> residuals; // <f_i> - F_i at the solution
    int iterations;
};

// ln sum_x exp(-sum_i lambda_i f_i(x)), max-subtracted.
double log_partition(const ConstraintSet& cs, const std::vector<double>& lambdas);

// Model means <f_i> under the Gibbs distribution at lambda; equals
// -d ln Z / d lambda_i.
std::vector<double> model_means(const ConstraintSet& cs, const std::vector<double>& lambdas);

// Damped Newton on the convex dual ln Z(lambda) + lambda . F, Hessian = the
// observable covariance matrix; falls back to gradient descent with
// backtracking when the Hessian is singular (redundant constraints).
// Deterministic; starts from lambda = 0. Throws InfeasibleTargets or
// NonConvergence (with the final residual).
GibbsDistribution solve_dual(const ConstraintSet& cs, double tol = 1e-10,
                             int max_iter = 200);

} // namespace qmaxent
