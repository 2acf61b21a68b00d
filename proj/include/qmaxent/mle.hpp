#pragma once

#include "qmaxent/qmodel.hpp"

#include <string>
#include <vector>

// Two-step maximum-likelihood estimation of (q, psi) from observed chain
// sums: for each trial q maximize the log-likelihood over psi (the q-mean
// matching rule is the stationarity condition), then pick the q with the
// best partially-maximized score on a grid and refine it.
//
// The likelihood is configuration-level, prod_k w(M_k)/Z; the M-marginal
// alternative differs only by a (q,psi)-independent degeneracy term, so both
// share their maximizer.

namespace qmaxent {

struct SampleSet {
    ChainSpec spec;
    std::vector<int> values; // observed M_k

    SampleSet(ChainSpec s, std::vector<int> v);
};

// One inner psi-solve at fixed q. The matching-rule residual compares
// sum_x C(x) p^q(x) against the sample-side mean of C p^(q-1); the relative
// form divides by the larger side (the raw sides scale like Z^(1-q), which
// spans many orders of magnitude across a q grid).
struct InnerSolve {
    double q = 0.0;
    double psi = 0.0;
    double log_likelihood = 0.0; // total, nats
    double matching_residual_abs = 0.0;
    double matching_residual_rel = 0.0;
    bool interior = false;
    std::string note; // failure reason when !interior
};

struct FitResult {
    double q_star = 0.0;
    double psi_star = 0.0;
    double log_likelihood = 0.0; // at the optimum, total nats
    std::vector<InnerSolve> inner_solves;
    bool converged = false;
    DegeneracySource degeneracy = DegeneracySource::exact;
};

struct LikelihoodSurface {
    std::vector<double> q_grid;
    std::vector<double> psi_grid;
    // deltas[iq * psi_grid.size() + ip] = ell_max - ell(q, psi); >= 0, +inf
    // where the sample falls outside the model support.
    std::vector<double> deltas;
    double ell_max = 0.0;
    double q_at_max = 0.0;
    double psi_at_max = 0.0;
};

// Total log-likelihood sum_k ln(w(M_k)/Z); -inf when any sample has zero
// weight (a value, not an error).
double log_likelihood(const SampleSet& samples, double q, double psi);

// Step 1: maximize over psi at fixed q by coarse log-grid scan plus golden
// section (bracket width 1e-8), then a guarded Newton polish on the analytic
// d ell/d psi so the matching rule holds tightly. Returns (psi*, ell(q,psi*)).
// Throws NoInteriorMaximum when the likelihood is monotone over the bracket.
std::pair<double, double> fit_psi_for_q(const SampleSet& samples, double q);

// Step 2: 60-point log-spaced q grid over [q_min, q_max], inner solve per
// point (failures recorded, not fatal), argmax with ties broken toward q
// closest to 1, then golden-section refinement to width 1e-4 around the best
// grid point. Deterministic. Throws AllPointsFailed when no grid point has
// an interior maximum.
FitResult fit(const SampleSet& samples, double q_min = 0.2, double q_max = 3.0);

LikelihoodSurface likelihood_surface(const SampleSet& samples,
                                     const std::vector<double>& q_grid,
                                     const std::vector<double>& psi_grid);

} // namespace qmaxent
