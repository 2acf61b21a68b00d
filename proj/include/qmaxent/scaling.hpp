#pragma once

#include "qmaxent/errors.hpp"

#include <string>
#include <vector>

// Phase-space growth classifier: decide whether a W(N) series grows
// exponentially (log-linear in N) or like a power law (log-linear in ln N)
// and recommend the matching entropy family.

namespace qmaxent {

struct ScalingPoint {
    long n;
    double w;
};

struct ScalingSeries {
    std::vector<ScalingPoint> points; // sorted by n, strictly increasing

    // Sorts by n; requires >= 4 distinct n (InsufficientPoints), w > 0 and
    // no duplicate n (InvalidArgument).
    explicit ScalingSeries(std::vector<ScalingPoint> pts);
};

struct LinearFit {
    double slope = 0.0;     // c0 for the exponential model, the exponent for power-law
    double intercept = 0.0; // of the log-space regression
    double rss = 0.0;       // residual sum of squares in log space
};

enum class GrowthModel { exponential, power_law, inconclusive };
enum class Recommendation { shannon, generalized_q, inspect };

struct ScalingVerdict {
    GrowthModel model = GrowthModel::inconclusive;
    LinearFit exponential_fit; // ln w vs n
    LinearFit powerlaw_fit;    // ln w vs ln n
    Recommendation recommendation = Recommendation::inspect;
    // Exponential residuals curving upward (one-sided sign test on their
    // second differences, p < 0.05) hint at super-exponential growth.
    bool superexponential_hint = false;
    double sign_test_p = 1.0;
};

// Least-squares fits of both hypotheses; the winner needs a residual at
// least 20% below the loser's, otherwise the verdict is inconclusive. When
// both models fit exactly (a flat series), power-law wins: zero growth is
// not exponential growth.
ScalingVerdict fit_scaling(const ScalingSeries& series);

// Human-readable report naming the winning model, its parameters, and the
// follow-up (classical solve vs learning q from data).
std::string recommend(const ScalingVerdict& verdict);

} // namespace qmaxent
