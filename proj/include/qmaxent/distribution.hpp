#pragma once

#include "qmaxent/errors.hpp"

#include <cstddef>
#include <vector>

namespace qmaxent {

// Finite probability vector. Construction validates non-negativity and total
// mass: inputs whose mass is within 1e-9 of 1 are renormalized (tolerating
// round-off in user data), anything further off is rejected.
class ProbabilityDistribution {
public:
    explicit ProbabilityDistribution(std::vector<double> probs);

    static ProbabilityDistribution uniform(std::size_t n);

    std::size_t size() const { return probs_.size(); }
    const std::vector<double>& probs() const { return probs_; }
    double operator[](std::size_t i) const { return probs_[i]; }
    const double* data() const { return probs_.data(); }

private:
    std::vector<double> probs_;
};

// Joint distribution over paired states, n_a rows by n_b columns. Row sums
// give the marginal of A, column sums the marginal of B.
class JointDistribution {
public:
    explicit JointDistribution(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return n_a_; }
    std::size_t cols() const { return n_b_; }
    double at(std::size_t i, std::size_t j) const { return flat_[i * n_b_ + j]; }
    const std::vector<double>& flat() const { return flat_; } // row-major

    ProbabilityDistribution marginal_a() const;
    ProbabilityDistribution marginal_b() const;

private:
    std::size_t n_a_, n_b_;
    std::vector<double> flat_;
};

// Entropic index q > 0. q = 1 is handled by dedicated limit branches
// (|q - 1| < 1e-8) in every consumer.
class EntropicOrder {
public:
    explicit EntropicOrder(double q) : q_(q) {
        if (!(q > 0.0))
            throw InvalidArgument("entropic order q must be > 0");
    }
    double value() const { return q_; }
    bool is_shannon_limit() const { return q_ > 1.0 - 1e-8 && q_ < 1.0 + 1e-8; }

private:
    double q_;
};

// Choice of the outer monotone map f applied to the power-sum root
// (sum_i p_i^q)^(1/(1-q)): identity, ln (Renyi), or ln_q (Tsallis).
enum class EntropyVariant { power_sum_root, logarithmic, q_logarithmic };

} // namespace qmaxent
