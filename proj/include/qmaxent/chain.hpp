#pragma once

#include "qmaxent/errors.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

// The correlated bit chain: N bits with exactly d adjacent unequal pairs
// ("flips"). A configuration is encoded as (starting bit, set of flip
// positions in {1..n-1}), so enumeration costs 2*C(n-1, d) instead of 2^n and
// the d-flips invariant holds by construction.

namespace qmaxent {

using BigInt = boost::multiprecision::cpp_int;

struct ChainSpec {
    int n; // chain length, >= 2
    int d; // flip count, 0 <= d <= n-1

    ChainSpec(int n_, int d_) : n(n_), d(d_) {
        if (n < 2) throw InvalidArgument("chain length n must be >= 2");
        if (d < 0 || d > n - 1)
            throw InvalidArgument("flip count d must be in [0, n-1]");
    }
};

class ChainState {
public:
    ChainState(const ChainSpec& spec, std::vector<std::uint8_t> bits);

    const std::vector<std::uint8_t>& bits() const { return bits_; }
    std::string to_string() const; // "0011..." form

private:
    std::vector<std::uint8_t> bits_;
};

// M = number of ones.
int magnetization(const ChainState& state);

// Exact count of configurations per magnetization, by iterating the
// 2*C(n-1,d) encodings. Throws TooLarge when C(n-1,d) > 1e7. Only attained
// magnetizations appear as keys; values total 2*C(n-1,d).
std::map<int, std::int64_t> enumerate_exact(const ChainSpec& spec);

// Closed-form asymptotic count (N^(d-1)/kappa(d)) (1 - 4(M-N/2)^2/N^2)^floor((d-1)/2)
// with kappa(d) = d^(d-2) floor(d/2)! floor((d-1)/2)!. Valid for n >> d; its
// absolute normalization differs from exact counts at finite n (validated by
// shape, not prefactor). Throws UnsupportedD for d = 0.
double omega_asymptotic(const ChainSpec& spec, int m);

// True when n >= 10*d, the regime the asymptotic form is trusted in.
bool asymptotic_regime(const ChainSpec& spec);

struct PhaseSpaceSize {
    BigInt exact;      // 2*C(n-1, d)
    double asymptotic; // (2/d!) n^d
};

PhaseSpaceSize total_phase_space(const ChainSpec& spec);

// Uniform sample over configurations with magnetization m, via uniform
// compositions of the one-runs and zero-runs. Deterministic per seed.
// Throws EmptyStratum when no configuration attains m.
std::vector<ChainState> sample_states(const ChainSpec& spec, int m, int count,
                                      std::uint64_t seed);

// Exact binomial coefficient.
BigInt binomial(int n, int k);

} // namespace qmaxent
