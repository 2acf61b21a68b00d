#include "qmaxent/chain.hpp"

#include "qmaxent/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace qmaxent {
namespace {

constexpr std::int64_t kEnumerationBound = 10'000'000;

int count_flips(const std::vector<std::uint8_t>& bits) {
    int d = 0;
    for (std::size_t i = 0; i + 1 < bits.size(); ++i)
        if (bits[i] != bits[i + 1]) ++d;
    return d;
}

// Number of one-runs for a chain with d+1 runs starting at bit s1.
int one_run_count(int d, int s1) {
    const int runs = d + 1;
    return s1 == 1 ? (runs + 1) / 2 : runs / 2;
}

// Compositions of `total` into `parts` positive parts: C(total-1, parts-1),
// with the empty composition convention for parts = 0.
BigInt compositions(int total, int parts) {
    if (parts == 0) return total == 0 ? 1 : 0;
    if (total < parts) return 0;
    return binomial(total - 1, parts - 1);
}

// Exact count of configurations with magnetization m that start at bit s1.
BigInt stratum_count(const ChainSpec& spec, int m, int s1) {
    const int k1 = one_run_count(spec.d, s1);
    const int k0 = spec.d + 1 - k1;
    return compositions(m, k1) * compositions(spec.n - m, k0);
}

// Uniform composition of `total` into `parts` positive parts: a uniform
// (parts-1)-subset of the total-1 internal cut points.
std::vector<int> sample_composition(int total, int parts, Rng& rng) {
    std::vector<int> cuts;
    cuts.reserve(parts + 1);
    // Floyd's algorithm for a uniform k-subset of {1..total-1}
    const int k = parts - 1;
    for (int j = total - k; j < total; ++j) {
        const int t = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(j)));
        if (std::find(cuts.begin(), cuts.end(), t) != cuts.end())
            cuts.push_back(j);
        else
            cuts.push_back(t);
    }
    cuts.push_back(0);
    cuts.push_back(total);
    std::sort(cuts.begin(), cuts.end());
    std::vector<int> lengths(parts);
    for (int i = 0; i < parts; ++i) lengths[i] = cuts[i + 1] - cuts[i];
    return lengths;
}

} // namespace

BigInt binomial(int n, int k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

ChainState::ChainState(const ChainSpec& spec, std::vector<std::uint8_t> bits)
    : bits_(std::move(bits)) {
    if (static_cast<int>(bits_.size()) != spec.n)
        throw InvalidArgument("chain state length does not match the chain spec");
    for (auto b : bits_)
        if (b > 1) throw InvalidArgument("chain state bits must be 0 or 1");
    if (count_flips(bits_) != spec.d)
        throw InvalidArgument("chain state has the wrong flip count");
}

std::string ChainState::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) s[i] = '1';
    return s;
}

int magnetization(const ChainState& state) {
    return static_cast<int>(
        std::count(state.bits().begin(), state.bits().end(), std::uint8_t{1}));
}

std::map<int, std::int64_t> enumerate_exact(const ChainSpec& spec) {
    const BigInt subsets = binomial(spec.n - 1, spec.d);
    if (subsets > kEnumerationBound)
        throw TooLarge("enumerate_exact: C(n-1,d) = " + subsets.str() +
                       " exceeds the 1e7 enumeration bound");

    std::vector<std::int64_t> counts(spec.n + 1, 0);
    if (spec.d == 0) {
        counts[spec.n] += 1; // all ones
        counts[0] += 1;      // all zeros
    } else {
        // Iterate flip-position subsets {t_1 < ... < t_d} of {1..n-1}; run
        // lengths are the gaps, and M for the start-bit-1 chain is the sum of
        // even-indexed runs. The start-bit-0 mirror lands at n - M.
        std::vector<int> c(spec.d);
        std::iota(c.begin(), c.end(), 1);
        for (;;) {
            int m1 = 0, prev = 0;
            for (int i = 0; i <= spec.d; ++i) {
                const int next = i < spec.d ? c[i] : spec.n;
                if (i % 2 == 0) m1 += next - prev;
                prev = next;
            }
            counts[m1] += 1;
            counts[spec.n - m1] += 1;

            int i = spec.d - 1;
            while (i >= 0 && c[i] == spec.n - 1 - (spec.d - 1 - i)) --i;
            if (i < 0) break;
            ++c[i];
            for (int j = i + 1; j < spec.d; ++j) c[j] = c[j - 1] + 1;
        }
    }
    std::map<int, std::int64_t> out;
    for (int m = 0; m <= spec.n; ++m)
        if (counts[m] > 0) out[m] = counts[m];
    return out;
}

double omega_asymptotic(const ChainSpec& spec, int m) {
    if (spec.d == 0)
        throw UnsupportedD("omega_asymptotic undefined for d = 0 (kappa(0) "
                           "does not exist); the exact count is 2 at M in {0, N}");
    const double n = spec.n, d = spec.d;
    double kappa = std::pow(d, d - 2.0);
    for (int i = 2; i <= spec.d / 2; ++i) kappa *= i;
    for (int i = 2; i <= (spec.d - 1) / 2; ++i) kappa *= i;
    const double base = 1.0 - 4.0 * (m - n / 2.0) * (m - n / 2.0) / (n * n);
    if (base < 0.0) return 0.0;
    return std::pow(n, d - 1.0) / kappa *
           std::pow(base, static_cast<double>((spec.d - 1) / 2));
}

bool asymptotic_regime(const ChainSpec& spec) { return spec.n >= 10 * spec.d; }

PhaseSpaceSize total_phase_space(const ChainSpec& spec) {
    double log_fact = 0.0;
    for (int i = 2; i <= spec.d; ++i) log_fact += std::log(static_cast<double>(i));
    const double asym =
        std::exp(std::log(2.0) + spec.d * std::log(static_cast<double>(spec.n)) - log_fact);
    return {2 * binomial(spec.n - 1, spec.d), asym};
}

std::vector<ChainState> sample_states(const ChainSpec& spec, int m, int count,
                                      std::uint64_t seed) {
    if (m < 0 || m > spec.n)
        throw InvalidArgument("magnetization must be in [0, n]");
    const BigInt c1 = stratum_count(spec, m, 1);
    const BigInt c0 = stratum_count(spec, m, 0);
    if (c1 + c0 == 0)
        throw EmptyStratum("no configuration of (n=" + std::to_string(spec.n) +
                           ", d=" + std::to_string(spec.d) + ") has M = " +
                           std::to_string(m));
    const double p1 =
        c1.convert_to<double>() / (c1.convert_to<double>() + c0.convert_to<double>());

    Rng rng(seed);
    std::vector<ChainState> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int k = 0; k < count; ++k) {
        const int s1 = rng.next_double() < p1 ? 1 : 0;
        const int k1 = one_run_count(spec.d, s1);
        const int k0 = spec.d + 1 - k1;
        const auto ones = sample_composition(m, k1, rng);
        const auto zeros = sample_composition(spec.n - m, k0, rng);

        std::vector<std::uint8_t> bits;
        bits.reserve(spec.n);
        std::size_t i1 = 0, i0 = 0;
        int value = s1;
        for (int run = 0; run <= spec.d; ++run) {
            const int len = value == 1 ? ones[i1++] : zeros[i0++];
            bits.insert(bits.end(), len, static_cast<std::uint8_t>(value));
            value ^= 1;
        }
        out.emplace_back(spec, std::move(bits));
    }
    return out;
}

} // namespace qmaxent
