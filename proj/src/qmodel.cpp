#include "qmaxent/qmodel.hpp"

#include "qmaxent/kernels.hpp"
#include "qmaxent/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qmaxent {
namespace {

constexpr double kQLimitBand = 1e-8;
constexpr std::int64_t kExactBound = 10'000'000;
const double kNegInf = -std::numeric_limits<double>::infinity();

} // namespace

DegeneracyTable degeneracy_table(const ChainSpec& spec) {
    DegeneracyTable t{spec, DegeneracySource::exact,
                      std::vector<double>(spec.n + 1, 0.0),
                      std::vector<double>(spec.n + 1, kNegInf)};
    if (binomial(spec.n - 1, spec.d) <= kExactBound) {
        for (const auto& [m, c] : enumerate_exact(spec))
            t.omega[m] = static_cast<double>(c);
    } else {
        t.source = DegeneracySource::asymptotic;
        for (int m = 0; m <= spec.n; ++m)
            t.omega[m] = omega_asymptotic(spec, m);
    }
    kernels::active().log_fill(t.ln_omega.data(), t.omega.data(), t.omega.size());
    return t;
}

double log_q_weight(double q, double psi, double m) {
    if (std::abs(q - 1.0) < kQLimitBand) return -psi * m;
    const double base = 1.0 - (1.0 - q) * psi * m;
    if (base <= 0.0) {
        if (q < 1.0) return kNegInf; // support truncation, weight 0
        throw DegenerateSupport("q-weight base vanished with a negative exponent");
    }
    return std::log1p(-(1.0 - q) * psi * m) / (1.0 - q);
}

double q_deformed_weight(double q, double psi, double m) {
    return std::exp(log_q_weight(q, psi, m));
}

QExponentialModel::QExponentialModel(const ChainSpec& spec, double q, double psi)
    : QExponentialModel(degeneracy_table(spec), q, psi) {}

QExponentialModel::QExponentialModel(DegeneracyTable table, double q, double psi)
    : table_(std::move(table)), q_(q), psi_(psi) {
    if (!(q_ > 0.0)) throw InvalidArgument("q must be > 0");
    if (!(psi_ > 0.0)) throw InvalidArgument("psi must be > 0");
    init();
}

void QExponentialModel::init() {
    const int n = table_.spec.n;
    ln_weight_.resize(n + 1);
    for (int m = 0; m <= n; ++m) ln_weight_[m] = log_q_weight(q_, psi_, m);

    std::vector<double> terms(n + 1);
    for (int m = 0; m <= n; ++m) terms[m] = table_.ln_omega[m] + ln_weight_[m];
    log_z_ = kernels::active().log_sum_exp(terms.data(), terms.size());
    if (std::isinf(log_z_) && log_z_ < 0)
        throw DegenerateSupport(
            "every attainable magnetization has zero weight (q < 1 with psi too large)");
}

double QExponentialModel::partition_function() const { return std::exp(log_z_); }

ProbabilityDistribution QExponentialModel::pmf_over_m() const {
    const int n = table_.spec.n;
    std::vector<double> lp(n + 1), p(n + 1);
    for (int m = 0; m <= n; ++m) lp[m] = table_.ln_omega[m] + ln_weight_[m] - log_z_;
    kernels::active().exp_fill(p.data(), lp.data(), p.size());
    return ProbabilityDistribution(std::move(p));
}

double QExponentialModel::mean_m() const {
    const auto pmf = pmf_over_m();
    double mean = 0.0;
    for (int m = 0; m <= table_.spec.n; ++m) mean += m * pmf[m];
    return mean;
}

std::vector<int> QExponentialModel::sample_m(int count, std::uint64_t seed) const {
    const auto pmf = pmf_over_m();
    std::vector<int> support;
    std::vector<double> cdf;
    double acc = 0.0;
    for (int m = 0; m <= table_.spec.n; ++m) {
        if (pmf[m] > 0.0) {
            acc += pmf[m];
            support.push_back(m);
            cdf.push_back(acc);
        }
    }
    cdf.back() = 1.0; // closes the round-off gap; u < 1 always lands

    Rng rng(seed);
    std::vector<int> out;
    out.reserve(static_cast<std::size_t>(std::max(count, 0)));
    for (int k = 0; k < count; ++k) {
        const double u = rng.next_double();
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        out.push_back(support[static_cast<std::size_t>(it - cdf.begin())]);
    }
    return out;
}

} // namespace qmaxent
