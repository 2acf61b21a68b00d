#include "qmaxent/entropy.hpp"

#include "qmaxent/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace qmaxent {

double shannon_entropy(const ProbabilityDistribution& p) {
    return kernels::active().neg_sum_xlogx(p.data(), p.size());
}

double kl_divergence(const ProbabilityDistribution& p, const ProbabilityDistribution& r) {
    if (p.size() != r.size())
        throw InvalidArgument("kl_divergence: distributions differ in length");
    bool diverged = false;
    const double d = kernels::active().sum_xlog_ratio(p.data(), r.data(), p.size(), &diverged);
    if (diverged)
        throw DivergenceInfinite("kl_divergence is infinite: p has mass where r vanishes");
    return std::max(d, 0.0); // Gibbs inequality; clamp round-off
}

double renyi_entropy(const ProbabilityDistribution& p, EntropicOrder q) {
    if (q.is_shannon_limit()) return shannon_entropy(p);
    const double s = kernels::active().sum_pow(p.data(), p.size(), q.value());
    return std::log(s) / (1.0 - q.value());
}

double tsallis_entropy(const ProbabilityDistribution& p, EntropicOrder q) {
    if (q.is_shannon_limit()) return shannon_entropy(p);
    const double s = kernels::active().sum_pow(p.data(), p.size(), q.value());
    return (1.0 - s) / (q.value() - 1.0);
}

double generalized_entropy(const ProbabilityDistribution& p, EntropicOrder q, EntropyVariant variant) {
    switch (variant) {
        case EntropyVariant::logarithmic:
            return renyi_entropy(p, q);
        case EntropyVariant::q_logarithmic:
            return tsallis_entropy(p, q);
        case EntropyVariant::power_sum_root:
        default:
            // (sum p^q)^(1/(1-q)) = exp(renyi), valid through the q = 1 limit
            return std::exp(renyi_entropy(p, q));
    }
}

double hill_number(const ProbabilityDistribution& p, EntropicOrder q) {
    return std::exp(renyi_entropy(p, q));
}

std::vector<ProfilePoint> diversity_profile(const ProbabilityDistribution& p,
                                            const std::vector<EntropicOrder>& q_grid) {
    if (q_grid.empty())
        throw InvalidArgument("diversity_profile: empty order grid");
    std::vector<ProfilePoint> out;
    out.reserve(q_grid.size());
    for (const auto& q : q_grid) out.push_back({q.value(), hill_number(p, q)});
    return out;
}

std::pair<double, double> marginal_entropies(const JointDistribution& j) {
    return {shannon_entropy(j.marginal_a()), shannon_entropy(j.marginal_b())};
}

double joint_entropy(const JointDistribution& j) {
    return kernels::active().neg_sum_xlogx(j.flat().data(), j.flat().size());
}

double mutual_information(const JointDistribution& j) {
    const auto pa = j.marginal_a();
    const auto pb = j.marginal_b();
    // I = sum_ij P(i,j) ln(P(i,j) / (P(i)P(j))), row by row against the
    // product reference. A cell with P > 0 always has positive marginals.
    std::vector<double> ref(j.cols());
    double total = 0.0;
    bool diverged = false;
    for (std::size_t i = 0; i < j.rows(); ++i) {
        for (std::size_t jj = 0; jj < j.cols(); ++jj) ref[jj] = pa[i] * pb[jj];
        total += kernels::active().sum_xlog_ratio(j.flat().data() + i * j.cols(),
                                                  ref.data(), j.cols(), &diverged);
    }
    return std::max(total, 0.0);
}

double effective_species_corrected(double h_a, double h_b, double i_ab) {
    if (!(h_a >= 0.0) || !(h_b >= 0.0))
        throw InvalidArgument("effective_species_corrected: entropies must be >= 0");
    if (!(i_ab >= 0.0) || i_ab > std::min(h_a, h_b))
        throw InvalidMutualInformation("mutual information must lie in [0, min(h_a, h_b)]");
    return std::exp(h_a + h_b - i_ab);
}

} // namespace qmaxent
