#include "qmaxent/distribution.hpp"

#include "qmaxent/kernels.hpp"

#include <cmath>
#include <string>

namespace qmaxent {
namespace {

constexpr double kMassBand = 1e-9;

void check_entries(const std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!(v[i] >= 0.0) || !std::isfinite(v[i]))
            throw InvalidDistribution("probability entry " + std::to_string(i) +
                                      " is negative or non-finite");
    }
}

void normalize_mass(std::vector<double>& v, const char* what) {
    const double mass = kernels::active().sum(v.data(), v.size());
    if (std::abs(mass - 1.0) > kMassBand)
        throw InvalidDistribution(std::string(what) + " mass " + std::to_string(mass) +
                                  " outside [1-1e-9, 1+1e-9]");
    if (mass != 1.0)
        for (double& x : v) x /= mass;
}

} // namespace

ProbabilityDistribution::ProbabilityDistribution(std::vector<double> probs)
    : probs_(std::move(probs)) {
    if (probs_.empty())
        throw InvalidDistribution("distribution needs at least one state");
    check_entries(probs_);
    normalize_mass(probs_, "distribution");
}

ProbabilityDistribution ProbabilityDistribution::uniform(std::size_t n) {
    if (n == 0) throw InvalidDistribution("uniform distribution needs n >= 1");
    return ProbabilityDistribution(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

JointDistribution::JointDistribution(const std::vector<std::vector<double>>& rows) {
    if (rows.empty() || rows.front().empty())
        throw InvalidDistribution("joint distribution needs at least one cell");
    n_a_ = rows.size();
    n_b_ = rows.front().size();
    flat_.reserve(n_a_ * n_b_);
    for (const auto& row : rows) {
        if (row.size() != n_b_)
            throw InvalidDistribution("joint distribution rows have unequal lengths");
        flat_.insert(flat_.end(), row.begin(), row.end());
    }
    check_entries(flat_);
    normalize_mass(flat_, "joint distribution");
}

ProbabilityDistribution JointDistribution::marginal_a() const {
    std::vector<double> m(n_a_, 0.0);
    for (std::size_t i = 0; i < n_a_; ++i)
        m[i] = kernels::active().sum(flat_.data() + i * n_b_, n_b_);
    return ProbabilityDistribution(std::move(m));
}

ProbabilityDistribution JointDistribution::marginal_b() const {
    std::vector<double> m(n_b_, 0.0);
    for (std::size_t i = 0; i < n_a_; ++i)
        for (std::size_t j = 0; j < n_b_; ++j) m[j] += flat_[i * n_b_ + j];
    return ProbabilityDistribution(std::move(m));
}

} // namespace qmaxent
