#pragma once

#include "qmaxent/chain.hpp"
#include "qmaxent/distribution.hpp"

#include <cstdint>
#include <vector>

// Generalized MaxEnt distribution over chain configurations with the q-mean
// of M constrained: p(c) = (1 - (1-q) psi M(c))_+^(1/(1-q)) / Z_q(psi).
// All computations run over the M-marginal (support 0..N) with degeneracy
// bookkeeping, since the weight depends on c only through M(c).

namespace qmaxent {

enum class DegeneracySource { exact, asymptotic };

// Per-magnetization configuration counts Omega_d(N, M), exact when
// C(n-1, d) <= 1e7 and d > 0 enumeration applies (d = 0 is always exact),
// asymptotic otherwise. The source is recorded for reproducibility.
struct DegeneracyTable {
    ChainSpec spec;
    DegeneracySource source;
    std::vector<double> omega;    // length n+1, zeros where unattainable
    std::vector<double> ln_omega; // -inf where omega = 0
};

DegeneracyTable degeneracy_table(const ChainSpec& spec);

// (1 - (1-q) psi m)^(1/(1-q)) with the (x)_+ truncation; e^(-psi m) at the
// q = 1 limit branch.
double q_deformed_weight(double q, double psi, double m);

// ln of the above; -inf outside the support.
double log_q_weight(double q, double psi, double m);

class QExponentialModel {
public:
    QExponentialModel(const ChainSpec& spec, double q, double psi);
    QExponentialModel(DegeneracyTable table, double q, double psi);

    double q() const { return q_; }
    double psi() const { return psi_; }
    const ChainSpec& spec() const { return table_.spec; }
    DegeneracySource degeneracy_source() const { return table_.source; }
    const DegeneracyTable& table() const { return table_; }

    // ln Z_q(psi) = ln sum_M Omega_d(N,M) w(M); strictly positive Z.
    double log_partition() const { return log_z_; }
    double partition_function() const;

    // p(M) = Omega_d(N,M) w(M) / Z over M in {0..N}.
    ProbabilityDistribution pmf_over_m() const;

    // <M> under the pmf.
    double mean_m() const;

    // i.i.d. draws of M by inverse CDF over the finite support;
    // deterministic per seed.
    std::vector<int> sample_m(int count, std::uint64_t seed) const;

private:
    void init();

    DegeneracyTable table_;
    double q_, psi_;
    std::vector<double> ln_weight_; // length n+1
    double log_z_;
};

} // namespace qmaxent
