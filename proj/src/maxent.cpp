#include "qmaxent/maxent.hpp"

#include "qmaxent/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qmaxent {
namespace {

constexpr double kFeasibilitySlack = 1e-12;

// Energies e_x = -sum_i lambda_i f_i(x).
std::vector<double> energies(const ConstraintSet& cs, const std::vector<double>& lambdas) {
    std::vector<double> e(cs.num_states(), 0.0);
    for (std::size_t i = 0; i < lambdas.size(); ++i)
        kernels::active().axpy(-lambdas[i], cs.observables[i].data(), e.data(), e.size());
    return e;
}

std::vector<double> gibbs_probs(const std::vector<double>& e, double log_z) {
    std::vector<double> shifted(e.size());
    for (std::size_t i = 0; i < e.size(); ++i) shifted[i] = e[i] - log_z;
    std::vector<double> p(e.size());
    kernels::active().exp_fill(p.data(), shifted.data(), p.size());
    return p;
}

// Cholesky solve of the (symmetric positive definite) m x m system; returns
// false when a pivot degenerates relative to the matrix scale, which signals
// redundant or collinear constraints.
bool cholesky_solve(std::vector<double> a, std::vector<double> b, std::size_t m,
                    std::vector<double>& x) {
    double scale = 1e-300;
    for (std::size_t k = 0; k < m; ++k) scale = std::max(scale, a[k * m + k]);
    for (std::size_t k = 0; k < m; ++k) {
        double diag = a[k * m + k];
        for (std::size_t j = 0; j < k; ++j) diag -= a[k * m + j] * a[k * m + j];
        if (!(diag > 1e-12 * scale)) return false;
        const double l = std::sqrt(diag);
        a[k * m + k] = l;
        for (std::size_t i = k + 1; i < m; ++i) {
            double v = a[i * m + k];
            for (std::size_t j = 0; j < k; ++j) v -= a[i * m + j] * a[k * m + j];
            a[i * m + k] = v / l;
        }
    }
    // forward then backward substitution
    for (std::size_t i = 0; i < m; ++i) {
        double v = b[i];
        for (std::size_t j = 0; j < i; ++j) v -= a[i * m + j] * b[j];
        b[i] = v / a[i * m + i];
    }
    x.assign(m, 0.0);
    for (std::size_t ii = m; ii-- > 0;) {
        double v = b[ii];
        for (std::size_t j = ii + 1; j < m; ++j) v -= a[j * m + ii] * x[j];
        x[ii] = v / a[ii * m + ii];
    }
    return true;
}

} // namespace

void ConstraintSet::validate() const {
    if (states.empty()) throw InvalidArgument("constraint set has no states");
    if (observables.size() != targets.size())
        throw InvalidArgument("observables/targets count mismatch");
    for (std::size_t i = 0; i < observables.size(); ++i) {
        if (observables[i].size() != states.size())
            throw InvalidArgument("observable " + std::to_string(i) +
                                  " length does not match the state count");
        const auto [lo_it, hi_it] =
            std::minmax_element(observables[i].begin(), observables[i].end());
        const double lo = *lo_it, hi = *hi_it, f = targets[i];
        if (hi == lo) {
            if (std::abs(f - lo) > kFeasibilitySlack)
                throw InfeasibleTargets("target " + std::to_string(i) +
                                        " differs from its constant observable");
        } else if (!(f > lo + kFeasibilitySlack && f < hi - kFeasibilitySlack)) {
            throw InfeasibleTargets("target " + std::to_string(i) + " = " +
                                    std::to_string(f) + " not strictly inside [" +
                                    std::to_string(lo) + ", " + std::to_string(hi) + "]");
        }
    }
}

double log_partition(const ConstraintSet& cs, const std::vector<double>& lambdas) {
    if (lambdas.size() != cs.num_constraints())
        throw InvalidArgument("lambda length does not match the constraint count");
    const auto e = energies(cs, lambdas);
    return kernels::active().log_sum_exp(e.data(), e.size());
}

std::vector<double> model_means(const ConstraintSet& cs, const std::vector<double>& lambdas) {
    if (lambdas.size() != cs.num_constraints())
        throw InvalidArgument("lambda length does not match the constraint count");
    const auto e = energies(cs, lambdas);
    const double lz = kernels::active().log_sum_exp(e.data(), e.size());
    const auto p = gibbs_probs(e, lz);
    std::vector<double> mu(cs.num_constraints());
    for (std::size_t i = 0; i < mu.size(); ++i)
        mu[i] = kernels::active().dot(cs.observables[i].data(), p.data(), p.size());
    return mu;
}

GibbsDistribution solve_dual(const ConstraintSet& cs, double tol, int max_iter) {
    if (!(tol > 0.0)) throw InvalidArgument("solve_dual: tol must be > 0");
    cs.validate();

    // Constant observables carry no information once feasibility passed;
    // solve without them and report lambda = 0 for those rows.
    std::vector<std::size_t> act;
    for (std::size_t i = 0; i < cs.num_constraints(); ++i) {
        const auto [lo, hi] =
            std::minmax_element(cs.observables[i].begin(), cs.observables[i].end());
        if (*hi != *lo) act.push_back(i);
    }
    const std::size_t m = act.size();
    const std::size_t ns = cs.num_states();

    std::vector<double> lam(m, 0.0);
    auto dual_value = [&](const std::vector<double>& l) {
        std::vector<double> e(ns, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            kernels::active().axpy(-l[i], cs.observables[act[i]].data(), e.data(), ns);
        double v = kernels::active().log_sum_exp(e.data(), ns);
        for (std::size_t i = 0; i < m; ++i) v += l[i] * cs.targets[act[i]];
        return v;
    };

    auto means_at = [&](const std::vector<double>& l) {
        std::vector<double> e(ns, 0.0);
        for (std::size_t i = 0; i < m; ++i)
            kernels::active().axpy(-l[i], cs.observables[act[i]].data(), e.data(), ns);
        const double lz = kernels::active().log_sum_exp(e.data(), ns);
        return gibbs_probs(e, lz);
    };
    auto residual_at = [&](const std::vector<double>& l) {
        const auto p = means_at(l);
        double r = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            r = std::max(r, std::abs(kernels::active().dot(
                                cs.observables[act[i]].data(), p.data(), ns) -
                                cs.targets[act[i]]));
        return r;
    };

    int iter = 0;
    for (; iter < max_iter; ++iter) {
        const auto p = means_at(lam);
        std::vector<double> mu(m);
        for (std::size_t i = 0; i < m; ++i)
            mu[i] = kernels::active().dot(cs.observables[act[i]].data(), p.data(), ns);

        double resid = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            resid = std::max(resid, std::abs(mu[i] - cs.targets[act[i]]));
        if (resid < tol) break;

        // gradient of the dual: F - <f>
        std::vector<double> grad(m);
        for (std::size_t i = 0; i < m; ++i) grad[i] = cs.targets[act[i]] - mu[i];

        // Hessian = covariance of the observables under p
        std::vector<double> hess(m * m, 0.0);
        for (std::size_t x = 0; x < ns; ++x) {
            for (std::size_t i = 0; i < m; ++i) {
                const double fi = cs.observables[act[i]][x];
                for (std::size_t j = i; j < m; ++j)
                    hess[i * m + j] += p[x] * fi * cs.observables[act[j]][x];
            }
        }
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i; j < m; ++j) {
                const double c = hess[i * m + j] - mu[i] * mu[j];
                hess[i * m + j] = c;
                hess[j * m + i] = c;
            }

        std::vector<double> neg_grad(m);
        for (std::size_t i = 0; i < m; ++i) neg_grad[i] = -grad[i];
        double trace = 0.0;
        for (std::size_t i = 0; i < m; ++i) trace += hess[i * m + i];

        // Newton direction, with an escalating ridge when the covariance is
        // singular or so ill-conditioned that the step fails the line
        // search (redundant/collinear constraints); plain gradient last.
        const double d0 = dual_value(lam);
        bool accepted = false;
        std::vector<double> trial(m);
        std::vector<double> dir(m);
        for (int attempt = 0; attempt <= 5 && !accepted; ++attempt) {
            if (attempt == 0) {
                if (!cholesky_solve(hess, neg_grad, m, dir)) continue;
            } else if (attempt <= 4) {
                const double mu =
                    std::pow(10.0, 3.0 * (attempt - 1)) * 1e-12 * std::max(trace, 1.0);
                auto ridged = hess;
                for (std::size_t i = 0; i < m; ++i) ridged[i * m + i] += mu;
                if (!cholesky_solve(ridged, neg_grad, m, dir)) continue;
            } else {
                dir = neg_grad;
            }

            // backtracking: accept on an Armijo decrease of the dual or,
            // once the dual value sits at its double-precision floor, on a
            // plain decrease of the moment residual
            double slope = 0.0;
            for (std::size_t i = 0; i < m; ++i) slope += grad[i] * dir[i];
            double alpha = 1.0;
            for (int bt = 0; bt < 40 && !accepted; ++bt) {
                for (std::size_t i = 0; i < m; ++i) trial[i] = lam[i] + alpha * dir[i];
                const double dv = dual_value(trial);
                if (dv <= d0 + 1e-4 * alpha * slope ||
                    (std::abs(dv - d0) <= 4e-16 * std::abs(d0) &&
                     residual_at(trial) < resid))
                    accepted = true;
                else
                    alpha *= 0.5;
            }
        }
        if (!accepted) break; // stalled; the final residual check decides
        lam = trial;
    }

    std::vector<double> full(cs.num_constraints(), 0.0);
    for (std::size_t i = 0; i < m; ++i) full[act[i]] = lam[i];
    const auto e = energies(cs, full);
    const double lz = kernels::active().log_sum_exp(e.data(), e.size());
    auto p = gibbs_probs(e, lz);
    const auto mu = model_means(cs, full);
    std::vector<double> residuals(cs.num_constraints());
    double worst = 0.0;
    for (std::size_t i = 0; i < residuals.size(); ++i) {
        residuals[i] = mu[i] - cs.targets[i];
        worst = std::max(worst, std::abs(residuals[i]));
    }
    if (worst >= tol && cs.num_constraints() > 0)
        throw NonConvergence("solve_dual: residual " + std::to_string(worst) +
                                 " after " + std::to_string(iter) + " iterations",
                             worst);
    return GibbsDistribution{full, lz, ProbabilityDistribution(std::move(p)),
                             residuals, iter};
}

} // namespace qmaxent
