#include "qmaxent/mle.hpp"

#include "qmaxent/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qmaxent {
namespace {

constexpr int kScanPoints = 64;
constexpr int kOuterGrid = 60;
constexpr double kPsiFloor = 1e-4;
constexpr double kPsiCeil = 1e3;
constexpr double kPsiTol = 1e-8;
constexpr double kQTol = 1e-4;
constexpr double kQLimitBand = 1e-8;
const double kNegInf = -std::numeric_limits<double>::infinity();

// Shared evaluation state: degeneracy table plus the sample histogram. The
// likelihood depends on the data only through the histogram over M.
struct Ctx {
    DegeneracyTable table;
    std::vector<std::pair<int, double>> obs; // (m, count), m ascending
    double count = 0.0;                      // K
    int max_m = 0;

    // workspaces, sized n+1
    mutable std::vector<double> ln_w, terms;

    explicit Ctx(const SampleSet& s) : table(degeneracy_table(s.spec)) {
        std::vector<double> hist(s.spec.n + 1, 0.0);
        for (int m : s.values) hist[m] += 1.0;
        for (int m = 0; m <= s.spec.n; ++m)
            if (hist[m] > 0.0) obs.emplace_back(m, hist[m]);
        count = static_cast<double>(s.values.size());
        max_m = obs.back().first;
        ln_w.resize(s.spec.n + 1);
        terms.resize(s.spec.n + 1);
    }

    int n() const { return table.spec.n; }

    void fill_log_weights(double q, double psi) const {
        if (std::abs(q - 1.0) < kQLimitBand) {
            for (int m = 0; m <= n(); ++m) ln_w[m] = -psi * m;
            return;
        }
        const double a = 1.0 / (1.0 - q);
        for (int m = 0; m <= n(); ++m) {
            const double t = -(1.0 - q) * psi * m;
            ln_w[m] = t > -1.0 ? a * std::log1p(t) : kNegInf;
        }
    }

    double log_z() const {
        for (int m = 0; m <= n(); ++m) terms[m] = table.ln_omega[m] + ln_w[m];
        return kernels::active().log_sum_exp(terms.data(), terms.size());
    }

    // Total log-likelihood sum_k ln w(M_k) - K ln Z.
    double loglik(double q, double psi) const {
        fill_log_weights(q, psi);
        double s = 0.0;
        for (const auto& [m, c] : obs) {
            if (std::isinf(ln_w[m])) return kNegInf;
            s += c * ln_w[m];
        }
        const double lz = log_z();
        if (std::isinf(lz)) return kNegInf;
        return s - count * lz;
    }

    // Analytic d(ell/K)/d psi = <M w^(q-1)>_model-normalized - data side:
    //   (1/Z) sum_M Omega M w^q  -  (1/K) sum_k M_k w(M_k)^(q-1).
    double dldpsi(double q, double psi) const {
        fill_log_weights(q, psi);
        const double lz = log_z();
        for (int m = 0; m <= n(); ++m)
            terms[m] = m == 0 ? kNegInf
                              : table.ln_omega[m] + std::log(static_cast<double>(m)) +
                                    q * ln_w[m];
        const double s1 = kernels::active().log_sum_exp(terms.data(), terms.size());
        const double model_side = std::exp(s1 - lz);
        double data_side = 0.0;
        for (const auto& [m, c] : obs)
            data_side += c * m * std::exp((q - 1.0) * ln_w[m]);
        data_side /= count;
        return model_side - data_side;
    }

    // Box-3 matching rule sides: sum_x C(x) p^q(x) vs (1/K) sum_k C_k p_k^(q-1).
    void matching_residual(double q, double psi, double* abs_res, double* rel_res) const {
        fill_log_weights(q, psi);
        const double lz = log_z();
        for (int m = 0; m <= n(); ++m)
            terms[m] = m == 0 ? kNegInf
                              : table.ln_omega[m] + std::log(static_cast<double>(m)) +
                                    q * ln_w[m];
        const double s1 = kernels::active().log_sum_exp(terms.data(), terms.size());
        const double lhs = std::exp(s1 - q * lz);
        double rhs = 0.0;
        for (const auto& [m, c] : obs)
            rhs += c * m * std::exp((q - 1.0) * (ln_w[m] - lz));
        rhs /= count;
        *abs_res = std::abs(lhs - rhs);
        *rel_res = *abs_res / std::max({std::abs(lhs), std::abs(rhs), 1.0});
    }
};

// Golden-section maximization on [a, b] to absolute width tol; f returns
// -inf for infeasible points. Also seeds from the provided best interior
// value so a flat shoulder cannot lose it.
template <typename F>
double golden_max(F&& f, double a, double b, double tol) {
    constexpr double kInvPhi = 0.6180339887498949;
    double c = b - kInvPhi * (b - a);
    double d = a + kInvPhi * (b - a);
    double fc = f(c), fd = f(d);
    while (b - a > tol) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - kInvPhi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + kInvPhi * (b - a);
            fd = f(d);
        }
    }
    return fc > fd ? c : d;
}

InnerSolve solve_inner(const Ctx& ctx, double q) {
    const double lo = kPsiFloor;
    double hi = kPsiCeil;
    if (q < 1.0 - kQLimitBand && ctx.max_m > 0) {
        // support bound: 1 - (1-q) psi max_m must stay positive
        const double bound = 1.0 / ((1.0 - q) * ctx.max_m);
        hi = bound * (1.0 - 1e-9);
    }
    if (!(hi > lo))
        throw NoInteriorMaximum("psi bracket is empty at q = " + std::to_string(q), lo, hi);

    // coarse log-spaced scan to bracket the maximum
    std::vector<double> xs(kScanPoints), ys(kScanPoints);
    const double ratio = std::log(hi / lo) / (kScanPoints - 1);
    for (int i = 0; i < kScanPoints; ++i) {
        xs[i] = lo * std::exp(ratio * i);
        ys[i] = ctx.loglik(q, xs[i]);
    }
    const auto best_it = std::max_element(ys.begin(), ys.end());
    int bi_lo = static_cast<int>(best_it - ys.begin());
    int bi_hi = bi_lo;
    // a run of exactly-equal maxima (underflow plateaus) counts as one peak;
    // a plateau touching a bracket edge means the likelihood saturates there
    while (bi_hi + 1 < kScanPoints && ys[bi_hi + 1] == *best_it) ++bi_hi;
    if (bi_lo == 0 || bi_hi == kScanPoints - 1 || std::isinf(*best_it))
        throw NoInteriorMaximum(
            "log-likelihood is monotone over the psi bracket [" + std::to_string(lo) +
                ", " + std::to_string(hi) + "] at q = " + std::to_string(q),
            lo, hi);

    double psi = golden_max([&](double p) { return ctx.loglik(q, p); }, xs[bi_lo - 1],
                            xs[bi_hi + 1], kPsiTol);

    // Newton polish on the analytic stationarity condition; the bracketed
    // search alone leaves the matching-rule residual orders of magnitude
    // above the 1e-8 target.
    double ell = ctx.loglik(q, psi);
    for (int it = 0; it < 12; ++it) {
        const double g = ctx.dldpsi(q, psi);
        if (!std::isfinite(g) || g == 0.0) break;
        const double h = std::max(psi * 1e-6, 1e-12);
        const double gp = (ctx.dldpsi(q, psi + h) - ctx.dldpsi(q, psi - h)) / (2.0 * h);
        if (!std::isfinite(gp) || gp >= 0.0) break; // need a concave point
        double cand = psi - g / gp;
        cand = std::clamp(cand, lo, hi);
        const double cand_ell = ctx.loglik(q, cand);
        if (!(cand_ell >= ell - 1e-9 * std::abs(ell))) break;
        const bool tiny = std::abs(cand - psi) < 1e-13 * std::max(psi, 1.0);
        psi = cand;
        ell = cand_ell;
        if (tiny) break;
    }

    InnerSolve s;
    s.q = q;
    s.psi = psi;
    s.log_likelihood = ctx.loglik(q, psi);
    s.interior = true;
    ctx.matching_residual(q, psi, &s.matching_residual_abs, &s.matching_residual_rel);
    return s;
}

// Prefer higher likelihood; break exact ties toward q closest to 1, then
// toward smaller q, so the reduction is order-independent.
bool better(const InnerSolve& a, const InnerSolve& b) {
    if (a.log_likelihood != b.log_likelihood) return a.log_likelihood > b.log_likelihood;
    const double da = std::abs(a.q - 1.0), db = std::abs(b.q - 1.0);
    if (da != db) return da < db;
    return a.q < b.q;
}

} // namespace

SampleSet::SampleSet(ChainSpec s, std::vector<int> v) : spec(s), values(std::move(v)) {
    if (values.empty()) throw InvalidArgument("sample set is empty");
    for (int m : values)
        if (m < 0 || m > spec.n)
            throw InvalidArgument("sample " + std::to_string(m) + " outside [0, n]");
}

double log_likelihood(const SampleSet& samples, double q, double psi) {
    if (!(q > 0.0)) throw InvalidArgument("q must be > 0");
    if (!(psi > 0.0)) throw InvalidArgument("psi must be > 0");
    return Ctx(samples).loglik(q, psi);
}

std::pair<double, double> fit_psi_for_q(const SampleSet& samples, double q) {
    if (!(q > 0.0)) throw InvalidArgument("q must be > 0");
    const Ctx ctx(samples);
    const InnerSolve s = solve_inner(ctx, q);
    return {s.psi, s.log_likelihood};
}

FitResult fit(const SampleSet& samples, double q_min, double q_max) {
    if (!(q_min > 0.0) || !(q_max > q_min))
        throw InvalidArgument("need 0 < q_min < q_max");
    const Ctx ctx(samples);

    FitResult result;
    result.degeneracy = ctx.table.source;

    std::vector<double> grid(kOuterGrid);
    const double step = std::log(q_max / q_min) / (kOuterGrid - 1);
    for (int i = 0; i < kOuterGrid; ++i) grid[i] = q_min * std::exp(step * i);

    int best_idx = -1;
    for (int i = 0; i < kOuterGrid; ++i) {
        InnerSolve s;
        try {
            s = solve_inner(ctx, grid[i]);
        } catch (const NoInteriorMaximum& e) {
            s.q = grid[i];
            s.log_likelihood = kNegInf;
            s.note = e.what();
        }
        result.inner_solves.push_back(s);
        if (s.interior && (best_idx < 0 || better(s, result.inner_solves[best_idx])))
            best_idx = i;
    }
    if (best_idx < 0)
        throw AllPointsFailed("no q grid point admits an interior psi maximum");

    InnerSolve best = result.inner_solves[best_idx];

    // one-dimensional refinement between the neighbors of the best grid point
    const double qa = grid[std::max(best_idx - 1, 0)];
    const double qb = grid[std::min(best_idx + 1, kOuterGrid - 1)];
    auto profile = [&](double q) {
        try {
            InnerSolve s = solve_inner(ctx, q);
            if (better(s, best)) best = s;
            return s.log_likelihood;
        } catch (const NoInteriorMaximum&) {
            return kNegInf;
        }
    };
    golden_max(profile, qa, qb, kQTol);

    result.q_star = best.q;
    result.psi_star = best.psi;
    result.log_likelihood = best.log_likelihood;
    result.converged = best.interior;
    return result;
}

LikelihoodSurface likelihood_surface(const SampleSet& samples,
                                     const std::vector<double>& q_grid,
                                     const std::vector<double>& psi_grid) {
    if (q_grid.empty() || psi_grid.empty())
        throw InvalidArgument("likelihood_surface: empty grid");
    const Ctx ctx(samples);

    LikelihoodSurface s;
    s.q_grid = q_grid;
    s.psi_grid = psi_grid;
    std::vector<double> ell(q_grid.size() * psi_grid.size());
    s.ell_max = kNegInf;
    for (std::size_t i = 0; i < q_grid.size(); ++i)
        for (std::size_t j = 0; j < psi_grid.size(); ++j) {
            const double v = ctx.loglik(q_grid[i], psi_grid[j]);
            ell[i * psi_grid.size() + j] = v;
            if (v > s.ell_max) {
                s.ell_max = v;
                s.q_at_max = q_grid[i];
                s.psi_at_max = psi_grid[j];
            }
        }
    s.deltas.resize(ell.size());
    for (std::size_t k = 0; k < ell.size(); ++k)
        s.deltas[k] = std::isinf(ell[k]) ? std::numeric_limits<double>::infinity()
                                         : s.ell_max - ell[k];
    return s;
}

} // namespace qmaxent
