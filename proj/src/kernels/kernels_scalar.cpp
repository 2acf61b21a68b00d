// Scalar reference kernels. These define the semantics the SIMD variants are
// tested against: libm transcendentals, Neumaier-compensated reductions.

#include "qmaxent/kernels.hpp"

#include <cmath>
#include <limits>

namespace qmaxent::kernels {
namespace {

// Neumaier variant of Kahan summation: exact to ~2 ulp of the result
// independent of n, which the 1e-12 identity tolerances need at n ~ 1000.
struct Accum {
    double s = 0.0, c = 0.0;
    void add(double v) {
        double t = s + v;
        if (std::abs(s) >= std::abs(v))
            c += (s - t) + v;
        else
            c += (v - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

double k_sum(const double* x, std::size_t n) {
    Accum a;
    for (std::size_t i = 0; i < n; ++i) a.add(x[i]);
    return a.value();
}

double k_dot(const double* x, const double* y, std::size_t n) {
    Accum a;
    for (std::size_t i = 0; i < n; ++i) a.add(x[i] * y[i]);
    return a.value();
}

void k_axpy(double a, const double* x, double* y, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

double k_neg_sum_xlogx(const double* x, std::size_t n) {
    Accum a;
    for (std::size_t i = 0; i < n; ++i)
        if (x[i] > 0.0) a.add(x[i] * std::log(x[i]));
    return -a.value();
}

double k_sum_pow(const double* x, std::size_t n, double q) {
    Accum a;
    for (std::size_t i = 0; i < n; ++i)
        if (x[i] > 0.0) a.add(std::pow(x[i], q));
    return a.value();
}

double k_sum_xlog_ratio(const double* p, const double* r, std::size_t n,
                        bool* diverged) {
    Accum a;
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i] <= 0.0) continue;
        if (r[i] <= 0.0) {
            *diverged = true;
            continue;
        }
        a.add(p[i] * std::log(p[i] / r[i]));
    }
    return a.value();
}

double k_log_sum_exp(const double* x, std::size_t n) {
    double m = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n; ++i) m = std::max(m, x[i]);
    if (std::isinf(m) && m < 0) return m;
    Accum a;
    for (std::size_t i = 0; i < n; ++i) a.add(std::exp(x[i] - m));
    return m + std::log(a.value());
}

void k_exp_fill(double* out, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::exp(x[i]);
}

void k_log_fill(double* out, const double* x, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) out[i] = std::log(x[i]);
}

void k_pow_fill(double* out, const double* x, double a, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i)
        out[i] = x[i] > 0.0 ? std::pow(x[i], a) : 0.0;
}

constexpr Ops kScalarOps = {
    "scalar",        k_sum,      k_dot,      k_axpy,     k_neg_sum_xlogx,
    k_sum_pow,       k_sum_xlog_ratio,       k_log_sum_exp,
    k_exp_fill,      k_log_fill, k_pow_fill,
};

} // namespace

const Ops& scalar_ops() { return kScalarOps; }

} // namespace qmaxent::kernels
