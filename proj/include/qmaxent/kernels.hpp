#pragma once

#include <cstddef>
#include <string_view>

namespace qmaxent::kernels {

// Vector reduction / elementwise primitives behind every inner loop of the
// library. Two implementations exist: a scalar reference (libm + Neumaier
// compensated accumulation) and an AVX2+FMA variant with its own vectorized
// log/exp, selected at runtime. The AVX2 results are not bit-identical to
// scalar but agree to ~1e-14 relative; the equivalence suite pins that bound.
//
// Input contracts (unchecked):
//  - all inputs are 0, -inf (where noted) or *normal* doubles, never NaN;
//  - probability-like inputs are >= 0.
struct Ops {
    const char* name;

    // Compensated sum of x[0..n).
    double (*sum)(const double* x, std::size_t n);

    // Compensated dot product: sum of x[i]*y[i].
    double (*dot)(const double* x, const double* y, std::size_t n);

    // y[i] += a * x[i].
    void (*axpy)(double a, const double* x, double* y, std::size_t n);

    // -sum of x[i]*ln(x[i]) with the 0*ln(0) = 0 convention.
    double (*neg_sum_xlogx)(const double* x, std::size_t n);

    // sum of x[i]^q with the 0^q = 0 convention (q > 0).
    double (*sum_pow)(const double* x, std::size_t n, double q);

    // sum of p[i]*ln(p[i]/r[i]); terms with p[i] = 0 contribute 0. Sets
    // *diverged when some p[i] > 0 has r[i] = 0 (result then meaningless).
    double (*sum_xlog_ratio)(const double* p, const double* r, std::size_t n,
                             bool* diverged);

    // ln(sum of e^{x[i]}), max-subtracted. -inf entries are skipped; returns
    // -inf when n = 0 or all entries are -inf.
    double (*log_sum_exp)(const double* x, std::size_t n);

    // out[i] = e^{x[i]}; underflows to 0 below ~-708.4, overflows to +inf.
    void (*exp_fill)(double* out, const double* x, std::size_t n);

    // out[i] = ln(x[i]); x[i] = 0 gives -inf.
    void (*log_fill)(double* out, const double* x, std::size_t n);

    // out[i] = x[i]^a for x[i] > 0, else 0 (the (x)_+^a truncation).
    void (*pow_fill)(double* out, const double* x, double a, std::size_t n);
};

const Ops& scalar_ops();

// AVX2+FMA table, or nullptr when the build has no x86 backend. Callers must
// not invoke it unless cpu_has_avx2() is true.
const Ops* avx2_ops();

bool cpu_has_avx2();

// Runtime-selected table. First use honors QMAXENT_KERNEL=auto|scalar|avx2.
const Ops& active();

// Force a specific implementation ("auto", "scalar", "avx2"). Throws
// InvalidArgument for unknown names or unsupported hardware. Not thread-safe;
// call at startup.
void select(std::string_view name);

} // namespace qmaxent::kernels
