// Runtime kernel selection.

#include "qmaxent/kernels.hpp"

#include "qmaxent/errors.hpp"

#include <cstdlib>
#include <string>

namespace qmaxent::kernels {
namespace {

const Ops* g_active = nullptr;

const Ops* resolve(std::string_view name) {
    if (name == "scalar") return &scalar_ops();
    if (name == "avx2") {
        if (!cpu_has_avx2())
            throw InvalidArgument("avx2 kernels requested but unsupported on this CPU");
        return avx2_ops();
    }
    if (name == "auto" || name.empty())
        return cpu_has_avx2() ? avx2_ops() : &scalar_ops();
    throw InvalidArgument("unknown kernel '" + std::string(name) +
                          "' (expected auto, scalar or avx2)");
}

} // namespace

bool cpu_has_avx2() {
#if (defined(__x86_64__) || defined(__i386__)) && defined(__GNUC__)
    return avx2_ops() != nullptr && __builtin_cpu_supports("avx2") &&
           __builtin_cpu_supports("fma");
#else
    return false;
#endif
}

void select(std::string_view name) { g_active = resolve(name); }

const Ops& active() {
    if (g_active == nullptr) {
        const char* env = std::getenv("QMAXENT_KERNEL");
        g_active = resolve(env != nullptr ? env : "auto");
    }
    return *g_active;
}

} // namespace qmaxent::kernels
