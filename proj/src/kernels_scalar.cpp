#include "mdlbb/kernels.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>

namespace mdlbb::kernels {

namespace {

NbStep nb_step_scalar(std::size_t n, const double* phi, const double* x, const double* T, const std::int32_t* dst,
                      const std::int32_t* rev, double shift, double* z) {
    NbStep r{std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t e = 0; e < n; ++e) {
        const double y = phi[e] * (T[dst[e]] - x[rev[e]]);
        const double q = y / x[e];
        r.lo = std::min(r.lo, q);
        r.hi = std::max(r.hi, q);
        z[e] = y + shift * x[e];
        r.zmax = std::max(r.zmax, z[e]);
    }
    return r;
}

double mp_update_scalar(std::size_t n, const double* phi, const double* t, const double* u, double* u_new) {
    double delta = 0.0;
    for (std::size_t e = 0; e < n; ++e) {
        u_new[e] = 1.0 - phi[e] * (1.0 - t[e]);
        delta = std::max(delta, std::abs(u_new[e] - u[e]));
    }
    return delta;
}

constexpr KernelSet kScalar{"scalar", nb_step_scalar, mp_update_scalar};

std::atomic<bool> g_force_scalar{false};

} // namespace

#ifdef MDLBB_HAVE_AVX2
const KernelSet* avx2_impl();
#endif

const KernelSet& scalar() { return kScalar; }

const KernelSet* avx2() {
#ifdef MDLBB_HAVE_AVX2
    static const bool ok = __builtin_cpu_supports("avx2");
    return ok ? avx2_impl() : nullptr;
#else
    return nullptr;
#endif
}

const KernelSet& active() {
    if (g_force_scalar.load(std::memory_order_relaxed)) return kScalar;
    if (auto* k = avx2()) return *k;
    return kScalar;
}

void force_scalar(bool on) { g_force_scalar.store(on, std::memory_order_relaxed); }

} // namespace mdlbb::kernels
