#pragma once

#include <cstddef>
#include <cstdint>

namespace mdlbb::kernels {

struct NbStep {
    double lo = 0.0;   // min_e y[e] / x[e]
    double hi = 0.0;   // max_e y[e] / x[e]
    double zmax = 0.0; // max_e z[e]
};

/*
 * Inner loops of the percolation solvers. Every variant performs the same
 * floating-point operations in the same order, so results are bitwise
 * identical across variants.
 */
struct KernelSet {
    const char* name;

    // y[e] = phi[e] * (T[dst[e]] - x[rev[e]]), z[e] = y[e] + shift * x[e].
    // x must be positive. Indices must fit in a signed 32-bit integer.
    NbStep (*nb_step)(std::size_t n, const double* phi, const double* x, const double* T, const std::int32_t* dst,
                      const std::int32_t* rev, double shift, double* z);

    // u_new[e] = 1 - phi[e] * (1 - t[e]); returns max_e |u_new[e] - u[e]|.
    double (*mp_update)(std::size_t n, const double* phi, const double* t, const double* u, double* u_new);
};

const KernelSet& scalar();
/// nullptr unless compiled in and supported by the running CPU.
const KernelSet* avx2();
/// Fastest supported variant, or scalar() while force_scalar(true) is in effect.
const KernelSet& active();
void force_scalar(bool on);

} // namespace mdlbb::kernels
