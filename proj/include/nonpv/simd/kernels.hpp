// Hot loops with a scalar reference and vector variants, selected at runtime.
#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <vector>

namespace nonpv::simd {

using cplx = std::complex<double>;

struct Kernels {
    const char* name;

    /// sum_x u[type x] e^{-2 pi i k x}, compensated.
    cplx (*exp_sum)(const double* pos, const unsigned char* type, std::size_t n, double k, cplx u0, cplx u1);

    /// |S(k)|^2 * scale for the two-sided level patch, via the Fourier-matrix recursion.
    /// lam_pow holds lambda^0 .. lambda^(steps+1).
    void (*spectral_density)(const double* ks, std::size_t count, const double* lam_pow, int steps, cplx u0, cplx u1,
                             double scale, double* out);

    /// Squared Frobenius norm of the lifted product of length n at each (x, y).
    void (*torus_frob2)(const double* xs, const double* ys, std::size_t count, int n, double* out);
};

const Kernels& scalar_kernels();
/// nullptr when the CPU or the build lacks AVX2/FMA.
const Kernels* avx2_kernels();
/// AVX2 when available, unless NONPV_SIMD=scalar is set.
const Kernels& active_kernels();
std::vector<std::string> available_kernels();

}  // namespace nonpv::simd
