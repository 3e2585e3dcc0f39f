#include <cmath>
#include <numbers>

#include "nonpv/simd/kernels.hpp"

namespace nonpv::simd {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline cplx expi_turns(double r)
{
    r -= std::nearbyint(r);
    return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

struct Neumaier {
    double s = 0.0, c = 0.0;
    void add(double x)
    {
        double t = s + x;
        c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
        s = t;
    }
    double value() const { return s + c; }
};

cplx exp_sum(const double* pos, const unsigned char* type, std::size_t n, double k, cplx u0, cplx u1)
{
    Neumaier re, im;
    for (std::size_t i = 0; i < n; ++i) {
        cplx e = expi_turns(-(k * pos[i]));
        cplx t = (type[i] ? u1 : u0) * e;
        re.add(t.real());
        im.add(t.imag());
    }
    return {re.value(), im.value()};
}

void spectral_density(const double* ks, std::size_t count, const double* lam_pow, int steps, cplx u0, cplx u1,
                      double scale, double* out)
{
    for (std::size_t j = 0; j < count; ++j) {
        const double k = ks[j];
        cplx s00 = 1.0, s01 = 0.0, s10 = 0.0, s11 = 1.0;
        for (int m = 0; m < steps; ++m) {
            double y = lam_pow[m] * k;
            double x = lam_pow[m + 1] * k;
            y -= std::floor(y);
            x -= std::floor(x);
            cplx p = std::conj(expi_turns(x + y)) * (1.0 + 2.0 * std::cos(kTwoPi * y));
            cplx n00 = s00 + p * s10, n01 = s01 + p * s11;
            s10 = s00;
            s11 = s01;
            s00 = n00;
            s01 = n01;
        }
        cplx tot = (u0 * s00 + u1 * s01) * (1.0 + expi_turns(lam_pow[steps + 1] * k));
        out[j] = std::norm(tot) * scale;
    }
}

void torus_frob2(const double* xs, const double* ys, std::size_t count, int n, double* out)
{
    for (std::size_t j = 0; j < count; ++j) {
        double x = xs[j], y = ys[j];
        cplx a = 1.0, b = 0.0, c = 0.0, d = 1.0;
        for (int m = 0; m < n; ++m) {
            cplx p = expi_turns(x + y) * (1.0 + 2.0 * std::cos(kTwoPi * y));
            cplx na = a + b * p, nc = c + d * p;
            b = a;
            d = c;
            a = na;
            c = nc;
            double nx = x + 3.0 * y;
            y = x;
            x = nx - std::floor(nx);
        }
        out[j] = std::norm(a) + std::norm(b) + std::norm(c) + std::norm(d);
    }
}

}  // namespace

const Kernels& scalar_kernels()
{
    static const Kernels k{"scalar", exp_sum, spectral_density, torus_frob2};
    return k;
}

}  // namespace nonpv::simd
