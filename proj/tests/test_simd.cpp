#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nonpv/diffraction.hpp"
#include "nonpv/simd/kernels.hpp"

using namespace nonpv;
using simd::Kernels;

namespace {

std::vector<const Kernels*> variants()
{
    std::vector<const Kernels*> v{&simd::scalar_kernels()};
    if (simd::avx2_kernels()) v.push_back(simd::avx2_kernels());
    return v;
}

}  // namespace

TEST_CASE("dispatch")
{
    auto names = simd::available_kernels();
    REQUIRE(!names.empty());
    CHECK(names.front() == "scalar");
    MESSAGE("active kernel: " << std::string(simd::active_kernels().name));
    bool found = false;
    for (const auto& n : names) found |= n == simd::active_kernels().name;
    CHECK(found);
}

TEST_CASE("exponential sum kernels agree")
{
    auto patch = geometric_patch(5);
    auto pos = patch.positions_double();
    const auto* type = patch.word().letters.data();
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> d(-4.0, 4.0);
    const auto& ref = simd::scalar_kernels();
    for (const Kernels* k : variants())
        for (std::size_t n : {std::size_t(0), std::size_t(1), std::size_t(3), std::size_t(7), pos.size()})
            for (int it = 0; it < 10; ++it) {
                double kk = d(rng);
                cplx u0(d(rng), d(rng)), u1(d(rng), d(rng));
                cplx a = ref.exp_sum(pos.data(), type, n, kk, u0, u1);
                cplx b = k->exp_sum(pos.data(), type, n, kk, u0, u1);
                REQUIRE(std::abs(a - b) <= 1e-11 * std::max(1.0, std::sqrt(static_cast<double>(n))));
            }

    // single terms reproduce e^{-2 pi i k x}
    for (const Kernels* k : variants())
        for (int it = 0; it < 1000; ++it) {
            double x = d(rng) * 1e3, kk = d(rng);
            unsigned char t = 0;
            cplx s = k->exp_sum(&x, &t, 1, kk, 1.0, 0.0);
            double r = -(kk * x);
            r -= std::nearbyint(r);
            REQUIRE(std::abs(s - std::polar(1.0, 2.0 * M_PI * r)) < 1e-14);
        }
}

TEST_CASE("spectral density kernels agree")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> d(0.0, 3.0);
    const auto& ref = simd::scalar_kernels();
    for (int level : {1, 4, 8}) {
        auto lp = lambda_powers(level);
        std::vector<double> ks(103);
        for (auto& k : ks) k = d(rng);
        ks[0] = 0.0;
        std::vector<double> a(ks.size()), b(ks.size());
        cplx u0(1.0 - kLambda), u1(1.0);
        ref.spectral_density(ks.data(), ks.size(), lp.data(), 2 * level, u0, u1, 1.0 / (2 * lp.back()), a.data());
        for (const Kernels* k : variants()) {
            k->spectral_density(ks.data(), ks.size(), lp.data(), 2 * level, u0, u1, 1.0 / (2 * lp.back()), b.data());
            for (std::size_t i = 0; i < ks.size(); ++i) REQUIRE(std::abs(a[i] - b[i]) <= 1e-9 * std::max(1.0, a[i]));
        }
    }
}

TEST_CASE("torus kernels agree")
{
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    std::vector<double> xs(1001), ys(1001);
    for (auto& x : xs) x = d(rng);
    for (auto& y : ys) y = d(rng);
    const auto& ref = simd::scalar_kernels();
    for (int n : {1, 2, 4, 6}) {
        std::vector<double> a(xs.size()), b(xs.size());
        ref.torus_frob2(xs.data(), ys.data(), xs.size(), n, a.data());
        for (const Kernels* k : variants()) {
            k->torus_frob2(xs.data(), ys.data(), xs.size(), n, b.data());
            for (std::size_t i = 0; i < xs.size(); ++i) REQUIRE(std::abs(a[i] - b[i]) <= 1e-11 * std::max(1.0, a[i]));
        }
    }
}
