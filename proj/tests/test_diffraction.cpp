#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "nonpv/diffraction.hpp"

using namespace nonpv;

namespace {

const Weights kOnes{cplx(1.0), cplx(1.0)};

double intensity_target() { return std::pow((6.0 + kLambda) / 13.0, 2); }

}  // namespace

TEST_CASE("exponential sums at k = 0")
{
    auto p = geometric_patch(3);
    cplx s = exponential_sum(p, 0.0);
    CHECK(s.real() == doctest::Approx(static_cast<double>(p.size())).epsilon(1e-15));
    CHECK(s.imag() == 0.0);

    double prev = 1.0;
    for (int level = 2; level <= 6; ++level) {
        auto b = geometric_patch(level, balanced_weights());
        double v = std::abs(exponential_sum(b, 0.0)) / (2.0 * b.radius());
        CHECK(v < prev);
        prev = v;
    }
    CHECK(prev < 1e-3);

    CHECK(std::abs(bragg_intensity(kOnes, 8, 0.0) - intensity_target()) < 1e-3);
    CHECK(intensity_target() == doctest::Approx(0.40791).epsilon(1e-4));
}

TEST_CASE("recursion matches the direct sum")
{
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> d(0.0, 5.0);
    std::normal_distribution<double> g;
    for (int level = 1; level <= 5; ++level) {
        auto patch = geometric_patch(level);
        CHECK(patch.radius() == doctest::Approx(patch_radius(level)).epsilon(1e-14));
        for (int it = 0; it < 20; ++it) {
            Weights u{cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
            double k = d(rng);
            cplx a = exponential_sum(patch.with_weights(u), k);
            cplx b = exponential_sum_recursive(u, level, k);
            const double scale = static_cast<double>(patch.size()) * std::max(std::abs(u[0]), std::abs(u[1]));
            REQUIRE(std::abs(a - b) < 1e-12 * scale);
            double dens = spectral_sample(u, level, k).density_approx;
            REQUIRE(std::abs(dens - std::norm(a) / (2.0 * patch.radius())) < 1e-9 * std::max(1.0, dens));
            REQUIRE(dens >= 0.0);
        }
    }
}

TEST_CASE("Bragg scan")
{
    auto rep = bragg_scan(kOnes, {0.0, 0.5, 1.0}, {5, 6, 7, 8, 9});
    REQUIRE(rep.entries.size() == 3);
    CHECK(rep.entries[0].bragg);
    CHECK(std::abs(rep.entries[0].intensities.back() - intensity_target()) < 1e-3);
    CHECK_FALSE(rep.entries[1].bragg);
    CHECK_FALSE(rep.entries[2].bragg);
    CHECK(rep.entries[2].decay_ratio < 0.5);
    CHECK(rep.peaks == 1);

    auto bal = bragg_scan(balanced_weights(), {0.0, 0.5, 1.0}, {5, 6, 7, 8, 9});
    CHECK(bal.peaks == 0);
    CHECK(bal.entries[0].intensities.back() < bal.entries[0].intensities.front());

    CHECK_THROWS(bragg_scan(kOnes, {0.0}, {7, 6}));
}

TEST_CASE("distribution function")
{
    auto c = distribution_with_previous(balanced_weights(), 3.0, 1500, 6);
    const auto& F = c.current.Fs;
    CHECK(F.front() == 0.0);
    CHECK(F.size() == 1501);
    CHECK(c.non_decreasing);
    CHECK(c.min_increment > 0.0);
    CHECK(std::abs(F.back() / 3.0 - (6.0 * kLambda - 3.0) / 13.0) < 0.02);
    CHECK(c.rel_diff_at_xmax < 0.02);
    CHECK(c.current.nodes >= static_cast<std::size_t>(4 * 3.0 * 2.0 * patch_radius(6)));

    auto single = distribution_function(balanced_weights(), 3.0, 1500, 6);
    CHECK(single.Fs == F);
    CHECK(integrated_density(balanced_weights(), 6, 0.0, 3.0) == doctest::Approx(F.back()).epsilon(1e-6));
    CHECK_THROWS(distribution_function(balanced_weights(), 0.0, 10, 3));
}

TEST_CASE("integrals converge where pointwise values do not")
{
    const Weights u = balanced_weights();
    std::vector<double> dens, mass;
    for (int level = 5; level <= 8; ++level) {
        dens.push_back(spectral_sample(u, level, 0.7).density_approx);
        mass.push_back(integrated_density(u, level, 0.6, 0.8));
    }
    double dmin = *std::min_element(dens.begin(), dens.end()), dmax = *std::max_element(dens.begin(), dens.end());
    CHECK(dmax > 1.1 * dmin);
    for (std::size_t i = 1; i < mass.size(); ++i) CHECK(std::abs(mass[i] - mass[i - 1]) < 0.02 * mass[i]);
}

TEST_CASE("translation boundedness proxy")
{
    std::vector<double> peak;
    for (int level = 4; level <= 7; ++level) {
        auto m = unit_interval_masses(balanced_weights(), level, 10);
        REQUIRE(m.size() == 11);
        peak.push_back(*std::max_element(m.begin(), m.end()));
    }
    for (double v : peak) CHECK(v < 1.0);
    CHECK(peak.back() < 1.05 * peak.front());
}

TEST_CASE("autocorrelation consistency")
{
    auto r = autocorrelation_compare(balanced_weights(), ZLambda(1, 1), 8);
    CHECK(r.compared == 11);
    CHECK(r.max_residual < 5e-3);
    auto r6 = autocorrelation_compare(balanced_weights(), ZLambda(1, 1), 6);
    CHECK(r.max_residual < r6.max_residual);
    CHECK(autocorrelation_compare(Weights{cplx(0.0), cplx(0.0)}, ZLambda(1, 1), 4).max_residual == 0.0);

    auto t = base_system_solve();
    const QLambda dens = pf_data().density_exact;
    CHECK(t.at(ZLambda(0, 1))[0] == QLambda(3) * QLambda::lambda_pow(-3));
    cplx e = eta(t, Weights{cplx(1.0), cplx(0.0)}, ZLambda(0, 1));
    CHECK(std::abs(e - (dens * QLambda(3) * QLambda::lambda_pow(-3)).to_double()) < 1e-15);
}

TEST_CASE("pure point matrix")
{
    auto I = pure_point_matrix();
    CHECK(I(0, 0) == doctest::Approx(0.1886).epsilon(1e-3));
    CHECK(I.sum() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::abs(I.determinant()) < 1e-16);
    const auto& nu = pf_data().right_pf;
    CHECK(I.row(0).sum() == doctest::Approx(nu[0]).epsilon(1e-15));
    CHECK(I.row(1).sum() == doctest::Approx(nu[1]).epsilon(1e-15));
}

TEST_CASE("Hermitian form")
{
    auto patch = geometric_patch(4);
    std::mt19937_64 rng(9);
    std::normal_distribution<double> g;
    for (int it = 0; it < 20; ++it) {
        Weights u{cplx(g(rng), g(rng)), cplx(g(rng), g(rng))};
        CHECK(hermitian_form_residual(patch, u, std::abs(g(rng))) < 1e-10);
    }
}
