#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "nonpv/cocycle.hpp"
#include "nonpv/lyapunov.hpp"
#include "nonpv/simd/kernels.hpp"

using namespace nonpv;

namespace {

const double kLog3 = std::log(3.0);

std::vector<double> random_ks(int n, std::uint64_t seed, double lo = 0.0, double hi = 1.0)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> d(lo, hi);
    std::vector<double> v(n);
    for (auto& k : v) k = d(rng);
    return v;
}

Mat2 M2()
{
    Mat2 m;
    m << 1.0, 1.0, 3.0, 0.0;
    return m;
}

}  // namespace

TEST_CASE("p(k)")
{
    CHECK(std::abs(eval_p(0.0) - cplx(3.0)) < 1e-15);
    CHECK(std::abs(eval_p(1.0 / 3.0)) < 1e-15);
    auto tp = TrigPoly::p();
    for (double k : random_ks(10000, 1, -5.0, 5.0)) {
        cplx p = eval_p(k);
        REQUIRE(std::abs(p) <= 3.0 + 1e-14);
        REQUIRE(std::abs(p - tp(k)) < 1e-12);
        REQUIRE(std::abs(std::norm(p) - std::pow(1.0 + 2.0 * std::cos(2.0 * M_PI * k), 2)) < 1e-12);
        REQUIRE(std::abs(z_of_k(k) - (3.0 - p)) < 1e-15);
    }
}

TEST_CASE("B and A")
{
    CHECK((eval_B(0.0) - M2()).norm() < 1e-15);
    for (double k : random_ks(10000, 2, -3.0, 3.0)) REQUIRE(std::abs(eval_B(k).determinant() + eval_p(k)) < 1e-12);

    Mat4 a0 = eval_A(0.0);
    CHECK((a0 - kron(M2(), M2())).norm() < 1e-14);
    RVec4 w = w_pf();
    CHECK((a0.real() * w - kLambda * kLambda * w).norm() < 1e-12);
    CHECK(a0.imag().norm() < 1e-14);

    // I_ij(0) = nu_i nu_j is the lambda^2 eigenvector
    const auto& nu = pf_data().right_pf;
    Eigen::Vector4d I(nu[0] * nu[0], nu[0] * nu[1], nu[1] * nu[0], nu[1] * nu[1]);
    CHECK((a0.real() * I - kLambda * kLambda * I).norm() < 1e-12);
    CHECK(std::abs(I.sum() - 1.0) < 1e-15);
}

TEST_CASE("digit matrices")
{
    Eigen::Matrix2i d0 = digit_matrix_0(), dl = digit_matrix_lambda();
    Eigen::Matrix2i m;
    m << 1, 1, 3, 0;
    CHECK(d0 + 3 * dl == m);
    Eigen::Matrix2i e00, e1;
    e00 << 1, 0, 0, 0;
    e1 << 0, 0, 1, 1;
    CHECK(d0 * dl == e00);
    CHECK(dl * d0 == e1);
}

TEST_CASE("quasiperiodic lift")
{
    for (double k : random_ks(1000, 3, -4.0, 4.0)) {
        long double lk = kLambdaL * k;
        double x = static_cast<double>(lk - std::floor(lk));
        double y = k - std::floor(k);
        REQUIRE((eval_B_lift(x, y) - eval_B(k)).norm() < 1e-12);
    }
    // iterated lift along the orbit equals the direct product
    const auto& kern = simd::scalar_kernels();
    for (double k : random_ks(100, 4)) {
        long double lk = kLambdaL * k;
        double x = static_cast<double>(lk - std::floor(lk)), y = k;
        for (int n = 1; n <= 8; ++n) {
            double f;
            kern.torus_frob2(&x, &y, 1, n, &f);
            double g = bn_product(k, n).squaredNorm();
            REQUIRE(std::abs(f - g) < 1e-9 * g);
        }
    }
    for (int i = 0; i <= 400; ++i)
        for (int j = 0; j <= 400; ++j) {
            double f = eval_B_lift(i / 400.0, j / 400.0).squaredNorm();
            REQUIRE(f >= 2.0 - 1e-12);
            REQUIRE(f <= 11.0 + 1e-12);
        }
}

TEST_CASE("inflation displacement algebra")
{
    CHECK(ida_dimension(0) == 1);
    CHECK(ida_dimension(1) == 3);
    CHECK(ida_dimension(2) == 4);
    CHECK(ida_dimension(5) == 4);
    CHECK(ida_dimension_numeric({eval_B(0.1), eval_B(0.27)}, 2) == 4);
    CHECK(ida_dimension_numeric({eval_B(0.1)}, 4) == 2);
    CHECK(ida_dimension_numeric({eval_B(0.0), eval_B(0.5)}, 4) == 4);
}

TEST_CASE("Kronecker algebra")
{
    auto rep = kron_algebra_real_dimension({0.05, 0.11, 0.17});
    CHECK(rep.dimension == 16);
    CHECK(kron_algebra_real_dimension({0.05, 0.31}).dimension == 16);
    CHECK_THROWS(kron_algebra_real_dimension({0.05}));

    double worst_c = 0.0, worst_u = 0.0, worst_p = 0.0, worst_closed = 0.0;
    for (double k : random_ks(1000, 5, -2.0, 2.0)) {
        worst_c = std::max(worst_c, commutator_C_residual(k));
        worst_u = std::max(worst_u, u_realness_residual(k));
        worst_p = std::max(worst_p, projector_residual(k));
        worst_closed = std::max(worst_closed, (eval_AU(k) - eval_AU_closed(k)).cwiseAbs().maxCoeff());
    }
    CHECK(worst_c < 1e-12);
    CHECK(worst_u < 1e-12);
    CHECK(worst_p < 1e-12);
    CHECK(worst_closed < 1e-12);

    RMat8 c = C_real_map();
    CHECK((c * c - RMat8::Identity()).norm() == 0.0);
    CHECK((eval_AU(0.0) - kron(M2(), M2()).real()).norm() < 1e-14);
}

TEST_CASE("positivity threshold")
{
    auto t0 = std::chrono::steady_clock::now();
    double k = positivity_threshold();
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(std::abs(k - 0.03832) <= 1e-4);
    CHECK(secs < 5.0);
    for (double kk : {0.001, 0.01, 0.03}) CHECK(AU_pair(kk).minCoeff() > 0.0);
    CHECK(AU_pair(0.0).minCoeff() > 0.0);
    CHECK((AU_pair(0.0) - (kron(M2(), M2()) * kron(M2(), M2())).real()).norm() < 1e-12);
    CHECK(AU_pair(k + 1e-6).minCoeff() < 0.0);
    CHECK_THROWS(positivity_threshold(1e-4, 0.02));
}

TEST_CASE("blow-up along the inward orbit")
{
    const double target = 4.0 * std::log(kLambda);
    auto exact = blowup_iteration(0.0, w_pf(), 10);
    for (std::size_t i = 1; i < exact.log_norms.size(); ++i)
        REQUIRE(std::abs(exact.log_norms[i] - exact.log_norms[i - 1] - target) < 1e-12);
    CHECK(exact.final_angle < 1e-12);

    auto tr = blowup_iteration(0.02, RVec4(1, 0, 0, 0), 30);
    CHECK(std::abs(tr.fitted_slope - target) < 0.02 * target);
    CHECK(tr.final_angle < 1e-8);
    for (const auto& d : tr.directions) REQUIRE(d.minCoeff() >= 0.0);
    CHECK_THROWS(blowup_iteration(0.02, RVec4(1, -1, 0, 0), 3));

    auto cor = blowup_corollary(0.02, RVec4(1, 0, 0, 0), 40);
    const RVec4& last = cor.scaled.back();
    CHECK(last.norm() > 0.0);
    CHECK((last - cor.scaled[cor.scaled.size() - 2]).norm() < 1e-8 * last.norm());
    CHECK(cor.final_angle < 1e-8);
}

TEST_CASE("P_n recursion")
{
    for (double k : random_ks(100, 6)) {
        auto P = pn_sequence(k, 12);
        REQUIRE(P[0] == cplx(0.0));
        REQUIRE(P[1] == cplx(1.0));
        REQUIRE(std::abs(P[2] - 1.0) < 1e-15);
        REQUIRE(std::abs(P[3] - (1.0 + eval_p(static_cast<double>(lambda_pow_times(1, k))))) < 1e-12);
        for (int n = 2; n <= 12; ++n) {
            Mat2 d = bn_product(k, n) - bn_from_pn(k, n);
            REQUIRE(d.cwiseAbs().maxCoeff() < 1e-10);
        }
        // P_{n+1}(k / lambda) = P_n(k) + p(k) P_{n-1}(lambda k)
        auto Q = pn_sequence_scaled(k, -1, 12);
        auto R = pn_sequence_scaled(k, 1, 12);
        for (int n = 1; n < 12; ++n) REQUIRE(std::abs(Q[n + 2] - (P[n + 1] + eval_p(k) * R[n])) < 1e-10);
    }
}

TEST_CASE("Frobenius floor")
{
    auto f1 = frobenius_floor(1);
    CHECK(std::abs(f1.value - 2.0) < 1e-12);
    CHECK(std::abs(eval_p_lift(f1.x, f1.y)) < 1e-12);
    CHECK(std::abs(frobenius_floor(2).value - 1.0) < 1e-12);
    auto f4 = frobenius_floor(4);
    CHECK(f4.value > 0.0);
    CHECK(f4.value < 1.0);
    CHECK(f4.history.size() >= 2);
}

TEST_CASE("determinant limits")
{
    CHECK(det_limit_inward(0.0, 17) == doctest::Approx(kLog3).epsilon(1e-15));
    try {
        (void)det_limit_inward(kLambda / 3.0, 10);
        FAIL("expected SingularStep");
    } catch (const SingularStep& e) {
        CHECK(e.step == 1);
    }
    // the deficit sum_m (log 3 - log|p(k/lambda^m)|) is finite, so the error is O(1/n)
    double d60 = det_limit_inward(0.7, 60);
    double d6000 = det_limit_inward(0.7, 6000);
    double deficit = 60.0 * (kLog3 - d60);
    CHECK(deficit > 2.0);
    CHECK(6000.0 * (kLog3 - d6000) == doctest::Approx(deficit).epsilon(1e-9));
    CHECK(std::abs(d6000 - kLog3) < 1e-3);
    for (double k : random_ks(5, 7, 0.0, 0.03)) CHECK(std::abs(det_limit_inward(k, 60) - kLog3) < 1e-2);

    CHECK(std::abs(det_limit_outward(0.37, 100000)) < 0.05);
    CHECK_THROWS_AS(det_limit_outward(1.0 / 3.0, 10), SingularStep);
    CHECK(std::abs(jensen_integral()) < 1e-10);
}
