#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <chrono>
#include <random>
#include <set>
#include <sstream>

#include "nonpv/correlation.hpp"

using namespace nonpv;

namespace {

QLambda L(int n) { return QLambda::lambda_pow(n); }

double dens() { return pf_data().density; }

// the four identities written out term by term
std::array<QLambda, 4> explicit_rhs(const CorrelationTable& t, const ZLambda& z)
{
    const QLambda inv = L(-1);
    auto nu = [&](const QLambda& arg, int c) -> QLambda {
        auto zz = arg.to_zlambda();
        if (!zz) return QLambda(0);
        return t.at(*zz)[c];
    };
    const QLambda zq(z), lam = QLambda::lambda();
    std::array<QLambda, 4> r;
    QLambda a = zq * inv;
    r[0] = inv * (nu(a, 0) + nu(a, 1) + nu(a, 2) + nu(a, 3));
    r[1] = QLambda(0);
    r[2] = QLambda(0);
    for (int s = 0; s < 3; ++s) {
        QLambda m = (zq - lam - QLambda(s)) * inv;
        QLambda p = (zq + lam + QLambda(s)) * inv;
        r[1] += inv * (nu(m, 0) + nu(m, 2));
        r[2] += inv * (nu(p, 0) + nu(p, 1));
    }
    auto n00 = [&](int shift) { return nu((zq + QLambda(shift)) * inv, 0); };
    r[3] = inv * (QLambda(3) * n00(0) + QLambda(2) * n00(1) + QLambda(2) * n00(-1) + n00(2) + n00(-2));
    return r;
}

}  // namespace

TEST_CASE("displacement sets")
{
    auto T = displacement_sets();
    CHECK(T[0][0] == std::vector<ZLambda>{ZLambda(0, 0)});
    CHECK(T[0][1] == std::vector<ZLambda>{ZLambda(0, 0)});
    CHECK(T[1][0] == std::vector<ZLambda>{ZLambda(0, 1), ZLambda(1, 1), ZLambda(2, 1)});
    CHECK(T[1][1].empty());
}

TEST_CASE("base system structure")
{
    auto dist = enumerate_distances(ZLambda(1, 1));
    CHECK(dist.size() == 11);
    CHECK(dist.front() == ZLambda(-1, -1));
    CHECK(dist.back() == ZLambda(1, 1));

    auto plain = base_system_analyse(SymmetryRows::none);
    CHECK(plain.unknowns == 44);
    CHECK(plain.equations == 44);
    CHECK(plain.null_dimension == 1);
    CHECK(base_system_analyse(SymmetryRows::symmetric).null_dimension == 1);
    CHECK(base_system_analyse(SymmetryRows::antisymmetric).null_dimension == 0);
}

TEST_CASE("base solution reproduces the closed-form values exactly")
{
    auto t0 = std::chrono::steady_clock::now();
    BaseSystemInfo info;
    auto t = base_system_solve(&info);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    CHECK(secs < 1.0);

    auto ref = reference_base_values();
    int compared = 0;
    for (const auto& z : info.distances) {
        NuVector got = t.at(z);
        const NuVector& want = ref.at(z);
        for (int c = 0; c < 4; ++c) {
            CHECK_MESSAGE(got[c] == want[c], "z=" << z << " c=" << c << " got " << got[c] << " want " << want[c]);
            ++compared;
        }
    }
    CHECK(compared == 44);

    CHECK(t.at(ZLambda(0, 0))[0] == L(-1));
    CHECK(t.at(ZLambda(0, 0))[3] == QLambda(3) * L(-2));
    CHECK(t.at(ZLambda(0, -1))[1] == QLambda(0));
    CHECK(t.at(ZLambda(0, -1))[2] == L(-2));
    CHECK(t.at(ZLambda(-1, -1))[3] == QLambda(3) * L(-4));
    CHECK(t.normalisation() == QLambda(1));
    CHECK(t.symmetric());
    CHECK(t.nonnegative());

    auto with_sym = base_system_solve(nullptr, SymmetryRows::symmetric);
    CHECK(with_sym.entries == t.entries);
    CHECK_THROWS_AS(base_system_solve(nullptr, SymmetryRows::antisymmetric), SolutionDimensionError);
}

TEST_CASE("identities derived from the rule match the written-out form")
{
    auto t = extend_table(base_system_solve(), ZLambda(10, 0));
    for (const auto& [z, nu] : t.entries) {
        if (compare_abs(z, ZLambda(8, 0)) > 0) continue;
        auto rhs = explicit_rhs(t, z);
        for (int c = 0; c < 4; ++c) REQUIRE(rhs[c] == nu[c]);
    }
}

TEST_CASE("extension")
{
    auto base = base_system_solve();
    auto t = extend_table(base, ZLambda(10, 0));
    CHECK(t.radius == ZLambda(10, 0));
    CHECK(t.symmetric());
    CHECK(t.nonnegative());
    CHECK(t.normalisation() == QLambda(1));
    CHECK(renormalisation_violations(t) == 0);

    NuVector two = base.at(ZLambda(2, 0));
    CHECK(t.at(ZLambda(0, 2))[0] == L(-1) * (two[0] + two[1] + two[2] + two[3]));
    CHECK(t.at(ZLambda(-1, 1)) == NuVector{QLambda(0), QLambda(0), QLambda(0), QLambda(0)});
    CHECK_THROWS_AS((void)t.at(ZLambda(11, 0)), std::out_of_range);
    CHECK_THROWS_AS(extend_table(t, ZLambda(5, 0)), std::invalid_argument);

    // the base part is untouched and a two-step extension agrees with a one-step one
    for (const auto& [z, nu] : base.entries) CHECK(t.at(z) == nu);
    auto t2 = extend_table(extend_table(base, ZLambda(5, 0)), ZLambda(10, 0));
    CHECK(t2.entries == t.entries);
}

TEST_CASE("distance enumeration is stable in patch size")
{
    auto d = enumerate_distances(ZLambda(10, 0));
    std::set<ZLambda> from_big;
    auto patch = geometric_patch(6);
    const auto& pts = patch.lattice();
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i; j < pts.size(); ++j) {
            ZLambda z(pts[j].a - pts[i].a, pts[j].b - pts[i].b);
            if (z > ZLambda(10, 0)) break;
            from_big.insert(z);
            from_big.insert(-z);
        }
    CHECK(std::set<ZLambda>(d.begin(), d.end()) == from_big);
}

TEST_CASE("counting oracle")
{
    auto patch7 = geometric_patch(7);
    auto e = count_correlations(patch7, ZLambda(1, 1));
    CHECK(e.warnings.empty());
    CHECK(std::abs(e.nu(ZLambda(0, 0))[0] - 0.4343) < 2e-3);
    CHECK(std::abs(e.nu(ZLambda(0, 1))[0] - 0.2457) < 3e-3);
    for (const auto& [z, c] : e.counts) {
        (void)c;
        REQUIRE(std::abs(z.to_double() - 0.5) > 1e-6);
    }

    auto base = base_system_solve();
    auto e8 = count_correlations(geometric_patch(8), ZLambda(1, 1));
    for (const auto& z : enumerate_distances(ZLambda(1, 1))) {
        auto got = e8.nu(z);
        auto want = base.at(z);
        for (int c = 0; c < 4; ++c) CHECK(std::abs(got[c] - want[c].to_double()) < 5e-3);
    }
    for (const auto& [z, c] : e8.counts) {
        (void)c;
        CHECK(e8.nu(z) == [&] {
            auto m = e8.nu(-z);
            return std::array<double, 4>{m[0], m[2], m[1], m[3]};
        }());
    }

    auto small = count_correlations(geometric_patch(2), ZLambda(10, 0));
    CHECK_FALSE(small.warnings.empty());
}

TEST_CASE("eta")
{
    auto t = base_system_solve();
    const double lam = pf_data().lambda;
    Weights balanced{1.0 - lam, 1.0};
    CHECK(std::abs(eta(t, balanced, ZLambda(0, 0)).real() - (6 * lam - 3) / 13) < 1e-12);
    CHECK(std::abs(eta(t, balanced, ZLambda(0, 0)).real() - 0.832) < 1e-3);
    CHECK(std::abs(eta(t, Weights{0.0, 0.0}, ZLambda(0, 1))) == 0.0);
    CHECK(std::abs(eta(t, Weights{1.0, 1.0}, ZLambda(0, 0)) - dens()) < 1e-12);
    CHECK_THROWS_AS(eta(t, balanced, ZLambda(5, 0)), std::out_of_range);

    auto big = extend_table(t, ZLambda(10, 0));
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g;
    for (int it = 0; it < 20; ++it) {
        Weights u{std::complex<double>(g(rng), g(rng)), std::complex<double>(g(rng), g(rng))};
        auto a = autocorrelation(big, u);
        for (const auto& [z, v] : a.values) REQUIRE(std::abs(v - std::conj(a.values.at(-z))) < 1e-14);
        CHECK(std::abs(a.values.at(ZLambda(0, 0)).imag()) < 1e-15);
        CHECK(a.values.at(ZLambda(0, 0)).real() >= 0.0);
    }
}

TEST_CASE("eta is positive definite on finite point configurations")
{
    auto t = extend_table(base_system_solve(), ZLambda(10, 0));
    auto patch = geometric_patch(4);
    const auto& pts = patch.lattice();
    std::mt19937_64 rng(2024);
    std::normal_distribution<double> g;
    std::uniform_int_distribution<std::size_t> start(0, pts.size() - 20);
    double worst = 0.0;
    for (int it = 0; it < 100; ++it) {
        Weights u{std::complex<double>(g(rng), g(rng)), std::complex<double>(g(rng), g(rng))};
        std::size_t s = start(rng);
        std::vector<std::size_t> idx;
        for (std::size_t k = s; k < pts.size() && (pts[k].exact() - pts[s].exact()) <= ZLambda(10, 0); ++k) idx.push_back(k);
        std::vector<std::complex<double>> c(idx.size());
        for (auto& x : c) x = {g(rng), g(rng)};
        std::complex<double> q = 0.0;
        for (std::size_t a = 0; a < idx.size(); ++a)
            for (std::size_t b = 0; b < idx.size(); ++b)
                q += std::conj(c[a]) * c[b] * eta(t, u, pts[idx[b]].exact() - pts[idx[a]].exact());
        worst = std::min(worst, q.real());
        REQUIRE(std::abs(q.imag()) < 1e-9);
    }
    CHECK(worst >= -1e-9);
}

TEST_CASE("csv export and parsing")
{
    std::ostringstream os;
    write_table_csv(os, base_system_solve());
    std::string s = os.str();
    CHECK(s.rfind("z_a,z_b,z_float,nu00_p,nu00_q,nu00_float", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 12);

    CHECK(parse_zlambda("10") == ZLambda(10, 0));
    CHECK(parse_zlambda("1+l") == ZLambda(1, 1));
    CHECK(parse_zlambda("-3-2*lambda") == ZLambda(-3, -2));
    CHECK(parse_zlambda("4,-1") == ZLambda(4, -1));
    CHECK(parse_zlambda("l") == ZLambda(0, 1));
    CHECK_THROWS(parse_zlambda("x"));
}
