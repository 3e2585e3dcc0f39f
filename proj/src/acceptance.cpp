#include "nonpv/acceptance.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include "nonpv/correlation.hpp"
#include "nonpv/diffraction.hpp"
#include "nonpv/format.hpp"
#include "nonpv/lyapunov.hpp"

namespace nonpv {

namespace {

using clock_type = std::chrono::steady_clock;

double since(clock_type::time_point t0)
{
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

std::mt19937_64 rng_for(const AcceptanceOptions& opt, int id)
{
    std::seed_seq seq{opt.seed, static_cast<std::uint64_t>(id)};
    return std::mt19937_64(seq);
}

std::string g(double x, int digits = 6) { return fmt_short(x, digits); }

CriterionResult c1()
{
    CriterionResult r{1, "Base correlation table, exact", false, "", "", 0};
    auto t0 = clock_type::now();
    BaseSystemInfo info;
    auto t = base_system_solve(&info);
    double secs = since(t0);
    auto ref = reference_base_values();
    int equal = 0, total = 0;
    for (const auto& z : info.distances)
        for (int c = 0; c < 4; ++c) {
            ++total;
            if (t.at(z)[c] == ref.at(z)[c]) ++equal;
        }
    bool v00 = t.at(ZLambda(0, 0))[0] == QLambda::lambda_pow(-1);
    bool v11 = t.at(ZLambda(-1, -1))[3] == QLambda(3) * QLambda::lambda_pow(-4);
    r.pass = equal == 44 && total == 44 && v00 && v11 && secs < 1.0;
    r.measured = std::to_string(equal) + "/" + std::to_string(total) + " exact, nu00(0)=" + (v00 ? "l^-1" : "WRONG") +
                 ", nu11(-1-l)=" + (v11 ? "3l^-4" : "WRONG") + ", solve " + g(secs, 3) + " s";
    r.target = "44/44 exact in Q(lambda), < 1 s";
    return r;
}

CriterionResult c2()
{
    CriterionResult r{2, "Counting oracle vs exact and extended tables", false, "", "", 0};
    auto t0 = clock_type::now();
    auto base = base_system_solve();
    auto ext = extend_table(base, ZLambda(10, 0));
    auto e = count_correlations(geometric_patch(8), ZLambda(10, 0));
    double worst_base = 0.0, worst_ext = 0.0;
    std::size_t n_base = 0, n_ext = 0;
    for (const auto& [z, nu] : ext.entries) {
        auto got = e.nu(z);
        bool inner = compare_abs(z, ZLambda(1, 1)) <= 0;
        const NuVector& want = inner ? base.at(z) : nu;
        double d = 0.0;
        for (int c = 0; c < 4; ++c) d = std::max(d, std::abs(got[c] - want[c].to_double()));
        if (inner) {
            worst_base = std::max(worst_base, d);
            ++n_base;
        } else {
            worst_ext = std::max(worst_ext, d);
            ++n_ext;
        }
    }
    double secs = since(t0);
    r.pass = worst_base < 5e-3 && worst_ext < 5e-3 && secs < 60.0 && n_base == 11 && e.warnings.empty();
    r.measured = "max dev " + g(worst_base, 3) + " on " + std::to_string(n_base) + " distances |z|<=1+l, " +
                 g(worst_ext, 3) + " on " + std::to_string(n_ext) + " distances to 10, " + g(secs, 3) + " s";
    r.target = "< 5e-3 componentwise, < 60 s";
    return r;
}

CriterionResult c3()
{
    CriterionResult r{3, "Pure point part: single Bragg peak at 0", false, "", "", 0};
    const Weights ones{cplx(1.0), cplx(1.0)};
    const double target = std::pow((6.0 + kLambda) / 13.0, 2);
    double worst = 0.0;
    for (int level = 6; level <= 9; ++level) worst = std::max(worst, std::abs(bragg_intensity(ones, level, 0.0) - target));
    std::vector<double> ks(1000);
    for (int j = 0; j < 1000; ++j) ks[j] = 3.0 * j / 1000.0;
    auto a = bragg_scan(ones, ks, {6, 7, 8, 9});
    auto b = bragg_scan(balanced_weights(), ks, {6, 7, 8, 9});
    bool only_zero = a.peaks == 1 && a.entries[0].bragg;
    r.pass = worst <= 1e-3 && only_zero && b.peaks == 0;
    r.measured = "u=(1,1): " + std::to_string(a.peaks) + " peak(s)" + (only_zero ? " at k=0" : "") +
                 ", max |I0 - target| over levels 6-9 = " + g(worst, 3) + "; balanced: " + std::to_string(b.peaks) +
                 " peak(s) on 1000 k in [0,3)";
    r.target = "1 peak (k=0) with I0 = " + g(target, 6) + " +- 1e-3; 0 peaks for balanced weights";
    return r;
}

CriterionResult c4(const AcceptanceOptions& opt)
{
    CriterionResult r{4, "Algebra dimensions and U/C residuals", false, "", "", 0};
    int ida = ida_dimension(2);
    auto kr = kron_algebra_real_dimension({0.05, 0.11, 0.17}, 1e-8);
    auto rng = rng_for(opt, 4);
    std::uniform_real_distribution<double> d(-5.0, 5.0);
    double wu = 0.0, wc = 0.0;
    for (int i = 0; i < 1000; ++i) {
        double k = d(rng);
        wu = std::max(wu, u_realness_residual(k));
        wc = std::max(wc, commutator_C_residual(k));
    }
    r.pass = ida == 4 && kr.dimension == 16 && wu < 1e-12 && wc < 1e-12;
    r.measured = "IDA " + std::to_string(ida) + ", Kronecker " + std::to_string(kr.dimension) + ", Im(UAU^-1) " +
                 g(wu, 3) + ", [C,A] " + g(wc, 3);
    r.target = "4, 16, < 1e-12, < 1e-12 (1000 random k)";
    return r;
}

CriterionResult c5()
{
    CriterionResult r{5, "Positivity threshold", false, "", "", 0};
    auto t0 = clock_type::now();
    double k = positivity_threshold();
    double secs = since(t0);
    r.pass = k >= 0.03822 && k <= 0.03842 && secs < 5.0;
    r.measured = "k* = " + fmt17(k) + ", " + g(secs, 3) + " s";
    r.target = "[0.03822, 0.03842], < 5 s";
    return r;
}

CriterionResult c6()
{
    CriterionResult r{6, "Inward Lyapunov spectrum", true, "", "", 0};
    std::ostringstream m;
    for (double k : {0.005, 0.01, 0.02}) {
        double gen = inward_lyapunov(k, Vec2(1.0, 1.0), 300).slope;
        double con = inward_lyapunov_contracting(k, 300).slope;
        bool ok = std::abs(gen - 0.8344) <= 0.01 && std::abs(con + 0.153) <= 0.02 && std::abs(gen + con - 0.2651) <= 0.02;
        r.pass = r.pass && ok;
        m << "k=" << k << ": generic " << g(gen) << ", contracting " << g(con) << ", sum " << g(gen + con) << "; ";
    }
    r.measured = m.str();
    r.target = "generic 0.8344 +- 0.01, contracting -0.153 +- 0.02, sum 0.2651 +- 0.02 (n=300)";
    return r;
}

CriterionResult c7(const AcceptanceOptions& opt)
{
    CriterionResult r{7, "Determinant limits", false, "", "", 0};
    auto rng = rng_for(opt, 7);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    const double log3 = std::log(3.0);
    std::ostringstream m;
    int good = 0, taken = 0;
    double worst = 0.0;
    while (taken < 5) {
        double k = d(rng);
        double v;
        try {
            v = det_limit_inward(k, 60);
        } catch (const SingularStep&) {
            continue;
        }
        ++taken;
        double dev = std::abs(v - log3);
        worst = std::max(worst, dev);
        if (dev <= 1e-2) ++good;
        m << "k=" << g(k, 4) << ": " << g(v) << "; ";
    }
    double j = jensen_integral();
    r.pass = good == 5 && std::abs(j) <= 1e-4;
    m << "max |dev| " << g(worst, 3) << "; Jensen " << g(j, 3);
    r.measured = m.str();
    r.target = "log 3 = " + g(log3) + " +- 1e-2 at n=60 for 5 random k in (0,1); Jensen 0 +- 1e-4";
    return r;
}

CriterionResult c8()
{
    CriterionResult r{8, "Torus mean and positivity gap", false, "", "", 0};
    auto t0 = clock_type::now();
    auto tm = torus_mean_log_norm(4, 8, 1e-3);
    double secs = since(t0);
    double gap = 0.5 * std::log(kLambda) - tm.value;
    r.pass = tm.converged && tm.value >= 0.384 && tm.value <= 0.386 && gap >= 0.03 && secs < 300.0;
    r.measured = "mean " + g(tm.value, 7) + " (" + std::to_string(tm.history.back().first) + " panels/axis), gap " +
                 g(gap, 5) + ", " + g(secs, 3) + " s";
    r.target = "[0.384, 0.386], gap >= 0.03, < 300 s at tol 1e-3";
    return r;
}

CriterionResult c9(const AcceptanceOptions& opt)
{
    CriterionResult r{9, "Outward exponent positive at finite n", false, "", "", 0};
    auto rng = rng_for(opt, 9);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    int positive = 0, taken = 0;
    double lo = 1e9, hi = -1e9;
    while (taken < 20) {
        double k = d(rng);
        OutwardReport o;
        try {
            o = outward_lyapunov(k, 10000);
        } catch (const SingularStep&) {
            continue;
        }
        ++taken;
        if (o.chi1 > 0.0) ++positive;
        lo = std::min(lo, o.chi1);
        hi = std::max(hi, o.chi1);
    }
    r.pass = positive >= 18;
    r.measured = std::to_string(positive) + "/20 positive, chi1 in [" + g(lo, 4) + ", " + g(hi, 4) + "]";
    r.target = ">= 18/20 with chi1 > 0 at n=1e4";
    return r;
}

CriterionResult c10()
{
    CriterionResult r{10, "Distribution function, balanced weights", false, "", "", 0};
    auto t0 = clock_type::now();
    auto c = distribution_with_previous(balanced_weights(), 3.0, 1500, 8, 0.02);
    double secs = since(t0);
    double slope = c.current.Fs.back() / 3.0;
    r.pass = std::abs(slope - 0.832) <= 0.02 && c.non_decreasing && c.rel_diff_at_xmax < 0.02 && c.min_increment > 0.0 &&
             secs < 300.0;
    r.measured = "F(3)/3 = " + g(slope) + ", levels 7/8 rel diff " + g(c.rel_diff_at_xmax, 3) +
                 ", min increment " + g(c.min_increment, 3) + (c.non_decreasing ? ", non-decreasing" : ", DECREASES") +
                 ", " + g(secs, 3) + " s";
    r.target = "0.832 +- 0.02, < 2% level difference, strictly increasing on 1500 points, < 300 s";
    return r;
}

CriterionResult c11(const AcceptanceOptions& opt)
{
    CriterionResult r{11, "Number theory and P_n recursion", false, "", "", 0};
    auto rep = gcd_facts_check(40);
    auto rng = rng_for(opt, 11);
    std::uniform_real_distribution<double> d(0.0, 1.0);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        double k = d(rng);
        for (int n = 1; n <= 12; ++n) worst = std::max(worst, (bn_product(k, n) - bn_from_pn(k, n)).cwiseAbs().maxCoeff());
    }
    r.pass = rep.ok && worst < 1e-10;
    r.measured = std::string("gcd facts ") + (rep.ok ? "hold" : "FAIL: " + rep.message) + " to n=40, max |B^(n) - P_n form| " +
                 g(worst, 3);
    r.target = "exact gcd facts; < 1e-10 for n <= 12, 100 random k";
    return r;
}

}  // namespace

CriterionResult run_criterion(int id, const AcceptanceOptions& opt)
{
    auto t0 = clock_type::now();
    CriterionResult r;
    try {
        switch (id) {
        case 1: r = c1(); break;
        case 2: r = c2(); break;
        case 3: r = c3(); break;
        case 4: r = c4(opt); break;
        case 5: r = c5(); break;
        case 6: r = c6(); break;
        case 7: r = c7(opt); break;
        case 8: r = c8(); break;
        case 9: r = c9(opt); break;
        case 10: r = c10(); break;
        case 11: r = c11(opt); break;
        default: throw std::invalid_argument("unknown criterion " + std::to_string(id));
        }
    } catch (const std::invalid_argument&) {
        throw;
    } catch (const std::exception& e) {
        r.id = id;
        r.title = "criterion " + std::to_string(id);
        r.pass = false;
        r.measured = std::string("exception: ") + e.what();
    }
    r.seconds = since(t0);
    return r;
}

std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& opt)
{
    std::vector<CriterionResult> out;
    for (int id = 1; id <= kCriterionCount; ++id) {
        if (!opt.only.empty() && std::find(opt.only.begin(), opt.only.end(), id) == opt.only.end()) continue;
        out.push_back(run_criterion(id, opt));
        if (opt.on_result) opt.on_result(out.back());
    }
    return out;
}

std::string format_result(const CriterionResult& r)
{
    std::ostringstream os;
    os << (r.pass ? "[PASS] " : "[FAIL] ") << (r.id < 10 ? " " : "") << r.id << "  " << r.title << " | measured: " << r.measured
       << " | target: " << r.target << " | " << fmt_short(r.seconds, 3) << " s";
    return os.str();
}

}  // namespace nonpv
