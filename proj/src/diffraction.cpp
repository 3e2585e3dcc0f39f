#include "nonpv/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "nonpv/parallel.hpp"
#include "nonpv/simd/kernels.hpp"

namespace nonpv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx expi_turns(double r)
{
    r -= std::nearbyint(r);
    return {std::cos(kTwoPi * r), std::sin(kTwoPi * r)};
}

// 4-point Gauss-Legendre on [0, 1]
constexpr std::array<double, 4> kGLx{0.5 - 0.8611363115940526 / 2, 0.5 - 0.3399810435848563 / 2,
                                     0.5 + 0.3399810435848563 / 2, 0.5 + 0.8611363115940526 / 2};
constexpr std::array<double, 4> kGLw{0.3478548451374538 / 2, 0.6521451548625461 / 2, 0.6521451548625461 / 2,
                                     0.3478548451374538 / 2};

void check_level(int level)
{
    if (level < 0 || level > 14) throw std::invalid_argument("level must be in [0, 14]");
}

// masses of consecutive intervals [edges[i], edges[i+1]]
std::vector<double> interval_masses(const Weights& u, int level, const std::vector<double>& edges, std::size_t* nodes)
{
    check_level(level);
    const auto lp = lambda_powers(level);
    const double r = lp.back();
    const double scale = 1.0 / (2.0 * r);
    const std::size_t cells = edges.size() - 1;
    std::vector<double> mass(cells, 0.0);
    std::vector<std::size_t> count(cells, 0);
    const auto& kern = simd::active_kernels();
    parallel_for(cells, 1, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> ks, out;
        for (std::size_t c = lo; c < hi; ++c) {
            const double a = edges[c], b = edges[c + 1];
            const std::size_t np = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil((b - a) * 2.0 * r)));
            const double h = (b - a) / static_cast<double>(np);
            ks.resize(4 * np);
            out.resize(4 * np);
            for (std::size_t p = 0; p < np; ++p)
                for (int q = 0; q < 4; ++q) ks[4 * p + q] = a + (static_cast<double>(p) + kGLx[q]) * h;
            kern.spectral_density(ks.data(), ks.size(), lp.data(), 2 * level, u[0], u[1], scale, out.data());
            double s = 0.0;
            for (std::size_t p = 0; p < np; ++p) {
                double panel = 0.0;
                for (int q = 0; q < 4; ++q) panel += kGLw[q] * out[4 * p + q];
                s += panel * h;
            }
            mass[c] = s;
            count[c] = 4 * np;
        }
    });
    if (nodes) {
        *nodes = 0;
        for (auto n : count) *nodes += n;
    }
    return mass;
}

}  // namespace

Weights balanced_weights() { return {cplx(1.0 - kLambda), cplx(1.0)}; }

cplx exponential_sum(const WeightedPointSet& patch, double k)
{
    auto pos = patch.positions_double();
    const auto& w = patch.weights();
    return simd::active_kernels().exp_sum(pos.data(), patch.word().letters.data(), pos.size(), k, w[0], w[1]);
}

std::array<cplx, 2> exponential_sums_by_type(const WeightedPointSet& patch, double k)
{
    auto pos = patch.positions_double();
    const auto& kern = simd::active_kernels();
    const auto* t = patch.word().letters.data();
    return {kern.exp_sum(pos.data(), t, pos.size(), k, 1.0, 0.0), kern.exp_sum(pos.data(), t, pos.size(), k, 0.0, 1.0)};
}

double patch_radius(int level) { return lambda_powers(level).back(); }

std::vector<double> lambda_powers(int level)
{
    check_level(level);
    std::vector<double> lp(2 * level + 2);
    for (int m = 0; m < static_cast<int>(lp.size()); ++m)
        lp[m] = static_cast<double>(QLambda::lambda_pow(m).to_long_double());
    return lp;
}

cplx exponential_sum_recursive(const Weights& u, int level, double k)
{
    const auto lp = lambda_powers(level);
    const int steps = 2 * level;
    cplx s00 = 1.0, s01 = 0.0, s10 = 0.0, s11 = 1.0;
    for (int m = 0; m < steps; ++m) {
        double y = lp[m] * k, x = lp[m + 1] * k;
        y -= std::floor(y);
        x -= std::floor(x);
        cplx p = std::conj(expi_turns(x + y)) * (1.0 + 2.0 * std::cos(kTwoPi * y));
        cplx n00 = s00 + p * s10, n01 = s01 + p * s11;
        s10 = s00;
        s11 = s01;
        s00 = n00;
        s01 = n01;
    }
    return (u[0] * s00 + u[1] * s01) * (1.0 + expi_turns(lp[steps + 1] * k));
}

std::vector<double> spectral_density(const Weights& u, int level, const std::vector<double>& ks)
{
    const auto lp = lambda_powers(level);
    const double scale = 1.0 / (2.0 * lp.back());
    std::vector<double> out(ks.size());
    const auto& kern = simd::active_kernels();
    parallel_for(ks.size(), 256, [&](std::size_t lo, std::size_t hi) {
        kern.spectral_density(ks.data() + lo, hi - lo, lp.data(), 2 * level, u[0], u[1], scale, out.data() + lo);
    });
    return out;
}

SpectralSample spectral_sample(const Weights& u, int level, double k)
{
    return {k, spectral_density(u, level, {k})[0], patch_radius(level)};
}

double bragg_intensity(const Weights& u, int level, double k)
{
    return spectral_density(u, level, {k})[0] / (2.0 * patch_radius(level));
}

BraggReport bragg_scan(const Weights& u, const std::vector<double>& ks, const std::vector<int>& levels, double threshold)
{
    if (levels.empty()) throw std::invalid_argument("no levels");
    for (std::size_t i = 1; i < levels.size(); ++i)
        if (levels[i] <= levels[i - 1]) throw std::invalid_argument("levels must be increasing");
    BraggReport rep;
    rep.levels = levels;
    rep.threshold = threshold;
    rep.entries.resize(ks.size());
    for (std::size_t j = 0; j < ks.size(); ++j) rep.entries[j].k = ks[j];
    for (int level : levels) {
        auto d = spectral_density(u, level, ks);
        const double r2 = 2.0 * patch_radius(level);
        for (std::size_t j = 0; j < ks.size(); ++j) rep.entries[j].intensities.push_back(d[j] / r2);
    }
    for (auto& e : rep.entries) {
        double first = e.intensities.front(), last = e.intensities.back();
        e.decay_ratio = first > 0.0 ? last / first : 0.0;
        e.bragg = last > threshold && e.decay_ratio > 0.5;
        if (e.bragg) ++rep.peaks;
    }
    return rep;
}

DistributionCurve distribution_function(const Weights& u, double x_max, int grid, int level)
{
    if (!(x_max > 0.0)) throw std::invalid_argument("x_max must be positive");
    if (grid < 1) throw std::invalid_argument("grid must be >= 1");
    DistributionCurve c;
    c.u = u;
    c.level = level;
    c.rule = "uniform panels of width <= 1/(2r), 4-point Gauss-Legendre";
    c.xs.resize(grid + 1);
    for (int j = 0; j <= grid; ++j) c.xs[j] = x_max * j / grid;
    auto mass = interval_masses(u, level, c.xs, &c.nodes);
    c.Fs.resize(grid + 1);
    c.Fs[0] = 0.0;
    for (int j = 0; j < grid; ++j) c.Fs[j + 1] = c.Fs[j] + mass[j];
    return c;
}

DistributionComparison distribution_with_previous(const Weights& u, double x_max, int grid, int level, double tol)
{
    if (level < 1) throw std::invalid_argument("level must be >= 1");
    DistributionComparison r;
    r.current = distribution_function(u, x_max, grid, level);
    r.previous = distribution_function(u, x_max, grid, level - 1);
    const auto& F = r.current.Fs;
    const auto& G = r.previous.Fs;
    r.rel_diff_at_xmax = std::abs(F.back() - G.back()) / F.back();
    r.min_increment = F.back();
    int flagged = 0;
    for (std::size_t j = 1; j < F.size(); ++j) {
        double inc = F[j] - F[j - 1];
        r.min_increment = std::min(r.min_increment, inc);
        if (inc < 0.0) r.non_decreasing = false;
        if (std::abs(F[j] - G[j]) > tol * F[j]) ++flagged;
    }
    if (flagged > 0)
        r.warnings.push_back(std::to_string(flagged) + " grid points where levels " + std::to_string(level - 1) +
                             " and " + std::to_string(level) + " differ by more than " + std::to_string(tol) +
                             " relative");
    return r;
}

double integrated_density(const Weights& u, int level, double a, double b)
{
    if (!(b > a)) throw std::invalid_argument("need a < b");
    return interval_masses(u, level, {a, b}, nullptr)[0];
}

std::vector<double> unit_interval_masses(const Weights& u, int level, int m_max)
{
    std::vector<double> edges(m_max + 2);
    for (int m = 0; m <= m_max + 1; ++m) edges[m] = m;
    return interval_masses(u, level, edges, nullptr);
}

AutocorrelationResidual autocorrelation_compare(const Weights& u, const ZLambda& R, int level)
{
    CorrelationTable t = base_system_solve();
    if (compare_abs(R, t.radius) > 0) t = extend_table(t, R);
    auto e = count_correlations(geometric_patch(level), R);
    AutocorrelationResidual r;
    for (const auto& [z, nu] : t.entries) {
        (void)nu;
        if (compare_abs(z, R) > 0) continue;
        double d = std::abs(eta(t, u, z) - eta_counted(e, u, z));
        ++r.compared;
        if (d > r.max_residual || r.compared == 1) {
            r.max_residual = std::max(r.max_residual, d);
            r.argmax = z;
        }
    }
    return r;
}

Eigen::Matrix2d pure_point_matrix()
{
    const auto& nu = pf_data().right_pf;
    Eigen::Matrix2d m;
    m << nu[0] * nu[0], nu[0] * nu[1], nu[1] * nu[0], nu[1] * nu[1];
    return m;
}

double hermitian_form_residual(const WeightedPointSet& patch, const Weights& u, double k)
{
    auto s = exponential_sums_by_type(patch, k);
    const double r2 = 2.0 * patch.radius();
    cplx form = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) form += std::conj(u[i]) * (std::conj(s[i]) * s[j] / r2) * u[j];
    double direct = std::norm(u[0] * s[0] + u[1] * s[1]) / r2;
    return std::abs(form - direct) / std::max(1.0, direct);
}

}  // namespace nonpv
