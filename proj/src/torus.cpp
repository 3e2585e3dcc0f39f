#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "nonpv/lyapunov.hpp"
#include "nonpv/parallel.hpp"
#include "nonpv/simd/kernels.hpp"

namespace nonpv {

namespace {

// Golub-Welsch nodes and weights on [0, 1]
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int q)
{
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(q, q);
    for (int i = 1; i < q; ++i) {
        double b = i / std::sqrt(4.0 * i * i - 1.0);
        J(i, i - 1) = J(i - 1, i) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    std::vector<double> x(q), w(q);
    for (int i = 0; i < q; ++i) {
        x[i] = 0.5 * (es.eigenvalues()(i) + 1.0);
        double v = es.eigenvectors()(0, i);
        w[i] = v * v;  // weights on [-1, 1] are 2 v^2, halved for [0, 1]
    }
    return {x, w};
}

double tensor_mean(int n, int panels, const std::vector<double>& gx, const std::vector<double>& gw)
{
    const int q = static_cast<int>(gx.size());
    const int m = panels * q;
    std::vector<double> nodes(m), weights(m);
    for (int p = 0; p < panels; ++p)
        for (int i = 0; i < q; ++i) {
            nodes[p * q + i] = (p + gx[i]) / panels;
            weights[p * q + i] = gw[i] / panels;
        }
    std::vector<double> rows(m);
    const auto& kern = simd::active_kernels();
    parallel_for(m, 8, [&](std::size_t lo, std::size_t hi) {
        std::vector<double> ys(m), out(m);
        for (std::size_t r = lo; r < hi; ++r) {
            std::fill(ys.begin(), ys.end(), nodes[r]);
            kern.torus_frob2(nodes.data(), ys.data(), m, n, out.data());
            double s = 0.0;
            for (int c = 0; c < m; ++c) s += weights[c] * std::log(out[c]);
            rows[r] = s * weights[r];
        }
    });
    double s = 0.0;
    for (double v : rows) s += v;
    return s / (2.0 * n);
}

}  // namespace

TorusMeanReport torus_mean_log_norm(int n, int quad_order, double tol, int max_panels)
{
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (quad_order < 1 || quad_order > 64) throw std::invalid_argument("quad_order must be in [1, 64]");
    auto [gx, gw] = gauss_legendre(quad_order);
    TorusMeanReport rep;
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int panels = 2; panels <= max_panels; panels *= 2) {
        double v = tensor_mean(n, panels, gx, gw);
        rep.history.emplace_back(panels, v);
        rep.value = v;
        if (std::abs(v - prev) < tol) {
            rep.converged = true;
            break;
        }
        prev = v;
    }
    return rep;
}

FloorReport frobenius_floor(int n, int grid, int max_grid)
{
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (grid < 1) throw std::invalid_argument("grid must be >= 1");
    FloorReport rep;
    const auto& kern = simd::active_kernels();
    double prev = std::numeric_limits<double>::quiet_NaN();
    for (int g = grid; g <= max_grid; g *= 2) {
        std::vector<double> xs(g);
        for (int i = 0; i < g; ++i) xs[i] = static_cast<double>(i) / g;
        std::vector<double> best(g, std::numeric_limits<double>::infinity());
        std::vector<int> arg(g, 0);
        parallel_for(g, 16, [&](std::size_t lo, std::size_t hi) {
            std::vector<double> ys(g), out(g);
            for (std::size_t r = lo; r < hi; ++r) {
                std::fill(ys.begin(), ys.end(), xs[r]);
                kern.torus_frob2(xs.data(), ys.data(), g, n, out.data());
                for (int c = 0; c < g; ++c)
                    if (out[c] < best[r]) {
                        best[r] = out[c];
                        arg[r] = c;
                    }
            }
        });
        double mn = std::numeric_limits<double>::infinity();
        for (int r = 0; r < g; ++r)
            if (best[r] < mn) {
                mn = best[r];
                rep.x = xs[arg[r]];
                rep.y = xs[r];
            }
        rep.history.emplace_back(g, mn);
        rep.value = mn;
        if (std::abs(mn - prev) <= 1e-9 * std::max(1.0, std::abs(mn))) break;
        prev = mn;
    }
    return rep;
}

}  // namespace nonpv
