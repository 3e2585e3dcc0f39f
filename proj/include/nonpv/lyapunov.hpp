// Inward and outward cocycle iterations, Lyapunov estimators, torus means.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "nonpv/cocycle.hpp"

namespace nonpv {

struct LyapunovTrace {
    double k = 0.0;
    std::vector<double> log_norms;  // log_norms[m] = log |v_m|, m = 0..n
    double slope = 0.0;             // least squares over the second half
    double residual_band = 0.0;     // max deviation from the fit on that half
};

/// Least-squares slope over [from, end) with the max deviation from the line.
std::pair<double, double> fit_slope(const std::vector<double>& y, std::size_t from);

/// v_m = (1/sqrt(lambda)) B(k / lambda^m) v_{m-1}, double precision.
LyapunovTrace inward_lyapunov(double k, const Vec2& v0, int n);

/// Raised when the accumulated product is too ill-conditioned for double precision.
class IllConditioned : public std::runtime_error {
public:
    IllConditioned(const std::string& what, double cond) : std::runtime_error(what), condition(cond) {}
    double condition;
};

struct ContractingDirection {
    Vec2 direction;           // unit, phase-normalised
    double condition = 0.0;   // of the scaled accumulated product
    double pullback_angle = 0.0;  // angle to the result at n - 1
};

/// Start vector whose inward image after n steps is parallel to the contracting
/// eigenvector (1, -lambda) of M. Computed by backward inverse iteration.
ContractingDirection contracting_direction(double k, int n);

/// Same construction with 200-digit MPFR arithmetic; returns the direction rounded to double.
Vec2 contracting_direction_hp(double k, int n);

/// Inward iteration started on the contracting direction, run in MPFR.
LyapunovTrace inward_lyapunov_contracting(double k, int n);

/// Angle between complex lines.
double line_angle(const Vec2& a, const Vec2& b);

struct OutwardReport {
    double k = 0.0;
    long n = 0;
    double chi1 = 0.0;        // log sqrt(lambda) - (1/n) log |B(k)...B(lambda^{n-1} k)|
    double chi2 = 0.0;        // log sqrt(lambda) + (1/n) log |B^{-1}(lambda^{n-1} k)...B^{-1}(k)|
    double chi1_tilde = 0.0;
    double chi2_tilde = 0.0;
    double det_term = 0.0;    // -(1/n) sum log |p(lambda^l k)|
    double consistency = 0.0; // chi1 + chi2 - log(lambda) - det_term
    std::vector<double> log_norms;  // log |forward product| after each step
};

OutwardReport outward_lyapunov(double k, long n, bool keep_trace = false);

struct TorusMeanReport {
    double value = 0.0;
    bool converged = false;
    std::vector<std::pair<int, double>> history;  // (panels per axis, value)
};

/// (1/2n) int int log |B~^(n)(x, y)|_F^2 dx dy; Gauss-Legendre panels doubled until two levels agree to tol.
TorusMeanReport torus_mean_log_norm(int n, int quad_order = 8, double tol = 1e-4, int max_panels = 256);

struct FloorReport {
    double value = 0.0;
    double x = 0.0, y = 0.0;
    std::vector<std::pair<int, double>> history;  // (grid, min)
};

/// Minimum of |B~^(n)|_F^2 on grids grid, 2 grid, ... until the minimum is stable to 1e-9.
FloorReport frobenius_floor(int n, int grid = 96, int max_grid = 1536);

}  // namespace nonpv
