// Exponential sums, Bragg detection, and the distribution function of the diffraction measure.
#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "nonpv/correlation.hpp"
#include "nonpv/inflation.hpp"

namespace nonpv {

struct SpectralSample {
    double k = 0.0;
    double density_approx = 0.0;  // |S(k)|^2 / (2r)
    double patch_radius = 0.0;
};

/// S(k) = sum u(x) e^{-2 pi i k x} over the patch, compensated.
cplx exponential_sum(const WeightedPointSet& patch, double k);
/// Per-type sums S_0(k), S_1(k).
std::array<cplx, 2> exponential_sums_by_type(const WeightedPointSet& patch, double k);

/// Half length lambda^(2 level + 1) of the level patch.
double patch_radius(int level);
/// lambda^0 .. lambda^(2 level + 1), each correctly rounded.
std::vector<double> lambda_powers(int level);

/// S(k) for the level patch through S_{m+1} = B(lambda^m k)^* S_m.
cplx exponential_sum_recursive(const Weights& u, int level, double k);

/// |S(k)|^2 / (2r) for each k, on the active kernel, parallel over k.
std::vector<double> spectral_density(const Weights& u, int level, const std::vector<double>& ks);
SpectralSample spectral_sample(const Weights& u, int level, double k);

/// |S(k) / (2r)|^2.
double bragg_intensity(const Weights& u, int level, double k);

struct BraggEntry {
    double k = 0.0;
    std::vector<double> intensities;  // one per level
    double decay_ratio = 0.0;         // last / first
    bool bragg = false;
};

struct BraggReport {
    std::vector<int> levels;
    double threshold = 0.0;
    std::vector<BraggEntry> entries;
    int peaks = 0;
};

/// Bragg when the intensity at the top level exceeds threshold and has not
/// dropped below half its value at the first level.
BraggReport bragg_scan(const Weights& u, const std::vector<double>& ks, const std::vector<int>& levels,
                       double threshold = 1e-4);

struct DistributionCurve {
    std::vector<double> xs;
    std::vector<double> Fs;
    Weights u{};
    int level = 0;
    std::string rule;
    std::size_t nodes = 0;
};

/// F(x) = int_0^x |S(k)|^2/(2r) dk on x_j = j x_max / grid, j = 0..grid.
DistributionCurve distribution_function(const Weights& u, double x_max, int grid, int level);

struct DistributionComparison {
    DistributionCurve current, previous;
    double rel_diff_at_xmax = 0.0;
    double min_increment = 0.0;
    bool non_decreasing = true;
    std::vector<std::string> warnings;
};

/// Curves at level and level - 1 with the level-convergence checks.
DistributionComparison distribution_with_previous(const Weights& u, double x_max, int grid, int level,
                                                  double tol = 0.02);

/// int_a^b |S(k)|^2/(2r) dk with the same panel rule.
double integrated_density(const Weights& u, int level, double a, double b);

/// Masses of [m, m+1], m = 0..m_max.
std::vector<double> unit_interval_masses(const Weights& u, int level, int m_max = 10);

struct AutocorrelationResidual {
    double max_residual = 0.0;
    ZLambda argmax;
    std::size_t compared = 0;
};

/// max over tabulated |z| <= R of |eta exact - eta counted on the level patch|.
AutocorrelationResidual autocorrelation_compare(const Weights& u, const ZLambda& R, int level);

/// (nu_i nu_j).
Eigen::Matrix2d pure_point_matrix();

/// |conj(u) H u - |S|^2/(2r)| with H_ij = conj(S_i) S_j / (2r).
double hermitian_form_residual(const WeightedPointSet& patch, const Weights& u, double k);

Weights balanced_weights();

}  // namespace nonpv
