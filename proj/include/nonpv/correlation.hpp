// Pair correlation functions nu_ij(z) of the two-component point set.
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nonpv/algebraic.hpp"
#include "nonpv/inflation.hpp"

namespace nonpv {

/// (nu00, nu01, nu10, nu11); component ij sits at index 2i + j.
using NuVector = std::array<QLambda, 4>;

class MissingArgument : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

class SolutionDimensionError : public std::runtime_error {
public:
    SolutionDimensionError(const std::string& what, int dim) : std::runtime_error(what), dimension(dim) {}
    int dimension;
};

struct CorrelationTable {
    std::map<ZLambda, NuVector> entries;  // z in Delta, ordered by real value
    ZLambda radius;                       // complete for |z| <= radius

    /// nu(z); zero vector for z outside Delta; throws std::out_of_range beyond the radius.
    NuVector at(const ZLambda& z) const;
    /// z with nu_ij(z) > 0.
    std::vector<ZLambda> support(int i, int j) const;

    bool symmetric() const;     // nu_ij(z) = nu_ji(-z)
    bool nonnegative() const;
    QLambda normalisation() const { return at(ZLambda(0)).at(0) + at(ZLambda(0)).at(3); }
};

/// Displacements of type-i tiles inside a supertile of type j, exact.
using DisplacementSets = std::array<std::array<std::vector<ZLambda>, 2>, 2>;
DisplacementSets displacement_sets(const SubstitutionRule& rule = default_rule());

/// Right-hand sides of the four renormalisation identities at z:
/// nu_ij(z) = (1/lambda) sum coeff * nu_mn(arg).
struct RenormTerm {
    int component;  // 2m + n
    QLambda arg;
    int multiplicity;
};
std::array<std::vector<RenormTerm>, 4> renormalisation_terms(const ZLambda& z);

/// Sorted distances x - y, x, y in a patch of radius >= lambda^2 R, |x - y| <= R.
std::vector<ZLambda> enumerate_distances(const ZLambda& R);

enum class SymmetryRows { none, symmetric, antisymmetric };

struct BaseSystemInfo {
    int unknowns = 0;
    int equations = 0;
    int rank = 0;
    int null_dimension = 0;
    std::vector<ZLambda> distances;
};

/// Exact null space dimension of the base system with optional extra rows.
BaseSystemInfo base_system_analyse(SymmetryRows rows = SymmetryRows::none);

/// Solves the closed system for |z| <= 1 + lambda with nu00(0) + nu11(0) = 1.
CorrelationTable base_system_solve(BaseSystemInfo* info = nullptr, SymmetryRows rows = SymmetryRows::none);

/// Extends a table to radius R by the renormalisation identities.
CorrelationTable extend_table(const CorrelationTable& t, const ZLambda& R);

/// Number of z with |z| <= radius - (2 + lambda) whose identities do not balance exactly.
std::size_t renormalisation_violations(const CorrelationTable& t);

struct EmpiricalCorrelation {
    std::map<ZLambda, std::array<std::int64_t, 4>> counts;
    std::size_t window_points = 0;
    double window_length = 0.0;  // 2r
    ZLambda radius;
    std::vector<std::string> warnings;

    std::array<double, 4> nu(const ZLambda& z) const;
};

/// Brute-force pair counting over points in [-r, r), r the patch radius.
EmpiricalCorrelation count_correlations(const WeightedPointSet& patch, const ZLambda& R);

using Weights = std::array<std::complex<double>, 2>;

/// eta_u(z) = dens * sum conj(u_i) nu_ij(z) u_j.
std::complex<double> eta(const CorrelationTable& t, const Weights& u, const ZLambda& z);
/// Same from counts, with the empirical density of the window.
std::complex<double> eta_counted(const EmpiricalCorrelation& e, const Weights& u, const ZLambda& z);

struct AutocorrelationCoefficients {
    Weights u;
    std::map<ZLambda, std::complex<double>> values;
    double density;
};
AutocorrelationCoefficients autocorrelation(const CorrelationTable& t, const Weights& u);

/// Closed-form values for |z| <= 1 + lambda, written with powers of lambda.
std::map<ZLambda, NuVector> reference_base_values();

void write_table_csv(std::ostream& os, const CorrelationTable& t);

/// Parses "a", "a+b*l" or "a,b" into a + b*lambda.
ZLambda parse_zlambda(const std::string& s);

}  // namespace nonpv
