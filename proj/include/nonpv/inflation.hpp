// Substitution 0 -> 0111, 1 -> 0 and its geometric fixed-point patches.
#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "nonpv/algebraic.hpp"

namespace nonpv {

using cplx = std::complex<double>;

struct Word {
    std::vector<std::uint8_t> letters;
    std::size_t marker = 0;  // position of '|'

    /// Accepts strings over {0,1} with at most one '|'.
    static Word parse(std::string_view s);
    std::string str() const;
    std::size_t size() const { return letters.size(); }
    bool operator==(const Word&) const = default;
};

/// Letter images of a two-letter substitution; the engine only wires the 0111/0 rule.
struct SubstitutionRule {
    std::array<std::vector<std::uint8_t>, 2> images;
    std::array<std::array<int, 2>, 2> matrix() const;  // M_ij = #i in image of j
};

const SubstitutionRule& default_rule();

Word substitute(const Word& w, int power);
Word substitute(const Word& w, int power, const SubstitutionRule& rule);

/// |rho^n(a)| for a in {0,1}.
std::pair<Integer, Integer> word_lengths(int n);

class IllegalWord : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Supertile {
    int type;
    std::size_t start;
    bool operator==(const Supertile&) const = default;
};

struct SupertileDecomposition {
    std::vector<Supertile> tiles;
    std::size_t leading_partial = 0;   // letters before the first complete supertile
    std::size_t trailing_partial = 0;  // letters after the last complete supertile
    Word preimage() const;             // supertile word, marker not tracked
};

SupertileDecomposition supertile_decompose(const Word& w);

std::pair<double, double> letter_frequencies(const Word& w);

/// Point of Z[lambda] held in machine words: a + b*lambda.
struct LatticePoint {
    std::int64_t a = 0;
    std::int64_t b = 0;
    ZLambda exact() const { return ZLambda(a, b); }
    double to_double() const { return static_cast<double>(a) + static_cast<double>(b) * kLambda; }
    bool operator==(const LatticePoint&) const = default;
};

/// Exact sign of a + b*lambda for machine integers.
int lattice_sign(std::int64_t a, std::int64_t b);

/**
 * Left endpoints of the tiles of a word, type-0 tiles of length lambda and
 * type-1 tiles of length 1, with the marker tile starting at 0.
 * Positions are expanded on first request and shared between copies.
 */
class WeightedPointSet {
public:
    WeightedPointSet(Word word, std::array<cplx, 2> weights);

    std::size_t size() const { return word_.letters.size(); }
    int type(std::size_t i) const { return word_.letters[i]; }
    cplx weight(std::size_t i) const { return weights_[word_.letters[i]]; }
    const std::array<cplx, 2>& weights() const { return weights_; }
    const Word& word() const { return word_; }
    std::size_t origin_index() const { return word_.marker; }

    const std::vector<LatticePoint>& lattice() const;
    ZLambda position(std::size_t i) const { return lattice()[i].exact(); }
    double position_double(std::size_t i) const;
    std::vector<double> positions_double() const;

    ZLambda left_extent() const;   // first left endpoint
    ZLambda right_extent() const;  // last left endpoint
    ZLambda right_end() const;     // right end of the last tile
    /// Length of the covered interval.
    double length() const;
    /// Largest r with [-r, r) inside the covered interval.
    double radius() const;

    /// Index range [first, last) of points with -r <= x < r; r is exact.
    std::pair<std::size_t, std::size_t> window(const ZLambda& r) const;
    /// Same with a real radius; ties resolved in long double.
    std::pair<std::size_t, std::size_t> window(double r) const;

    WeightedPointSet with_weights(std::array<cplx, 2> weights) const;

private:
    struct Cache;
    Word word_;
    std::array<cplx, 2> weights_;
    std::shared_ptr<Cache> cache_;
};

/// Two-sided patch rho^power(0|0).
WeightedPointSet geometric_patch_power(int power, std::array<cplx, 2> weights);
/// Two-sided patch rho^(2 level)(0|0).
WeightedPointSet geometric_patch(int level, std::array<cplx, 2> weights = {cplx(1), cplx(1)});

/// Start points of complete level-1 supertiles of a patch.
std::vector<LatticePoint> supertile_starts(const WeightedPointSet& patch);

}  // namespace nonpv
