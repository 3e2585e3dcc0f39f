#include "nonpv/inflation.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace nonpv {

Word Word::parse(std::string_view s)
{
    Word w;
    bool seen_marker = false;
    for (char c : s) {
        if (c == '0' || c == '1') {
            w.letters.push_back(static_cast<std::uint8_t>(c - '0'));
        } else if (c == '|') {
            if (seen_marker) throw std::invalid_argument("word has more than one marker");
            seen_marker = true;
            w.marker = w.letters.size();
        } else {
            throw std::invalid_argument(std::string("illegal letter '") + c + "' in word");
        }
    }
    return w;
}

std::string Word::str() const
{
    std::string s;
    s.reserve(letters.size() + 1);
    for (std::size_t i = 0; i <= letters.size(); ++i) {
        if (i == marker && marker != 0) s.push_back('|');
        if (i < letters.size()) s.push_back(static_cast<char>('0' + letters[i]));
    }
    return s;
}

std::array<std::array<int, 2>, 2> SubstitutionRule::matrix() const
{
    std::array<std::array<int, 2>, 2> m{};
    for (int j = 0; j < 2; ++j)
        for (auto l : images[j]) ++m[l][j];
    return m;
}

const SubstitutionRule& default_rule()
{
    static const SubstitutionRule rule{{std::vector<std::uint8_t>{0, 1, 1, 1}, std::vector<std::uint8_t>{0}}};
    return rule;
}

Word substitute(const Word& w, int power) { return substitute(w, power, default_rule()); }

Word substitute(const Word& w, int power, const SubstitutionRule& rule)
{
    if (power < 0) throw std::invalid_argument("substitution power must be >= 0");
    Word cur = w;
    for (int p = 0; p < power; ++p) {
        Word next;
        std::size_t total = 0;
        for (auto l : cur.letters) total += rule.images[l].size();
        next.letters.reserve(total);
        for (std::size_t i = 0; i < cur.letters.size(); ++i) {
            if (i == cur.marker) next.marker = next.letters.size();
            const auto& img = rule.images[cur.letters[i]];
            next.letters.insert(next.letters.end(), img.begin(), img.end());
        }
        if (cur.marker >= cur.letters.size()) next.marker = next.letters.size();
        cur = std::move(next);
    }
    return cur;
}

std::pair<Integer, Integer> word_lengths(int n)
{
    Integer l0(1), l1(1);
    for (int i = 0; i < n; ++i) {
        Integer n0 = l0 + Integer(3) * l1;
        l1 = l0;
        l0 = n0;
    }
    return {l0, l1};
}

Word SupertileDecomposition::preimage() const
{
    Word w;
    w.letters.reserve(tiles.size());
    for (const auto& t : tiles) w.letters.push_back(static_cast<std::uint8_t>(t.type));
    return w;
}

SupertileDecomposition supertile_decompose(const Word& w)
{
    SupertileDecomposition d;
    const auto& s = w.letters;
    const std::size_t n = s.size();
    std::size_t i = 0;
    while (i < n && s[i] == 1) ++i;
    if (i > 3) throw IllegalWord("more than three leading 1s");
    d.leading_partial = i;
    while (i < n) {
        if (s[i] != 0) throw IllegalWord("letter 1 outside a 0111 block at index " + std::to_string(i));
        if (i + 1 == n) {
            d.trailing_partial = 1;
            break;
        }
        if (s[i + 1] == 0) {
            d.tiles.push_back({1, i});
            i += 1;
            continue;
        }
        std::size_t k = i + 1;
        while (k < n && k < i + 4 && s[k] == 1) ++k;
        if (k < i + 4 && k == n) {
            d.trailing_partial = n - i;
            break;
        }
        if (k < i + 4) throw IllegalWord("block 01 not completed to 0111 at index " + std::to_string(i));
        d.tiles.push_back({0, i});
        i += 4;
    }
    return d;
}

std::pair<double, double> letter_frequencies(const Word& w)
{
    if (w.letters.empty()) throw std::invalid_argument("letter_frequencies of empty word");
    std::size_t ones = static_cast<std::size_t>(std::count(w.letters.begin(), w.letters.end(), std::uint8_t{1}));
    double n = static_cast<double>(w.letters.size());
    return {static_cast<double>(w.letters.size() - ones) / n, static_cast<double>(ones) / n};
}

int lattice_sign(std::int64_t a, std::int64_t b)
{
    // sign of (2a + b) + b sqrt(13)
    __int128 x = static_cast<__int128>(a) * 2 + b;
    __int128 y = b;
    int sx = (x > 0) - (x < 0), sy = (y > 0) - (y < 0);
    if (sy == 0) return sx;
    if (sx == 0 || sx == sy) return sy;
    // magnitudes stay far below 2^60 for any patch that fits in memory
    return x * x > 13 * y * y ? sx : sy;
}

// ---------------------------------------------------------------- point sets

struct WeightedPointSet::Cache {
    std::once_flag once;
    std::vector<LatticePoint> points;
};

WeightedPointSet::WeightedPointSet(Word word, std::array<cplx, 2> weights)
    : word_(std::move(word)), weights_(weights), cache_(std::make_shared<Cache>())
{
    if (word_.letters.empty()) throw std::invalid_argument("empty patch");
    if (word_.marker > word_.letters.size()) throw std::invalid_argument("marker out of range");
}

const std::vector<LatticePoint>& WeightedPointSet::lattice() const
{
    std::call_once(cache_->once, [this] {
        const auto& s = word_.letters;
        std::vector<LatticePoint> pts(s.size());
        LatticePoint x{};
        for (std::size_t i = word_.marker; i < s.size(); ++i) {
            pts[i] = x;
            if (s[i] == 0) ++x.b; else ++x.a;
        }
        x = {};
        for (std::size_t i = word_.marker; i-- > 0;) {
            if (s[i] == 0) --x.b; else --x.a;
            pts[i] = x;
        }
        cache_->points = std::move(pts);
    });
    return cache_->points;
}

double WeightedPointSet::position_double(std::size_t i) const
{
    const auto& p = lattice()[i];
    return static_cast<double>(ZLambda(p.a, p.b).to_long_double());
}

std::vector<double> WeightedPointSet::positions_double() const
{
    const auto& pts = lattice();
    std::vector<double> out(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        out[i] = static_cast<double>(static_cast<long double>(pts[i].a) + static_cast<long double>(pts[i].b) * kLambdaL);
    return out;
}

ZLambda WeightedPointSet::left_extent() const { return lattice().front().exact(); }
ZLambda WeightedPointSet::right_extent() const { return lattice().back().exact(); }

ZLambda WeightedPointSet::right_end() const
{
    LatticePoint p = lattice().back();
    if (word_.letters.back() == 0) ++p.b; else ++p.a;
    return p.exact();
}

double WeightedPointSet::length() const { return (right_end() - left_extent()).to_double(); }

double WeightedPointSet::radius() const
{
    return std::min(-left_extent().to_double(), right_end().to_double());
}

std::pair<std::size_t, std::size_t> WeightedPointSet::window(const ZLambda& r) const
{
    const auto& pts = lattice();
    ZLambda neg = -r;
    // positions are increasing, so binary search with exact comparisons
    auto lo = std::partition_point(pts.begin(), pts.end(), [&](const LatticePoint& p) { return p.exact() < neg; });
    auto hi = std::partition_point(lo, pts.end(), [&](const LatticePoint& p) { return p.exact() < r; });
    return {static_cast<std::size_t>(lo - pts.begin()), static_cast<std::size_t>(hi - pts.begin())};
}

std::pair<std::size_t, std::size_t> WeightedPointSet::window(double r) const
{
    const auto& pts = lattice();
    const long double rl = r;
    auto val = [](const LatticePoint& p) { return static_cast<long double>(p.a) + static_cast<long double>(p.b) * kLambdaL; };
    auto lo = std::partition_point(pts.begin(), pts.end(), [&](const LatticePoint& p) { return val(p) < -rl; });
    auto hi = std::partition_point(lo, pts.end(), [&](const LatticePoint& p) { return val(p) < rl; });
    return {static_cast<std::size_t>(lo - pts.begin()), static_cast<std::size_t>(hi - pts.begin())};
}

WeightedPointSet WeightedPointSet::with_weights(std::array<cplx, 2> weights) const
{
    WeightedPointSet copy = *this;
    copy.weights_ = weights;
    return copy;
}

WeightedPointSet geometric_patch_power(int power, std::array<cplx, 2> weights)
{
    if (power < 1) throw std::invalid_argument("patch power must be >= 1");
    return WeightedPointSet(substitute(Word::parse("0|0"), power), weights);
}

WeightedPointSet geometric_patch(int level, std::array<cplx, 2> weights)
{
    if (level < 1) throw std::invalid_argument("patch level must be >= 1");
    return geometric_patch_power(2 * level, weights);
}

std::vector<LatticePoint> supertile_starts(const WeightedPointSet& patch)
{
    auto dec = supertile_decompose(patch.word());
    const auto& pts = patch.lattice();
    std::vector<LatticePoint> out;
    out.reserve(dec.tiles.size());
    for (const auto& t : dec.tiles) out.push_back(pts[t.start]);
    return out;
}

}  // namespace nonpv
