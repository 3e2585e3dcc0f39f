#include "nonpv/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <sstream>

#include "nonpv/format.hpp"
#include "nonpv/parallel.hpp"

namespace nonpv {

namespace {

const ZLambda kBaseRadius(1, 1);

NuVector zero_nu() { return {QLambda(0), QLambda(0), QLambda(0), QLambda(0)}; }

int swap_component(int c) { return 2 * (c % 2) + c / 2; }

}  // namespace

// ---------------------------------------------------------------- table

NuVector CorrelationTable::at(const ZLambda& z) const
{
    if (compare_abs(z, radius) > 0) throw std::out_of_range("|z| = " + z.str() + " exceeds table radius " + radius.str());
    auto it = entries.find(z);
    return it == entries.end() ? zero_nu() : it->second;
}

std::vector<ZLambda> CorrelationTable::support(int i, int j) const
{
    std::vector<ZLambda> out;
    for (const auto& [z, nu] : entries)
        if (nu[2 * i + j].sign() > 0) out.push_back(z);
    return out;
}

bool CorrelationTable::symmetric() const
{
    for (const auto& [z, nu] : entries) {
        NuVector m = at(-z);
        for (int c = 0; c < 4; ++c)
            if (nu[c] != m[swap_component(c)]) return false;
    }
    return true;
}

bool CorrelationTable::nonnegative() const
{
    for (const auto& [z, nu] : entries)
        for (const auto& v : nu)
            if (v.sign() < 0) return false;
    return true;
}

// ---------------------------------------------------------------- identities

DisplacementSets displacement_sets(const SubstitutionRule& rule)
{
    DisplacementSets T;
    const ZLambda len[2] = {ZLambda(0, 1), ZLambda(1, 0)};
    for (int j = 0; j < 2; ++j) {
        ZLambda pos(0, 0);
        for (auto l : rule.images[j]) {
            T[l][j].push_back(pos);
            pos += len[l];
        }
    }
    return T;
}

std::array<std::vector<RenormTerm>, 4> renormalisation_terms(const ZLambda& z)
{
    static const DisplacementSets T = displacement_sets();
    static const QLambda inv_lambda = QLambda::lambda_pow(-1);
    std::array<std::vector<RenormTerm>, 4> out;
    for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) {
            auto& terms = out[2 * i + j];
            for (int m = 0; m < 2; ++m) {
                for (int n = 0; n < 2; ++n) {
                    for (const auto& s : T[i][m]) {
                        for (const auto& t : T[j][n]) {
                            QLambda arg = QLambda(z + s - t) * inv_lambda;
                            int comp = 2 * m + n;
                            auto it = std::find_if(terms.begin(), terms.end(),
                                                   [&](const RenormTerm& r) { return r.component == comp && r.arg == arg; });
                            if (it == terms.end()) terms.push_back({comp, arg, 1});
                            else ++it->multiplicity;
                        }
                    }
                }
            }
        }
    }
    return out;
}

std::vector<ZLambda> enumerate_distances(const ZLambda& R)
{
    if (R.sign() < 0) throw std::invalid_argument("negative radius");
    const double target = kLambda * kLambda * R.to_double();
    int level = 3;
    while (std::pow(kLambda, 2 * level + 1) < target) ++level;
    auto patch = geometric_patch(level);
    const auto& pts = patch.lattice();
    const std::int64_t ra = R.a().to_int64(), rb = R.b().to_int64();
    std::vector<std::pair<std::int64_t, std::int64_t>> found;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i; j < pts.size(); ++j) {
            std::int64_t da = pts[j].a - pts[i].a, db = pts[j].b - pts[i].b;
            if (lattice_sign(ra - da, rb - db) < 0) break;
            found.emplace_back(da, db);
            found.emplace_back(-da, -db);
        }
    }
    std::sort(found.begin(), found.end());
    found.erase(std::unique(found.begin(), found.end()), found.end());
    std::vector<ZLambda> out;
    out.reserve(found.size());
    for (auto [a, b] : found) out.emplace_back(a, b);
    std::sort(out.begin(), out.end());
    return out;
}

// ---------------------------------------------------------------- base system

namespace {

using Matrix = std::vector<std::vector<ZLambda>>;

struct Echelon {
    Matrix rows;
    std::vector<int> pivots;
};

// Fraction-free elimination over Z[lambda]; every division is exact.
Echelon bareiss(Matrix a)
{
    Echelon e;
    const std::size_t m = a.size();
    const std::size_t n = m ? a[0].size() : 0;
    ZLambda prev(1, 0);
    std::size_t r = 0;
    for (std::size_t c = 0; c < n && r < m; ++c) {
        std::size_t p = r;
        while (p < m && a[p][c].is_zero()) ++p;
        if (p == m) continue;
        std::swap(a[p], a[r]);
        for (std::size_t i = r + 1; i < m; ++i) {
            for (std::size_t j = c + 1; j < n; ++j) {
                ZLambda num = a[r][c] * a[i][j] - a[i][c] * a[r][j];
                auto q = divide(num, prev);
                if (!q) throw std::logic_error("inexact Bareiss step");
                a[i][j] = *q;
            }
            a[i][c] = ZLambda(0, 0);
        }
        prev = a[r][c];
        e.pivots.push_back(static_cast<int>(c));
        ++r;
    }
    a.resize(r);
    e.rows = std::move(a);
    return e;
}

struct Assembled {
    Matrix rows;
    std::vector<ZLambda> distances;
};

Assembled assemble_base(SymmetryRows extra)
{
    Assembled s;
    s.distances = enumerate_distances(kBaseRadius);
    const std::size_t N = s.distances.size();
    auto index_of = [&](const ZLambda& z) -> std::optional<std::size_t> {
        auto it = std::lower_bound(s.distances.begin(), s.distances.end(), z);
        if (it == s.distances.end() || *it != z) return std::nullopt;
        return static_cast<std::size_t>(it - s.distances.begin());
    };
    const ZLambda lam(0, 1);
    for (std::size_t zi = 0; zi < N; ++zi) {
        auto terms = renormalisation_terms(s.distances[zi]);
        for (int c = 0; c < 4; ++c) {
            std::vector<ZLambda> row(4 * N, ZLambda(0, 0));
            row[4 * zi + c] += lam;
            for (const auto& t : terms[c]) {
                auto arg = t.arg.to_zlambda();
                if (!arg) continue;
                if (compare_abs(*arg, kBaseRadius) > 0) throw std::logic_error("base system is not closed");
                auto k = index_of(*arg);
                if (!k) continue;
                row[4 * *k + t.component] -= ZLambda(t.multiplicity, 0);
            }
            s.rows.push_back(std::move(row));
        }
    }
    if (extra != SymmetryRows::none) {
        const ZLambda sgn(extra == SymmetryRows::symmetric ? -1 : 1, 0);
        for (std::size_t zi = 0; zi < N; ++zi) {
            auto mi = index_of(-s.distances[zi]);
            if (!mi) throw std::logic_error("distance set is not symmetric");
            for (int c = 0; c < 4; ++c) {
                std::vector<ZLambda> row(4 * N, ZLambda(0, 0));
                row[4 * zi + c] += ZLambda(1, 0);
                row[4 * *mi + swap_component(c)] += sgn;
                if (std::all_of(row.begin(), row.end(), [](const ZLambda& v) { return v.is_zero(); })) continue;
                s.rows.push_back(std::move(row));
            }
        }
    }
    return s;
}

}  // namespace

BaseSystemInfo base_system_analyse(SymmetryRows rows)
{
    Assembled s = assemble_base(rows);
    Echelon e = bareiss(s.rows);
    BaseSystemInfo info;
    info.unknowns = static_cast<int>(4 * s.distances.size());
    info.equations = static_cast<int>(s.rows.size());
    info.rank = static_cast<int>(e.pivots.size());
    info.null_dimension = info.unknowns - info.rank;
    info.distances = s.distances;
    return info;
}

CorrelationTable base_system_solve(BaseSystemInfo* info, SymmetryRows rows)
{
    Assembled s = assemble_base(rows);
    Echelon e = bareiss(s.rows);
    const int unknowns = static_cast<int>(4 * s.distances.size());
    const int null_dim = unknowns - static_cast<int>(e.pivots.size());
    if (info) {
        info->unknowns = unknowns;
        info->equations = static_cast<int>(s.rows.size());
        info->rank = static_cast<int>(e.pivots.size());
        info->null_dimension = null_dim;
        info->distances = s.distances;
    }
    if (null_dim != 1)
        throw SolutionDimensionError("solution space has dimension " + std::to_string(null_dim) + ", expected 1", null_dim);

    std::vector<char> is_pivot(static_cast<std::size_t>(unknowns), 0);
    for (int p : e.pivots) is_pivot[static_cast<std::size_t>(p)] = 1;
    std::vector<QLambda> x(static_cast<std::size_t>(unknowns), QLambda(0));
    for (int c = 0; c < unknowns; ++c)
        if (!is_pivot[static_cast<std::size_t>(c)]) x[static_cast<std::size_t>(c)] = QLambda(1);
    for (std::size_t r = e.pivots.size(); r-- > 0;) {
        const auto& row = e.rows[r];
        const std::size_t pc = static_cast<std::size_t>(e.pivots[r]);
        QLambda acc(0);
        for (std::size_t j = pc + 1; j < row.size(); ++j)
            if (!row[j].is_zero() && !x[j].is_zero()) acc += QLambda(row[j]) * x[j];
        x[pc] = -acc / QLambda(row[pc]);
    }

    auto zero_it = std::lower_bound(s.distances.begin(), s.distances.end(), ZLambda(0, 0));
    const std::size_t z0 = static_cast<std::size_t>(zero_it - s.distances.begin());
    QLambda norm = x[4 * z0] + x[4 * z0 + 3];
    if (norm.is_zero()) throw std::logic_error("normalisation functional vanishes on the solution");
    QLambda scale = norm.inverse();

    CorrelationTable t;
    t.radius = kBaseRadius;
    for (std::size_t zi = 0; zi < s.distances.size(); ++zi) {
        NuVector nu;
        bool any = false;
        for (int c = 0; c < 4; ++c) {
            nu[c] = x[4 * zi + c] * scale;
            any = any || !nu[c].is_zero();
        }
        if (any) t.entries.emplace(s.distances[zi], nu);
    }
    return t;
}

// ---------------------------------------------------------------- extension

namespace {

NuVector evaluate_identities(const ZLambda& z, const std::map<ZLambda, NuVector>& known, const ZLambda& known_radius)
{
    static const QLambda inv_lambda = QLambda::lambda_pow(-1);
    auto terms = renormalisation_terms(z);
    NuVector out = zero_nu();
    for (int c = 0; c < 4; ++c) {
        QLambda acc(0);
        for (const auto& t : terms[c]) {
            auto arg = t.arg.to_zlambda();
            if (!arg) continue;
            if (compare_abs(*arg, known_radius) > 0)
                throw MissingArgument("argument " + arg->str() + " for z = " + z.str() + " lies beyond the known radius");
            auto it = known.find(*arg);
            if (it == known.end()) continue;
            acc += QLambda(t.multiplicity) * it->second[t.component];
        }
        out[c] = acc * inv_lambda;
    }
    return out;
}

}  // namespace

CorrelationTable extend_table(const CorrelationTable& t, const ZLambda& R)
{
    if (compare_abs(t.radius, kBaseRadius) < 0) throw std::invalid_argument("table radius below 1 + lambda");
    if (R <= t.radius) throw std::invalid_argument("extension radius must exceed the table radius");

    std::vector<ZLambda> todo;
    for (const auto& z : enumerate_distances(R))
        if (compare_abs(z, t.radius) > 0) todo.push_back(z);
    std::stable_sort(todo.begin(), todo.end(), [](const ZLambda& x, const ZLambda& y) { return compare_abs(x, y) < 0; });

    CorrelationTable out = t;
    ZLambda known = t.radius;
    const ZLambda lam(0, 1), shift(2, 1);
    std::size_t pos = 0;
    while (pos < todo.size()) {
        // arguments of z shrink to at most (|z| + 2 + lambda) / lambda
        ZLambda reach = lam * known - shift;
        std::size_t end = pos;
        while (end < todo.size() && compare_abs(todo[end], reach) <= 0) ++end;
        ZLambda bound = known;
        if (end == pos) {
            end = pos + 1;
            while (end < todo.size() && compare_abs(todo[end], todo[pos]) == 0) ++end;
            bound = todo[pos].abs();
        }
        std::vector<NuVector> values(end - pos);
        parallel_for(end - pos, 8, [&](std::size_t b, std::size_t e) {
            for (std::size_t k = b; k < e; ++k) values[k] = evaluate_identities(todo[pos + k], out.entries, bound);
        });
        for (std::size_t k = 0; k < values.size(); ++k) {
            bool any = std::any_of(values[k].begin(), values[k].end(), [](const QLambda& v) { return !v.is_zero(); });
            if (any) out.entries.emplace(todo[pos + k], values[k]);
        }
        known = todo[end - 1].abs();
        pos = end;
    }
    out.radius = R;
    return out;
}

std::size_t renormalisation_violations(const CorrelationTable& t)
{
    ZLambda limit = t.radius - ZLambda(2, 1);
    std::size_t bad = 0;
    for (const auto& [z, nu] : t.entries) {
        if (compare_abs(z, limit) > 0) continue;
        NuVector rhs = evaluate_identities(z, t.entries, t.radius);
        for (int c = 0; c < 4; ++c)
            if (rhs[c] != nu[c]) {
                ++bad;
                break;
            }
    }
    return bad;
}

// ---------------------------------------------------------------- counting

std::array<double, 4> EmpiricalCorrelation::nu(const ZLambda& z) const
{
    std::array<double, 4> out{};
    auto it = counts.find(z);
    if (it == counts.end() || window_points == 0) return out;
    for (int c = 0; c < 4; ++c) out[c] = static_cast<double>(it->second[c]) / static_cast<double>(window_points);
    return out;
}

EmpiricalCorrelation count_correlations(const WeightedPointSet& patch, const ZLambda& R)
{
    if (R.sign() < 0) throw std::invalid_argument("negative radius");
    EmpiricalCorrelation e;
    ZLambda left = -patch.left_extent(), right = patch.right_end();
    e.radius = left < right ? left : right;
    auto [lo, hi] = patch.window(e.radius);
    e.window_points = hi - lo;
    e.window_length = 2.0 * e.radius.to_double();
    if (e.radius.to_double() < 10.0 * R.to_double())
        e.warnings.push_back("patch radius " + fmt_short(e.radius.to_double()) + " is below 10 R; edge effects dominate");

    const auto& pts = patch.lattice();
    const std::int64_t ra = R.a().to_int64(), rb = R.b().to_int64();
    // forward differences have non-negative components
    const double rd = R.to_double();
    const std::size_t A = static_cast<std::size_t>(std::floor(rd)) + 2;
    const std::size_t B = static_cast<std::size_t>(std::floor(rd / kLambda)) + 2;
    const std::size_t cells = A * B * 4;
    const std::size_t n = hi - lo;
    const std::size_t grain = 1 << 16;
    std::vector<std::vector<std::int64_t>> partial(chunk_count(n, grain));
    parallel_for(n, grain, [&](std::size_t b, std::size_t end) {
        std::vector<std::int64_t> acc(cells, 0);
        for (std::size_t i = lo + b; i < lo + end; ++i) {
            const int ti = patch.type(i);
            for (std::size_t j = i; j < hi; ++j) {
                std::int64_t da = pts[j].a - pts[i].a, db = pts[j].b - pts[i].b;
                if (lattice_sign(ra - da, rb - db) < 0) break;
                ++acc[(static_cast<std::size_t>(da) * B + static_cast<std::size_t>(db)) * 4 + static_cast<std::size_t>(2 * ti + patch.type(j))];
            }
        }
        partial[b / grain] = std::move(acc);
    });
    std::vector<std::int64_t> total(cells, 0);
    for (const auto& p : partial)
        for (std::size_t k = 0; k < cells; ++k) total[k] += p[k];

    for (std::size_t a = 0; a < A; ++a) {
        for (std::size_t b = 0; b < B; ++b) {
            const std::int64_t* c = &total[(a * B + b) * 4];
            if (c[0] + c[1] + c[2] + c[3] == 0) continue;
            ZLambda z(static_cast<long long>(a), static_cast<long long>(b));
            auto& fwd = e.counts[z];
            for (int k = 0; k < 4; ++k) fwd[k] += c[k];
            if (z.is_zero()) continue;
            auto& bwd = e.counts[-z];
            for (int k = 0; k < 4; ++k) bwd[swap_component(k)] += c[k];
        }
    }
    return e;
}

// ---------------------------------------------------------------- eta

namespace {
std::complex<double> quadratic(const std::array<double, 4>& nu, const Weights& u)
{
    std::complex<double> s = 0.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) s += std::conj(u[i]) * nu[2 * i + j] * u[j];
    return s;
}
}  // namespace

std::complex<double> eta(const CorrelationTable& t, const Weights& u, const ZLambda& z)
{
    NuVector nu = t.at(z);
    std::array<double, 4> f{};
    for (int c = 0; c < 4; ++c) f[c] = nu[c].to_double();
    return pf_data().density * quadratic(f, u);
}

std::complex<double> eta_counted(const EmpiricalCorrelation& e, const Weights& u, const ZLambda& z)
{
    double dens = static_cast<double>(e.window_points) / e.window_length;
    return dens * quadratic(e.nu(z), u);
}

AutocorrelationCoefficients autocorrelation(const CorrelationTable& t, const Weights& u)
{
    AutocorrelationCoefficients a;
    a.u = u;
    a.density = pf_data().density;
    for (const auto& [z, nu] : t.entries) a.values.emplace(z, eta(t, u, z));
    return a;
}

// ---------------------------------------------------------------- reference and io

std::map<ZLambda, NuVector> reference_base_values()
{
    auto L = [](int n) { return QLambda::lambda_pow(-n); };
    const QLambda O(0);
    const QLambda three(3), two(2);
    std::map<ZLambda, NuVector> m;
    m[ZLambda(-1, -1)] = {O, L(3), L(2), three * L(4)};
    m[ZLambda(-3, 0)] = {O, L(2), O, O};
    m[ZLambda(0, -1)] = {three * L(3), O, L(2), O};
    m[ZLambda(-2, 0)] = {O, L(2), O, L(2)};
    m[ZLambda(-1, 0)] = {O, L(2), O, two * L(2)};
    m[ZLambda(0, 0)] = {L(1), O, O, three * L(2)};
    m[ZLambda(1, 0)] = {O, O, L(2), two * L(2)};
    m[ZLambda(2, 0)] = {O, O, L(2), L(2)};
    m[ZLambda(0, 1)] = {three * L(3), L(2), O, O};
    m[ZLambda(3, 0)] = {O, O, L(2), O};
    m[ZLambda(1, 1)] = {O, L(2), L(3), three * L(4)};
    return m;
}

void write_table_csv(std::ostream& os, const CorrelationTable& t)
{
    static const char* names[4] = {"nu00", "nu01", "nu10", "nu11"};
    os << "z_a,z_b,z_float";
    for (auto* n : names) os << ',' << n << "_p," << n << "_q," << n << "_float";
    os << '\n';
    for (const auto& [z, nu] : t.entries) {
        os << z.a() << ',' << z.b() << ',' << fmt17(z.to_double());
        for (const auto& v : nu) os << ',' << v.p() << ',' << v.q() << ',' << fmt17(v.to_double());
        os << '\n';
    }
}

ZLambda parse_zlambda(const std::string& s)
{
    std::string t;
    for (char c : s)
        if (c != ' ') t.push_back(c);
    if (t.empty()) throw std::invalid_argument("empty Z[lambda] literal");
    auto comma = t.find(',');
    if (comma != std::string::npos) return ZLambda(Integer::parse(t.substr(0, comma)), Integer::parse(t.substr(comma + 1)));
    auto l = t.find_first_of("lL");
    if (l == std::string::npos) return ZLambda(Integer::parse(t), Integer(0));
    std::string coeff_part = t.substr(0, l);
    if (coeff_part.size() && coeff_part.back() == '*') coeff_part.pop_back();
    // split rational part from the lambda coefficient at the last sign
    std::size_t split = coeff_part.find_last_of("+-");
    while (split != std::string::npos && split > 0 && (coeff_part[split - 1] == 'e' || coeff_part[split - 1] == 'E')) split = coeff_part.find_last_of("+-", split - 1);
    std::string a_str = split == std::string::npos ? "" : coeff_part.substr(0, split);
    std::string b_str = split == std::string::npos ? coeff_part : coeff_part.substr(split);
    if (b_str.empty() || b_str == "+") b_str = "1";
    if (b_str == "-") b_str = "-1";
    if (b_str[0] == '+') b_str.erase(0, 1);
    return ZLambda(a_str.empty() ? Integer(0) : Integer::parse(a_str), Integer::parse(b_str));
}

}  // namespace nonpv
