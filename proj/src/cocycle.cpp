#include "nonpv/cocycle.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "nonpv/orbit.hpp"

namespace nonpv {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

cplx expi_turns(double t)
{
    t -= std::nearbyint(t);
    return {std::cos(kTwoPi * t), std::sin(kTwoPi * t)};
}

double frac(double t) { return t - std::floor(t); }

// rank of integer row vectors by fraction-free elimination
int integer_rank(std::vector<std::array<Integer, 4>> rows)
{
    int rank = 0;
    Integer prev(1);
    for (int col = 0; col < 4 && rank < static_cast<int>(rows.size()); ++col) {
        std::size_t piv = rank;
        while (piv < rows.size() && rows[piv][col].sign() == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rank], rows[piv]);
        for (std::size_t r = rank + 1; r < rows.size(); ++r) {
            for (int c = col + 1; c < 4; ++c)
                rows[r][c] = exact_div(rows[rank][col] * rows[r][c] - rows[r][col] * rows[rank][c], prev);
            rows[r][col] = Integer(0);
        }
        prev = rows[rank][col];
        ++rank;
    }
    return rank;
}

Eigen::Matrix<double, 32, 1> flatten_real(const Mat4& a)
{
    Eigen::Matrix<double, 32, 1> v;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            v(2 * (4 * i + j)) = a(i, j).real();
            v(2 * (4 * i + j) + 1) = a(i, j).imag();
        }
    return v;
}

double angle_between(const RVec4& a, const RVec4& b)
{
    double c = std::abs(a.dot(b)) / (a.norm() * b.norm());
    return std::acos(std::min(1.0, c));
}

double ls_slope(const std::vector<double>& y, std::size_t from)
{
    const std::size_t n = y.size() - from;
    if (n < 2) return 0.0;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = from; i < y.size(); ++i) {
        double x = static_cast<double>(i);
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
    }
    double dn = static_cast<double>(n);
    return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace

cplx TrigPoly::operator()(double k) const
{
    cplx s = 0.0;
    for (const auto& [f, c] : terms) {
        long double t = static_cast<long double>(k) * f.to_long_double();
        t -= std::floor(t);
        s += c * expi_turns(static_cast<double>(t));
    }
    return s;
}

TrigPoly TrigPoly::p()
{
    return TrigPoly{{{ZLambda(0, 1), 1.0}, {ZLambda(1, 1), 1.0}, {ZLambda(2, 1), 1.0}}};
}

cplx eval_p(double k)
{
    long double lk = kLambdaL * static_cast<long double>(k);
    double x = static_cast<double>(lk - std::floor(lk));
    return eval_p_lift(x, frac(k));
}

cplx eval_p_lift(double x, double y)
{
    return expi_turns(x + y) * (1.0 + 2.0 * std::cos(kTwoPi * (y - std::nearbyint(y))));
}

Eigen::Matrix2i digit_matrix_0()
{
    Eigen::Matrix2i d;
    d << 1, 1, 0, 0;
    return d;
}

Eigen::Matrix2i digit_matrix_lambda()
{
    Eigen::Matrix2i d;
    d << 0, 0, 1, 0;
    return d;
}

Mat2 eval_B(double k) { return B_from_p(eval_p(k)); }

Mat2 eval_B_lift(double x, double y) { return B_from_p(eval_p_lift(x, y)); }

Mat2 B_inverse_from_p(cplx p, long step)
{
    if (std::abs(p) < kSingularTol)
        throw SingularStep("near-singular step (|p| = " + std::to_string(std::abs(p)) + ") at step " + std::to_string(step),
                           step);
    Mat2 b;
    b << 0.0, 1.0 / p, 1.0, -1.0 / p;
    return b;
}

Mat4 kron(const Mat2& x, const Mat2& y)
{
    Mat4 r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) r(2 * i + k, 2 * j + l) = x(i, j) * y(k, l);
    return r;
}

Mat4 eval_A(double k)
{
    Mat2 b = eval_B(k);
    return kron(b, b.conjugate());
}

Mat4 U_matrix()
{
    const double h = 1.0 / std::sqrt(2.0);
    const cplx i(0.0, 1.0);
    Mat4 u = Mat4::Zero();
    u(0, 0) = h * (1.0 - i);
    u(1, 1) = h;
    u(1, 2) = -h * i;
    u(2, 1) = -h * i;
    u(2, 2) = h;
    u(3, 3) = h * (1.0 - i);
    return u;
}

RMat4 eval_AU(double k)
{
    static const Mat4 u = U_matrix();
    static const Mat4 uinv = u.inverse();
    return (u * eval_A(k) * uinv).real();
}

RMat4 eval_AU_closed(double k)
{
    cplx p = eval_p(k);
    double c = p.real(), s = p.imag();
    RMat4 a;
    a << 1, 1, 1, 1,
         c + s, s, c, 0,
         c - s, c, -s, 0,
         c * c + s * s, 0, 0, 0;
    return a;
}

int ida_dimension(int max_word_len)
{
    if (max_word_len < 0 || max_word_len > 20) throw std::invalid_argument("max_word_len must be in [0, 20]");
    const Eigen::Matrix2i gens[2] = {digit_matrix_0(), digit_matrix_lambda()};
    std::vector<std::array<Integer, 4>> rows;
    rows.push_back({Integer(1), Integer(0), Integer(0), Integer(1)});
    std::vector<Eigen::Matrix2i> layer{Eigen::Matrix2i::Identity()};
    for (int len = 1; len <= max_word_len; ++len) {
        std::vector<Eigen::Matrix2i> next;
        for (const auto& w : layer)
            for (const auto& g : gens) {
                Eigen::Matrix2i m = w * g;
                next.push_back(m);
                rows.push_back({Integer(m(0, 0)), Integer(m(0, 1)), Integer(m(1, 0)), Integer(m(1, 1))});
            }
        layer = std::move(next);
    }
    return integer_rank(std::move(rows));
}

int ida_dimension_numeric(const std::vector<Mat2>& generators, int max_word_len, double tol)
{
    std::vector<Mat2> all{Mat2::Identity()};
    std::vector<Mat2> layer{Mat2::Identity()};
    for (int len = 1; len <= max_word_len; ++len) {
        std::vector<Mat2> next;
        for (const auto& w : layer)
            for (const auto& g : generators) {
                Mat2 m = w * g;
                m /= std::max(m.norm(), 1e-300);
                next.push_back(m);
                all.push_back(m);
            }
        layer = std::move(next);
    }
    Eigen::MatrixXcd rows(all.size(), 4);
    for (std::size_t r = 0; r < all.size(); ++r)
        for (int c = 0; c < 4; ++c) rows(r, c) = all[r](c / 2, c % 2);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(rows);
    const auto& sv = svd.singularValues();
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv(i) > tol * sv(0)) ++rank;
    return rank;
}

RMat8 realify(const Mat4& a)
{
    RMat8 r;
    r.topLeftCorner<4, 4>() = a.real();
    r.topRightCorner<4, 4>() = -a.imag();
    r.bottomLeftCorner<4, 4>() = a.imag();
    r.bottomRightCorner<4, 4>() = a.real();
    return r;
}

RMat8 C_real_map()
{
    RMat4 s = RMat4::Zero();
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) s(2 * i + j, 2 * j + i) = 1.0;
    RMat8 c = RMat8::Zero();
    c.topLeftCorner<4, 4>() = s;
    c.bottomRightCorner<4, 4>() = -s;
    return c;
}

double commutator_C_residual(double k)
{
    static const RMat8 c = C_real_map();
    RMat8 a = realify(eval_A(k));
    return (c * a - a * c).cwiseAbs().maxCoeff();
}

double u_realness_residual(double k)
{
    static const Mat4 u = U_matrix();
    static const Mat4 uinv = u.inverse();
    return (u * eval_A(k) * uinv).imag().cwiseAbs().maxCoeff();
}

double projector_residual(double k)
{
    static const RMat8 c = C_real_map();
    const RMat8 id = RMat8::Identity();
    const RMat8 pp = 0.5 * (id + c), pm = 0.5 * (id - c);
    RMat8 a = realify(eval_A(k));
    double r = 0.0;
    r = std::max(r, (pp * pp - pp).cwiseAbs().maxCoeff());
    r = std::max(r, (pm * pm - pm).cwiseAbs().maxCoeff());
    r = std::max(r, (pp + pm - id).cwiseAbs().maxCoeff());
    r = std::max(r, (pm * a * pp).cwiseAbs().maxCoeff());
    r = std::max(r, (pp * a * pm).cwiseAbs().maxCoeff());
    return r;
}

KronAlgebraReport kron_algebra_real_dimension(const std::vector<double>& samples, double tol)
{
    if (samples.size() < 2) throw std::invalid_argument("need at least two samples");
    KronAlgebraReport rep;
    std::vector<Mat4> gens;
    for (double k : samples) {
        gens.push_back(eval_A(k));
        rep.max_commutator_residual = std::max(rep.max_commutator_residual, commutator_C_residual(k));
        rep.max_u_realness_residual = std::max(rep.max_u_realness_residual, u_realness_residual(k));
    }
    std::vector<Eigen::Matrix<double, 32, 1>> basis;
    std::vector<Mat4> accepted;
    auto offer = [&](Mat4 m) {
        double nrm = m.norm();
        if (nrm == 0.0) return false;
        m /= nrm;
        Eigen::Matrix<double, 32, 1> v = flatten_real(m);
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& q : basis) v -= q.dot(v) * q;
        double res = v.norm();
        if (res <= tol) return false;
        basis.push_back(v / res);
        accepted.push_back(m);
        return true;
    };
    std::vector<Mat4> frontier;
    for (const auto& g : gens)
        if (offer(g)) frontier.push_back(accepted.back());
    while (!frontier.empty() && basis.size() < 32) {
        std::vector<Mat4> next;
        for (const auto& w : frontier)
            for (const auto& g : gens)
                if (offer(g * w)) next.push_back(accepted.back());
        frontier = std::move(next);
    }
    rep.dimension = static_cast<int>(basis.size());
    return rep;
}

RMat4 AU_pair(double k) { return eval_AU(k / kLambda) * eval_AU(k); }

double positivity_threshold(double scan_step, double upper)
{
    auto entry = [](double k, int e) { return AU_pair(k)(e / 4, e % 4); };
    RMat4 prev = AU_pair(0.0);
    double k0 = 0.0;
    const long steps = std::lround(upper / scan_step);
    for (long i = 1; i <= steps; ++i) {
        double k1 = static_cast<double>(i) * scan_step;
        RMat4 cur = AU_pair(k1);
        double best = -1.0;
        for (int e = 0; e < 16; ++e) {
            if (!(prev(e / 4, e % 4) > 0.0 && cur(e / 4, e % 4) <= 0.0)) continue;
            double lo = k0, hi = k1;
            for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
                double mid = 0.5 * (lo + hi);
                (entry(mid, e) > 0.0 ? lo : hi) = mid;
            }
            if (best < 0.0 || hi < best) best = hi;
        }
        if (best >= 0.0) return best;
        prev = cur;
        k0 = k1;
    }
    throw std::runtime_error("no sign change of A_U(k/lambda) A_U(k) below " + std::to_string(upper));
}

RVec4 w_pf()
{
    const auto& pf = pf_data();
    RVec4 w;
    w << pf.right_pf[0] * pf.right_pf[0], pf.right_pf[0] * pf.right_pf[1], pf.right_pf[1] * pf.right_pf[0],
        pf.right_pf[1] * pf.right_pf[1];
    return w.normalized();
}

BlowupTrace blowup_iteration(double k, const RVec4& w0, int n)
{
    if (w0.minCoeff() < 0.0 || w0.norm() == 0.0) throw std::invalid_argument("w0 must be non-negative and non-zero");
    BlowupTrace tr;
    RVec4 w = w0;
    double acc = std::log(w.norm());
    w.normalize();
    tr.log_norms.push_back(acc);
    tr.directions.push_back(w);
    const RVec4 pf = w_pf();
    for (int m = 1; m <= n; ++m) {
        double ka = k / std::pow(kLambda, 2 * m - 2);
        w = eval_AU(ka / kLambda) * (eval_AU(ka) * w);
        double nrm = w.norm();
        acc += std::log(nrm);
        w /= nrm;
        tr.log_norms.push_back(acc);
        tr.directions.push_back(w);
    }
    tr.fitted_slope = ls_slope(tr.log_norms, tr.log_norms.size() / 2);
    tr.final_angle = angle_between(w, pf);
    return tr;
}

CorollaryTrace blowup_corollary(double k0, const RVec4& w0, int m)
{
    CorollaryTrace tr;
    RVec4 w = w0;
    for (int i = 1; i <= m; ++i) {
        double km = k0 / std::pow(kLambda, i);
        w = eval_AU(km) * w / kLambda;
        tr.scaled.push_back(km * w);
    }
    tr.final_angle = angle_between(tr.scaled.back(), w_pf());
    return tr;
}

long double lambda_pow_times(int m, long double k)
{
    if (m >= -4 && m <= 60) {
        auto [a, b] = lambda_power_coeffs(m);
        return a.to_long_double() * (kLambdaL * k) + b.to_long_double() * k;
    }
    return std::pow(kLambdaL, static_cast<long double>(m)) * k;
}

std::vector<cplx> pn_sequence(double k, int n) { return pn_sequence_scaled(k, 0, n); }

std::vector<cplx> pn_sequence_scaled(double k, int j, int n)
{
    if (n < 0) throw std::invalid_argument("n must be non-negative");
    std::vector<cplx> p(n + 2);
    p[0] = 0.0;
    p[1] = 1.0;
    for (int m = 0; m < n; ++m) p[m + 2] = p[m + 1] + eval_p(static_cast<double>(lambda_pow_times(m + j, k))) * p[m];
    return p;
}

Mat2 bn_product(double k, int n)
{
    Mat2 r = Mat2::Identity();
    for (int m = 0; m < n; ++m) r = r * eval_B(static_cast<double>(lambda_pow_times(m, k)));
    return r;
}

Mat2 bn_from_pn(double k, int n)
{
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    auto a = pn_sequence(k, n);
    auto b = pn_sequence_scaled(k, 1, n);
    // index shift: value P_j sits at position j + 1
    auto P = [](const std::vector<cplx>& v, int j) { return j < -1 ? cplx(0.0) : v[j + 1]; };
    cplx pk = eval_p(k);
    Mat2 r;
    r << P(a, n), P(a, n - 1), pk * P(b, n - 1), pk * P(b, n - 2);
    return r;
}

double det_limit_inward(double k, int n)
{
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    double s = 0.0;
    for (int m = 1; m <= n; ++m) {
        double p = std::abs(eval_p(static_cast<double>(lambda_pow_times(-m, k))));
        if (p < kSingularTol) throw SingularStep("near-singular step at m = " + std::to_string(m), m);
        s += std::log(p);
    }
    return s / n;
}

double det_limit_outward(double k, long n)
{
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    ExactOrbit orb(k, n);
    double s = 0.0;
    for (long l = 0; l < n; ++l) {
        double y = orb.y();
        double v = std::abs(1.0 + 2.0 * std::cos(kTwoPi * y));
        if (v < kSingularTol) throw SingularStep("near-singular step at l = " + std::to_string(l), l);
        s += std::log(v);
        orb.advance();
    }
    return -s / static_cast<double>(n);
}

double jensen_integral()
{
    // t = 1/3 -+ d turns 1 + 2 cos(2 pi t) into 2 sin^2(pi d) +- sqrt(3) sin(2 pi d)
    const double r3 = std::sqrt(3.0);
    const double pi = std::numbers::pi;
    boost::math::quadrature::tanh_sinh<double> ts;
    auto left = [&](double d) {
        double s = std::sin(pi * d);
        return std::log(2.0 * s * s + r3 * std::sin(2.0 * pi * d));
    };
    auto right = [&](double d) {
        double s = std::sin(pi * d);
        return std::log(std::abs(2.0 * s * s - r3 * std::sin(2.0 * pi * d)));
    };
    double a = ts.integrate(left, 0.0, 1.0 / 3.0);
    double b = ts.integrate(right, 0.0, 1.0 / 6.0);
    return 2.0 * (a + b);
}

}  // namespace nonpv
