#include "nonpv/lyapunov.hpp"

#include <algorithm>
#include <cmath>

#include <boost/multiprecision/mpfr.hpp>

#include "nonpv/orbit.hpp"

namespace nonpv {

namespace {

using HP = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<200>>;

struct HC {
    HP re, im;
};

HC hmul(const HC& a, const HC& b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
HC hadd(const HC& a, const HC& b) { return {a.re + b.re, a.im + b.im}; }
HC hsub(const HC& a, const HC& b) { return {a.re - b.re, a.im - b.im}; }
HC hdiv(const HC& a, const HC& b)
{
    HP d = b.re * b.re + b.im * b.im;
    return {(a.re * b.re + a.im * b.im) / d, (a.im * b.re - a.re * b.im) / d};
}
HP hnorm2(const HC& a) { return a.re * a.re + a.im * a.im; }

const HP& hp_lambda()
{
    static const HP l = (HP(1) + sqrt(HP(13))) / 2;
    return l;
}

HC hp_p(const HP& t)
{
    const HP two_pi = 2 * boost::math::constants::pi<HP>();
    HP amp = 1 + 2 * cos(two_pi * t);
    HP ph = two_pi * t * (hp_lambda() + 1);
    return {amp * cos(ph), amp * sin(ph)};
}

std::vector<HP> hp_inward_args(double k, int n)
{
    std::vector<HP> t(n + 1);
    t[0] = HP(k);
    for (int m = 1; m <= n; ++m) t[m] = t[m - 1] / hp_lambda();
    return t;
}

// backward inverse iteration from the contracting eigenvector of M
std::pair<HC, HC> hp_pullback(const std::vector<HP>& t, int n)
{
    HC w0{HP(1), HP(0)}, w1{-hp_lambda(), HP(0)};
    for (int m = n; m >= 1; --m) {
        HC p = hp_p(t[m]);
        HC q = hdiv(w1, p);
        HC a = q, b = hsub(w0, q);
        HP s = sqrt(hnorm2(a) + hnorm2(b));
        w0 = {a.re / s, a.im / s};
        w1 = {b.re / s, b.im / s};
    }
    return {w0, w1};
}

Vec2 phase_normalise(Vec2 v)
{
    v.normalize();
    int i = std::abs(v(0)) >= std::abs(v(1)) ? 0 : 1;
    return v * (std::abs(v(i)) / v(i));
}

}  // namespace

std::pair<double, double> fit_slope(const std::vector<double>& y, std::size_t from)
{
    const std::size_t n = y.size() - std::min(from, y.size());
    if (n < 2) return {0.0, 0.0};
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = from; i < y.size(); ++i) {
        double x = static_cast<double>(i);
        sx += x;
        sy += y[i];
        sxx += x * x;
        sxy += x * y[i];
    }
    const double dn = static_cast<double>(n);
    double slope = (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
    double icpt = (sy - slope * sx) / dn;
    double band = 0.0;
    for (std::size_t i = from; i < y.size(); ++i)
        band = std::max(band, std::abs(y[i] - (icpt + slope * static_cast<double>(i))));
    return {slope, band};
}

LyapunovTrace inward_lyapunov(double k, const Vec2& v0, int n)
{
    if (v0.norm() == 0.0) throw std::invalid_argument("v0 must be non-zero");
    LyapunovTrace tr;
    tr.k = k;
    const double isl = 1.0 / std::sqrt(kLambda);
    Vec2 v = v0;
    double acc = std::log(v.norm());
    v.normalize();
    tr.log_norms.push_back(acc);
    for (int m = 1; m <= n; ++m) {
        v = isl * (eval_B(static_cast<double>(lambda_pow_times(-m, k))) * v);
        double nr = v.norm();
        acc += std::log(nr);
        v /= nr;
        tr.log_norms.push_back(acc);
    }
    std::tie(tr.slope, tr.residual_band) = fit_slope(tr.log_norms, tr.log_norms.size() / 2);
    return tr;
}

double line_angle(const Vec2& a, const Vec2& b)
{
    Vec2 r = a - b * (b.dot(a) / b.squaredNorm());
    return std::asin(std::min(1.0, r.norm() / a.norm()));
}

ContractingDirection contracting_direction(double k, int n)
{
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    const double sl = std::sqrt(kLambda);
    auto pull = [&](int steps) {
        Vec2 w(1.0, -kLambda);
        w.normalize();
        for (int m = steps; m >= 1; --m) {
            cplx p = eval_p(static_cast<double>(lambda_pow_times(-m, k)));
            w = sl * (B_inverse_from_p(p, m) * w);
            w.normalize();
        }
        return phase_normalise(w);
    };
    // log cond = 2 log sigma_max - log |det|, with det known exactly from p
    Mat2 acc = Mat2::Identity();
    double log_scale = 0.0, log_det = 0.0;
    for (int m = 1; m <= n; ++m) {
        cplx p = eval_p(static_cast<double>(lambda_pow_times(-m, k)));
        if (std::abs(p) < kSingularTol) throw SingularStep("near-singular step at m = " + std::to_string(m), m);
        acc = B_from_p(p) * acc;
        double nr = acc.norm();
        acc /= nr;
        log_scale += std::log(nr);
        log_det += std::log(std::abs(p));
    }
    double log_smax = log_scale + std::log(Eigen::JacobiSVD<Mat2>(acc).singularValues()(0));
    double cond = std::exp(2.0 * log_smax - log_det);
    if (!(cond * 2.220446049250313e-16 <= 1e4))
        throw IllConditioned("accumulated product has condition number " + std::to_string(cond) +
                                 "; use the extended-precision variant",
                             cond);
    ContractingDirection r;
    r.direction = pull(n);
    r.condition = cond;
    r.pullback_angle = n > 1 ? line_angle(r.direction, pull(n - 1)) : 0.0;
    return r;
}

Vec2 contracting_direction_hp(double k, int n)
{
    auto t = hp_inward_args(k, n);
    auto [a, b] = hp_pullback(t, n);
    Vec2 v(cplx(a.re.convert_to<double>(), a.im.convert_to<double>()),
           cplx(b.re.convert_to<double>(), b.im.convert_to<double>()));
    return phase_normalise(v);
}

LyapunovTrace inward_lyapunov_contracting(double k, int n)
{
    auto t = hp_inward_args(k, n);
    auto [a, b] = hp_pullback(t, n);
    const HP isl = 1 / sqrt(hp_lambda());
    LyapunovTrace tr;
    tr.k = k;
    tr.log_norms.push_back(0.0);
    double acc = 0.0;
    for (int m = 1; m <= n; ++m) {
        HC p = hp_p(t[m]);
        HC na = hadd(a, b), nb = hmul(p, a);
        HP s = sqrt(hnorm2(na) + hnorm2(nb));
        acc += (log(s * isl)).convert_to<double>();
        a = {na.re / s, na.im / s};
        b = {nb.re / s, nb.im / s};
        tr.log_norms.push_back(acc);
    }
    std::tie(tr.slope, tr.residual_band) = fit_slope(tr.log_norms, tr.log_norms.size() / 2);
    return tr;
}

OutwardReport outward_lyapunov(double k, long n, bool keep_trace)
{
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    OutwardReport r;
    r.k = k;
    r.n = n;
    ExactOrbit orb(k, n);
    Mat2 P = Mat2::Identity(), Q = Mat2::Identity();
    double lp = 0.0, lq = 0.0, det = 0.0;
    for (long l = 0; l < n; ++l) {
        cplx p = eval_p_lift(orb.x(), orb.y());
        Mat2 binv = B_inverse_from_p(p, l);
        P = P * B_from_p(p);
        Q = binv * Q;
        double np = P.norm(), nq = Q.norm();
        P /= np;
        Q /= nq;
        lp += std::log(np);
        lq += std::log(nq);
        det += std::log(std::abs(p));
        if (keep_trace) r.log_norms.push_back(lp);
        orb.advance();
    }
    const double dn = static_cast<double>(n);
    const double half_log = 0.5 * std::log(kLambda);
    double sp = std::log(Eigen::JacobiSVD<Mat2>(P).singularValues()(0)) + lp;
    double sq = std::log(Eigen::JacobiSVD<Mat2>(Q).singularValues()(0)) + lq;
    r.chi1_tilde = -sp / dn;
    r.chi2_tilde = sq / dn;
    r.chi1 = half_log + r.chi1_tilde;
    r.chi2 = half_log + r.chi2_tilde;
    r.det_term = -det / dn;
    r.consistency = r.chi1 + r.chi2 - std::log(kLambda) - r.det_term;
    return r;
}

}  // namespace nonpv
