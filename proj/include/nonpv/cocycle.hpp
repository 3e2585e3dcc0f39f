// Fourier matrices B(k), A(k) = B(k) (x) conj B(k), and their algebraic structure.
#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nonpv/algebraic.hpp"

namespace nonpv {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat4 = Eigen::Matrix4cd;
using RMat4 = Eigen::Matrix4d;
using RMat8 = Eigen::Matrix<double, 8, 8>;
using Vec2 = Eigen::Vector2cd;
using RVec4 = Eigen::Vector4d;

/// Raised when |p| < kSingularTol along an orbit.
class SingularStep : public std::runtime_error {
public:
    SingularStep(const std::string& what, long step) : std::runtime_error(what), step(step) {}
    long step;
};

constexpr double kSingularTol = 1e-8;

/// Trigonometric polynomial k -> sum c * exp(2 pi i k f), frequencies in Z[lambda].
struct TrigPoly {
    std::vector<std::pair<ZLambda, cplx>> terms;
    cplx operator()(double k) const;
    static TrigPoly p();
};

/// p(k) = e^{2 pi i k (lambda+1)} (1 + 2 cos 2 pi k).
cplx eval_p(double k);
/// p evaluated from fractional parts: fx = frac(lambda k), fy = frac(k).
cplx eval_p_lift(double x, double y);
inline cplx z_of_k(double k) { return 3.0 - eval_p(k); }
inline double c_of_k(double k) { return eval_p(k).real(); }
inline double s_of_k(double k) { return eval_p(k).imag(); }

Eigen::Matrix2i digit_matrix_0();       // [[1,1],[0,0]]
Eigen::Matrix2i digit_matrix_lambda();  // [[0,0],[1,0]]

inline Mat2 B_from_p(cplx p)
{
    Mat2 b;
    b << 1.0, 1.0, p, 0.0;
    return b;
}
Mat2 eval_B(double k);
Mat2 eval_B_lift(double x, double y);
/// B^{-1} = [[0, 1/p], [1, -1/p]]; throws SingularStep for |p| < kSingularTol.
Mat2 B_inverse_from_p(cplx p, long step = 0);
Mat4 eval_A(double k);
Mat4 kron(const Mat2& x, const Mat2& y);
Mat4 U_matrix();
/// U A(k) U^{-1}, real.
RMat4 eval_AU(double k);
/// The same from c(k), s(k) directly.
RMat4 eval_AU_closed(double k);

/// Dimension of the unital algebra spanned by words of length <= max_word_len in D0, D_lambda (exact).
int ida_dimension(int max_word_len);
/// Complex dimension of the unital algebra spanned by words in the given matrices.
int ida_dimension_numeric(const std::vector<Mat2>& generators, int max_word_len, double tol = 1e-10);

/// Real-linear 8x8 form of a complex 4x4 matrix acting on (Re w, Im w).
RMat8 realify(const Mat4& a);
/// C(x (x) y) = conj(y) (x) conj(x) as an 8x8 real map.
RMat8 C_real_map();

double commutator_C_residual(double k);
double u_realness_residual(double k);
/// Max residual of idempotence, complementarity and A(k)-invariance of (1 +- C)/2.
double projector_residual(double k);

struct KronAlgebraReport {
    int dimension = 0;
    double max_commutator_residual = 0.0;
    double max_u_realness_residual = 0.0;
};
/// Real dimension of the real algebra generated by {A(k)} in the 32-dim ambient.
KronAlgebraReport kron_algebra_real_dimension(const std::vector<double>& samples, double tol = 1e-8);

RMat4 AU_pair(double k);  // A_U(k / lambda) A_U(k)

/// Smallest k > 0 where an entry of A_U(k/lambda) A_U(k) vanishes.
double positivity_threshold(double scan_step = 1e-4, double upper = 0.1);

RVec4 w_pf();  // v_PF (x) v_PF, unit length

struct BlowupTrace {
    std::vector<RVec4> directions;  // unit vectors after each double step
    std::vector<double> log_norms;  // cumulative log of the norm
    double fitted_slope = 0.0;      // per double step
    double final_angle = 0.0;       // angle to w_PF
};
BlowupTrace blowup_iteration(double k, const RVec4& w0, int n);

struct CorollaryTrace {
    std::vector<RVec4> scaled;  // k_m * w'_m with k_m = k0 / lambda^m
    double final_angle = 0.0;
};
/// w'_m = (1/lambda) A_U(k0 / lambda^m) w'_{m-1}.
CorollaryTrace blowup_corollary(double k0, const RVec4& w0, int m);

/// P_{-1}, P_0, ..., P_n at k.
std::vector<cplx> pn_sequence(double k, int n);
/// P_{-1} .. P_n at lambda^j k, with the powers lambda^(m+j) k formed exactly.
std::vector<cplx> pn_sequence_scaled(double k, int j, int n);
/// B(k) B(lambda k) ... B(lambda^{n-1} k).
Mat2 bn_product(double k, int n);
/// [[P_n(k), P_{n-1}(k)], [p(k) P_{n-1}(lambda k), p(k) P_{n-2}(lambda k)]].
Mat2 bn_from_pn(double k, int n);
/// lambda^m * k in long double through the exact coefficients of lambda^m.
long double lambda_pow_times(int m, long double k);

/// (1/n) log|det(B(k/lambda^n) ... B(k/lambda))|.
double det_limit_inward(double k, int n);
/// -(1/n) sum_{l<n} log|1 + 2 cos(2 pi lambda^l k)| along the exact orbit.
double det_limit_outward(double k, long n);
/// int_0^1 log|1 + e^{2 pi i t} + e^{4 pi i t}| dt.
double jensen_integral();

}  // namespace nonpv
