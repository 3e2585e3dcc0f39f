// Exact arithmetic in Z[lambda] and Q(lambda), lambda^2 = lambda + 3.
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include <boost/multiprecision/gmp.hpp>
#include <json.hpp>

namespace nonpv {

using BigInt = boost::multiprecision::mpz_int;

/**
 * Integer with an inline machine-word fast path.
 *
 * Values whose magnitude fits below 2^small_bits() stay inline; anything
 * larger is held as an immutable GMP integer. The threshold is adjustable
 * (1..63) so the bignum path can be exercised with small numbers.
 */
class Integer {
public:
    Integer() = default;
    Integer(long long v);
    Integer(long v) : Integer(static_cast<long long>(v)) {}
    Integer(int v) : Integer(static_cast<long long>(v)) {}
    Integer(unsigned v) : Integer(static_cast<long long>(v)) {}
    explicit Integer(const BigInt& v);

    static Integer parse(std::string_view s);

    static int small_bits();
    static void set_small_bits(int bits);

    bool is_small() const { return !big_; }
    int sign() const;
    bool is_zero() const { return is_small() && small_ == 0; }
    bool fits_int64() const;
    long long to_int64() const;  // throws if it does not fit
    long double to_long_double() const;
    BigInt to_big() const;
    std::string str() const;
    std::size_t bit_length() const;

    Integer operator-() const;
    friend Integer operator+(const Integer& x, const Integer& y);
    friend Integer operator-(const Integer& x, const Integer& y);
    friend Integer operator*(const Integer& x, const Integer& y);
    // truncating division and remainder (C semantics)
    friend Integer operator/(const Integer& x, const Integer& y);
    friend Integer operator%(const Integer& x, const Integer& y);
    Integer& operator+=(const Integer& y) { return *this = *this + y; }
    Integer& operator-=(const Integer& y) { return *this = *this - y; }
    Integer& operator*=(const Integer& y) { return *this = *this * y; }

    friend bool operator==(const Integer& x, const Integer& y);
    friend std::strong_ordering operator<=>(const Integer& x, const Integer& y);

    friend Integer abs(const Integer& x) { return x.sign() < 0 ? -x : x; }
    // floor-mod into [0, |m|)
    friend Integer mod(const Integer& x, const Integer& m);
    // gcd(0, k) = |k|
    friend Integer gcd(const Integer& x, const Integer& y);
    // exact quotient; throws std::domain_error if y does not divide x
    friend Integer exact_div(const Integer& x, const Integer& y);

    friend std::ostream& operator<<(std::ostream& os, const Integer& x);

private:
    static Integer normalize(BigInt v);
    static bool in_small_range(long long v);

    long long small_ = 0;
    std::shared_ptr<const BigInt> big_;
};

/// Reduced fraction with positive denominator.
class Rational {
public:
    Rational() : den_(1) {}
    Rational(const Integer& n) : num_(n), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(int n) : num_(n), den_(1) {}
    Rational(const Integer& n, const Integer& d);

    static Rational parse(std::string_view s);  // "p" or "p/q"

    const Integer& num() const { return num_; }
    const Integer& den() const { return den_; }
    int sign() const { return num_.sign(); }
    bool is_zero() const { return num_.is_zero(); }
    bool is_integer() const { return den_ == Integer(1); }
    long double to_long_double() const;
    std::string str() const;

    Rational operator-() const;
    Rational inverse() const;
    friend Rational operator+(const Rational& x, const Rational& y);
    friend Rational operator-(const Rational& x, const Rational& y);
    friend Rational operator*(const Rational& x, const Rational& y);
    friend Rational operator/(const Rational& x, const Rational& y);
    Rational& operator+=(const Rational& y) { return *this = *this + y; }
    Rational& operator-=(const Rational& y) { return *this = *this - y; }
    Rational& operator*=(const Rational& y) { return *this = *this * y; }

    friend bool operator==(const Rational& x, const Rational& y) = default;
    friend std::strong_ordering operator<=>(const Rational& x, const Rational& y);
    friend std::ostream& operator<<(std::ostream& os, const Rational& x);

private:
    Integer num_;
    Integer den_;
};

/// Sign of X + Y*sqrt(13), exact.
int sign_sqrt13(const Integer& x, const Integer& y);

/// a + b*lambda with integer a, b.
class ZLambda {
public:
    ZLambda() = default;
    ZLambda(const Integer& a, const Integer& b = Integer(0)) : a_(a), b_(b) {}
    ZLambda(long long a, long long b) : a_(a), b_(b) {}

    static ZLambda lambda() { return ZLambda(0, 1); }

    const Integer& a() const { return a_; }
    const Integer& b() const { return b_; }

    int sign() const { return sign_sqrt13(a_ + a_ + b_, b_); }
    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    double to_double() const { return static_cast<double>(to_long_double()); }
    long double to_long_double() const;
    ZLambda conj() const;           // lambda -> 1 - lambda
    Integer norm() const;           // a^2 + ab - 3b^2
    ZLambda abs() const { return sign() < 0 ? -*this : *this; }
    std::string str() const;        // "a+b*l"

    ZLambda operator-() const { return {-a_, -b_}; }
    friend ZLambda operator+(const ZLambda& x, const ZLambda& y) { return {x.a_ + y.a_, x.b_ + y.b_}; }
    friend ZLambda operator-(const ZLambda& x, const ZLambda& y) { return {x.a_ - y.a_, x.b_ - y.b_}; }
    friend ZLambda operator*(const ZLambda& x, const ZLambda& y);
    ZLambda& operator+=(const ZLambda& y) { return *this = *this + y; }
    ZLambda& operator-=(const ZLambda& y) { return *this = *this - y; }
    ZLambda& operator*=(const ZLambda& y) { return *this = *this * y; }

    /// Exact quotient in Z[lambda] if it exists.
    friend std::optional<ZLambda> divide(const ZLambda& x, const ZLambda& y);

    friend bool operator==(const ZLambda& x, const ZLambda& y) = default;
    /// Order of real values.
    friend std::strong_ordering operator<=>(const ZLambda& x, const ZLambda& y);
    friend std::ostream& operator<<(std::ostream& os, const ZLambda& x);

private:
    Integer a_;
    Integer b_;
};

ZLambda zl_mul(const ZLambda& x, const ZLambda& y);
ZLambda zl_pow(const ZLambda& x, unsigned n);
/// Compare |x| with |y|.
std::strong_ordering compare_abs(const ZLambda& x, const ZLambda& y);

/// p + q*lambda with rational p, q.
class QLambda {
public:
    QLambda() = default;
    QLambda(const Rational& p, const Rational& q = Rational(0)) : p_(p), q_(q) {}
    QLambda(long long p) : p_(p) {}
    QLambda(const ZLambda& z) : p_(z.a()), q_(z.b()) {}

    static QLambda lambda() { return QLambda(Rational(0), Rational(1)); }
    /// lambda^n for any integer n.
    static QLambda lambda_pow(int n);

    const Rational& p() const { return p_; }
    const Rational& q() const { return q_; }

    int sign() const;
    bool is_zero() const { return p_.is_zero() && q_.is_zero(); }
    double to_double() const { return static_cast<double>(to_long_double()); }
    long double to_long_double() const;
    QLambda conj() const;
    Rational norm() const;
    QLambda inverse() const;  // throws std::domain_error on zero
    std::optional<ZLambda> to_zlambda() const;
    std::string str() const;

    QLambda operator-() const { return {-p_, -q_}; }
    friend QLambda operator+(const QLambda& x, const QLambda& y) { return {x.p_ + y.p_, x.q_ + y.q_}; }
    friend QLambda operator-(const QLambda& x, const QLambda& y) { return {x.p_ - y.p_, x.q_ - y.q_}; }
    friend QLambda operator*(const QLambda& x, const QLambda& y);
    friend QLambda operator/(const QLambda& x, const QLambda& y) { return x * y.inverse(); }
    QLambda& operator+=(const QLambda& y) { return *this = *this + y; }
    QLambda& operator-=(const QLambda& y) { return *this = *this - y; }
    QLambda& operator*=(const QLambda& y) { return *this = *this * y; }

    friend bool operator==(const QLambda& x, const QLambda& y) = default;
    friend std::strong_ordering operator<=>(const QLambda& x, const QLambda& y);
    friend std::ostream& operator<<(std::ostream& os, const QLambda& x);

private:
    Rational p_;
    Rational q_;
};

struct PFData {
    double lambda;
    double lambda_conj;
    std::array<std::array<int, 2>, 2> subst_matrix;
    std::array<double, 2> right_pf;   // (nu0, nu1), sums to 1
    std::array<double, 2> left_pf;    // (lambda, 1)
    double density;
    QLambda lambda_exact;
    std::array<QLambda, 2> right_pf_exact;
    QLambda density_exact;
};

const PFData& pf_data();

/// lambda^n = a_n*lambda + b_n with (a_n, b_n)^t = M^n (0,1)^t.
std::pair<Rational, Rational> lambda_power_coeffs(int n);

struct GcdReport {
    bool ok = true;
    int n_max = 0;
    std::optional<int> violation;
    std::string message;
};

GcdReport gcd_facts_check(int n_max);

/// Decimal expansion of sqrt(13), 100 digits.
extern const char* const kSqrt13Digits;
constexpr double kLambda = 2.3027756377319946;
constexpr long double kLambdaL = 2.302775637731994646559610633735247973L;

void to_json(nlohmann::json& j, const Integer& x);
void from_json(const nlohmann::json& j, Integer& x);
void to_json(nlohmann::json& j, const ZLambda& x);
void from_json(const nlohmann::json& j, ZLambda& x);

}  // namespace nonpv
