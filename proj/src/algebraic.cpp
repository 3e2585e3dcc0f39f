#include "nonpv/algebraic.hpp"

#include <atomic>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace nonpv {

const char* const kSqrt13Digits =
    "3.605551275463989293119221267470495946251296573845246212710453056227166948293010445204619082018490717";

namespace {
std::atomic<int> g_small_bits{63};

unsigned long long magnitude(long long v)
{
    return v < 0 ? 0ull - static_cast<unsigned long long>(v) : static_cast<unsigned long long>(v);
}
}  // namespace

// ---------------------------------------------------------------- Integer

int Integer::small_bits() { return g_small_bits.load(std::memory_order_relaxed); }

void Integer::set_small_bits(int bits)
{
    if (bits < 1 || bits > 63) throw std::invalid_argument("small_bits must lie in [1, 63]");
    g_small_bits.store(bits, std::memory_order_relaxed);
}

bool Integer::in_small_range(long long v)
{
    return magnitude(v) < (1ull << small_bits());
}

Integer::Integer(long long v)
{
    if (in_small_range(v)) {
        small_ = v;
    } else {
        big_ = std::make_shared<const BigInt>(v);
    }
}

Integer::Integer(const BigInt& v) { *this = normalize(v); }

Integer Integer::normalize(BigInt v)
{
    Integer r;
    if (mpz_fits_slong_p(v.backend().data())) {
        long long s = mpz_get_si(v.backend().data());
        if (in_small_range(s)) {
            r.small_ = s;
            return r;
        }
    }
    r.big_ = std::make_shared<const BigInt>(std::move(v));
    return r;
}

Integer Integer::parse(std::string_view s)
{
    std::string t(s);
    if (t.empty()) throw std::invalid_argument("empty integer literal");
    try {
        return Integer(BigInt(t));
    } catch (const std::exception&) {
        throw std::invalid_argument("bad integer literal: " + t);
    }
}

int Integer::sign() const
{
    if (big_) return big_->sign();
    return (small_ > 0) - (small_ < 0);
}

bool Integer::fits_int64() const
{
    return !big_ || mpz_fits_slong_p(big_->backend().data());
}

long long Integer::to_int64() const
{
    if (!big_) return small_;
    if (!fits_int64()) throw std::overflow_error("Integer does not fit in 64 bits");
    return mpz_get_si(big_->backend().data());
}

long double Integer::to_long_double() const
{
    if (!big_) return static_cast<long double>(small_);
    return big_->convert_to<long double>();
}

BigInt Integer::to_big() const { return big_ ? *big_ : BigInt(small_); }

std::string Integer::str() const { return big_ ? big_->str() : std::to_string(small_); }

std::size_t Integer::bit_length() const
{
    if (is_zero()) return 0;
    if (!big_) return 64 - static_cast<std::size_t>(__builtin_clzll(magnitude(small_)));
    return mpz_sizeinbase(big_->backend().data(), 2);
}

Integer Integer::operator-() const
{
    if (!big_) return Integer(-small_);
    return normalize(-*big_);
}

Integer operator+(const Integer& x, const Integer& y)
{
    if (!x.big_ && !y.big_) {
        long long r;
        if (!__builtin_add_overflow(x.small_, y.small_, &r)) return Integer(r);
    }
    return Integer::normalize(x.to_big() + y.to_big());
}

Integer operator-(const Integer& x, const Integer& y)
{
    if (!x.big_ && !y.big_) {
        long long r;
        if (!__builtin_sub_overflow(x.small_, y.small_, &r)) return Integer(r);
    }
    return Integer::normalize(x.to_big() - y.to_big());
}

Integer operator*(const Integer& x, const Integer& y)
{
    if (!x.big_ && !y.big_) {
        long long r;
        if (!__builtin_mul_overflow(x.small_, y.small_, &r)) return Integer(r);
    }
    return Integer::normalize(x.to_big() * y.to_big());
}

Integer operator/(const Integer& x, const Integer& y)
{
    if (y.is_zero()) throw std::domain_error("integer division by zero");
    if (!x.big_ && !y.big_ && !(x.small_ == INT64_MIN && y.small_ == -1)) return Integer(x.small_ / y.small_);
    return Integer::normalize(x.to_big() / y.to_big());
}

Integer operator%(const Integer& x, const Integer& y)
{
    if (y.is_zero()) throw std::domain_error("integer division by zero");
    if (!x.big_ && !y.big_ && y.small_ != -1) return Integer(x.small_ % y.small_);
    return Integer::normalize(x.to_big() % y.to_big());
}

bool operator==(const Integer& x, const Integer& y)
{
    if (!x.big_ && !y.big_) return x.small_ == y.small_;
    return x.to_big() == y.to_big();
}

std::strong_ordering operator<=>(const Integer& x, const Integer& y)
{
    if (!x.big_ && !y.big_) return x.small_ <=> y.small_;
    int c = x.to_big().compare(y.to_big());
    return c < 0 ? std::strong_ordering::less : c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

Integer mod(const Integer& x, const Integer& m)
{
    Integer r = x % m;
    if (r.sign() < 0) r += abs(m);
    return r;
}

Integer gcd(const Integer& x, const Integer& y)
{
    if (!x.big_ && !y.big_) {
        unsigned long long a = magnitude(x.small_), b = magnitude(y.small_);
        while (b != 0) {
            unsigned long long t = a % b;
            a = b;
            b = t;
        }
        if (a <= static_cast<unsigned long long>(INT64_MAX)) return Integer(static_cast<long long>(a));
    }
    BigInt r;
    mpz_gcd(r.backend().data(), x.to_big().backend().data(), y.to_big().backend().data());
    return Integer::normalize(std::move(r));
}

Integer exact_div(const Integer& x, const Integer& y)
{
    if (y.is_zero()) throw std::domain_error("integer division by zero");
    if (!x.big_ && !y.big_ && y.small_ != -1) {
        if (x.small_ % y.small_ != 0) throw std::domain_error("inexact integer division");
        return Integer(x.small_ / y.small_);
    }
    BigInt bx = x.to_big(), by = y.to_big();
    if (!mpz_divisible_p(bx.backend().data(), by.backend().data())) throw std::domain_error("inexact integer division");
    BigInt q;
    mpz_divexact(q.backend().data(), bx.backend().data(), by.backend().data());
    return Integer::normalize(std::move(q));
}

std::ostream& operator<<(std::ostream& os, const Integer& x) { return os << x.str(); }

// ---------------------------------------------------------------- Rational

Rational::Rational(const Integer& n, const Integer& d)
{
    if (d.is_zero()) throw std::domain_error("zero denominator");
    Integer g = gcd(n, d);
    if (g.is_zero()) g = Integer(1);
    num_ = exact_div(n, g);
    den_ = exact_div(d, g);
    if (den_.sign() < 0) {
        num_ = -num_;
        den_ = -den_;
    }
}

Rational Rational::parse(std::string_view s)
{
    auto slash = s.find('/');
    if (slash == std::string_view::npos) return Rational(Integer::parse(s));
    return Rational(Integer::parse(s.substr(0, slash)), Integer::parse(s.substr(slash + 1)));
}

long double Rational::to_long_double() const
{
    if (num_.is_small() && den_.is_small()) return num_.to_long_double() / den_.to_long_double();
    boost::multiprecision::mpq_rational q(num_.to_big(), den_.to_big());
    return q.convert_to<long double>();
}

std::string Rational::str() const
{
    if (is_integer()) return num_.str();
    return num_.str() + "/" + den_.str();
}

Rational Rational::operator-() const
{
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
}

Rational Rational::inverse() const
{
    if (is_zero()) throw std::domain_error("inverse of zero");
    return Rational(den_, num_);
}

Rational operator+(const Rational& x, const Rational& y)
{
    if (x.den_ == y.den_) return Rational(x.num_ + y.num_, x.den_);
    return Rational(x.num_ * y.den_ + y.num_ * x.den_, x.den_ * y.den_);
}

Rational operator-(const Rational& x, const Rational& y) { return x + (-y); }

Rational operator*(const Rational& x, const Rational& y)
{
    if (x.is_zero() || y.is_zero()) return Rational();
    return Rational(x.num_ * y.num_, x.den_ * y.den_);
}

Rational operator/(const Rational& x, const Rational& y) { return x * y.inverse(); }

std::strong_ordering operator<=>(const Rational& x, const Rational& y)
{
    return x.num_ * y.den_ <=> y.num_ * x.den_;
}

std::ostream& operator<<(std::ostream& os, const Rational& x) { return os << x.str(); }

// ---------------------------------------------------------------- ZLambda

int sign_sqrt13(const Integer& x, const Integer& y)
{
    int sx = x.sign(), sy = y.sign();
    if (sy == 0) return sx;
    if (sx == 0 || sx == sy) return sy;
    // opposite signs: compare x^2 with 13 y^2
    auto c = x * x <=> Integer(13) * y * y;
    return c > 0 ? sx : sy;
}

namespace {
// v = a + b*lambda in long double; uses the norm form when the two terms cancel
long double embed(long double a, long double b, bool cancel, long double norm)
{
    if (!cancel) return a + b * kLambdaL;
    return norm / ((a + b) - b * kLambdaL);
}
}  // namespace

long double ZLambda::to_long_double() const
{
    bool cancel = a_.sign() * b_.sign() < 0;
    return embed(a_.to_long_double(), b_.to_long_double(), cancel, cancel ? norm().to_long_double() : 0.0L);
}

ZLambda ZLambda::conj() const { return {a_ + b_, -b_}; }

Integer ZLambda::norm() const { return a_ * a_ + a_ * b_ - Integer(3) * b_ * b_; }

std::string ZLambda::str() const
{
    std::string s = a_.str();
    if (b_.sign() >= 0) s += "+";
    return s + b_.str() + "*l";
}

ZLambda operator*(const ZLambda& x, const ZLambda& y)
{
    Integer bb = x.b_ * y.b_;
    return {x.a_ * y.a_ + Integer(3) * bb, x.a_ * y.b_ + x.b_ * y.a_ + bb};
}

std::optional<ZLambda> divide(const ZLambda& x, const ZLambda& y)
{
    if (y.is_zero()) throw std::domain_error("division by zero in Z[lambda]");
    Integer n = y.norm();
    ZLambda t = x * y.conj();
    if (!(t.a_ % n).is_zero() || !(t.b_ % n).is_zero()) return std::nullopt;
    return ZLambda(exact_div(t.a_, n), exact_div(t.b_, n));
}

std::strong_ordering operator<=>(const ZLambda& x, const ZLambda& y)
{
    int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const ZLambda& x) { return os << x.str(); }

ZLambda zl_mul(const ZLambda& x, const ZLambda& y) { return x * y; }

ZLambda zl_pow(const ZLambda& x, unsigned n)
{
    ZLambda r(1, 0), base = x;
    while (n) {
        if (n & 1u) r *= base;
        base *= base;
        n >>= 1;
    }
    return r;
}

std::strong_ordering compare_abs(const ZLambda& x, const ZLambda& y) { return x.abs() <=> y.abs(); }

// ---------------------------------------------------------------- QLambda

QLambda QLambda::lambda_pow(int n)
{
    auto [a, b] = lambda_power_coeffs(n);
    return QLambda(b, a);
}

int QLambda::sign() const
{
    // 2*pd*qd*(p + q*lambda) = X + Y*sqrt(13)
    const Integer& pn = p_.num();
    const Integer& pd = p_.den();
    const Integer& qn = q_.num();
    const Integer& qd = q_.den();
    Integer x = Integer(2) * pn * qd + qn * pd;
    Integer y = qn * pd;
    return sign_sqrt13(x, y);
}

long double QLambda::to_long_double() const
{
    bool cancel = p_.sign() * q_.sign() < 0;
    return embed(p_.to_long_double(), q_.to_long_double(), cancel, cancel ? norm().to_long_double() : 0.0L);
}

QLambda QLambda::conj() const { return {p_ + q_, -q_}; }

Rational QLambda::norm() const { return p_ * p_ + p_ * q_ - Rational(3) * q_ * q_; }

QLambda QLambda::inverse() const
{
    if (is_zero()) throw std::domain_error("inverse of zero in Q(lambda)");
    Rational n = norm().inverse();
    QLambda c = conj();
    return {c.p_ * n, c.q_ * n};
}

std::optional<ZLambda> QLambda::to_zlambda() const
{
    if (!p_.is_integer() || !q_.is_integer()) return std::nullopt;
    return ZLambda(p_.num(), q_.num());
}

std::string QLambda::str() const
{
    std::string s = p_.str();
    if (q_.sign() >= 0) s += "+";
    return s + "(" + q_.str() + ")*l";
}

QLambda operator*(const QLambda& x, const QLambda& y)
{
    Rational qq = x.q_ * y.q_;
    return {x.p_ * y.p_ + Rational(3) * qq, x.p_ * y.q_ + x.q_ * y.p_ + qq};
}

std::strong_ordering operator<=>(const QLambda& x, const QLambda& y)
{
    int s = (x - y).sign();
    return s < 0 ? std::strong_ordering::less : s > 0 ? std::strong_ordering::greater : std::strong_ordering::equal;
}

std::ostream& operator<<(std::ostream& os, const QLambda& x) { return os << x.str(); }

// ---------------------------------------------------------------- PF data

const PFData& pf_data()
{
    static const PFData data = [] {
        PFData d;
        d.lambda_exact = QLambda::lambda();
        d.lambda = kLambda;
        d.lambda_conj = static_cast<double>(1.0L - kLambdaL);
        d.subst_matrix = {{{1, 1}, {3, 0}}};
        d.right_pf_exact = {QLambda(Rational(-1, 3), Rational(1, 3)), QLambda(Rational(4, 3), Rational(-1, 3))};
        d.right_pf = {d.right_pf_exact[0].to_double(), d.right_pf_exact[1].to_double()};
        d.left_pf = {kLambda, 1.0};
        d.density_exact = QLambda(Rational(6, 13), Rational(1, 13));
        d.density = d.density_exact.to_double();
        return d;
    }();
    return data;
}

std::pair<Rational, Rational> lambda_power_coeffs(int n)
{
    Rational a(0), b(1);
    if (n >= 0) {
        for (int i = 0; i < n; ++i) {
            Rational na = a + b;
            b = Rational(3) * a;
            a = na;
        }
    } else {
        const Rational third(1, 3);
        for (int i = 0; i < -n; ++i) {
            Rational na = b * third;
            b = a - b * third;
            a = na;
        }
    }
    return {a, b};
}

GcdReport gcd_facts_check(int n_max)
{
    GcdReport rep;
    rep.n_max = n_max;
    if (n_max < 1) {
        rep.ok = false;
        rep.message = "n_max must be >= 1";
        return rep;
    }
    // a_{n+1} = a_n + 3 a_{n-1}, b_n = 3 a_{n-1}
    std::vector<Integer> a(n_max + 2), b(n_max + 2);
    a[0] = 0;
    b[0] = 1;
    for (int n = 0; n <= n_max; ++n) {
        a[n + 1] = a[n] + b[n];
        b[n + 1] = Integer(3) * a[n];
    }
    const Integer one(1), three(3);
    for (int n = 1; n <= n_max; ++n) {
        std::ostringstream why;
        if (mod(a[n], three) != one) {
            why << "a_" << n << " = " << a[n] << " is not 1 mod 3";
        } else if (!mod(b[n], three).is_zero()) {
            why << "b_" << n << " = " << b[n] << " is not 0 mod 3";
        } else if (gcd(a[n], a[n + 1]) != one) {
            why << "gcd(a_" << n << ", a_" << n + 1 << ") = " << gcd(a[n], a[n + 1]);
        } else if (gcd(b[n], b[n + 1]) != three) {
            why << "gcd(b_" << n << ", b_" << n + 1 << ") = " << gcd(b[n], b[n + 1]);
        }
        if (!why.str().empty()) {
            rep.ok = false;
            rep.violation = n;
            rep.message = why.str();
            return rep;
        }
    }
    rep.message = "all facts hold for 1 <= n <= " + std::to_string(n_max);
    return rep;
}

// ---------------------------------------------------------------- json

void to_json(nlohmann::json& j, const Integer& x)
{
    constexpr long long safe = 1ll << 53;
    if (x.fits_int64()) {
        long long v = x.to_int64();
        if (v <= safe && v >= -safe) {
            j = v;
            return;
        }
    }
    j = x.str();
}

void from_json(const nlohmann::json& j, Integer& x)
{
    if (j.is_number_integer()) {
        x = Integer(j.get<long long>());
    } else if (j.is_string()) {
        x = Integer::parse(j.get<std::string>());
    } else {
        throw std::invalid_argument("integer must be a JSON integer or decimal string");
    }
}

void to_json(nlohmann::json& j, const ZLambda& x) { j = nlohmann::json{{"a", x.a()}, {"b", x.b()}}; }

void from_json(const nlohmann::json& j, ZLambda& x)
{
    x = ZLambda(j.at("a").get<Integer>(), j.at("b").get<Integer>());
}

}  // namespace nonpv
