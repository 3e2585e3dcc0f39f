#include "nonpv/orbit.hpp"

#include <cmath>
#include <stdexcept>

namespace nonpv {

namespace {

constexpr double kLog2Lambda = 1.2033407;  // log2 of lambda, rounded up

long needed_bits(long remaining, int guard)
{
    return static_cast<long>(std::ceil(static_cast<double>(remaining) * kLog2Lambda)) + guard;
}

// v <- floor(v * 2^shift) for signed shift
void shift(mpz_t v, long s)
{
    if (s >= 0)
        mpz_mul_2exp(v, v, static_cast<mp_bitcnt_t>(s));
    else
        mpz_fdiv_q_2exp(v, v, static_cast<mp_bitcnt_t>(-s));
}

}  // namespace

ExactOrbit::ExactOrbit(double k, long steps, int guard_bits) : steps_(steps), guard_(guard_bits)
{
    if (!std::isfinite(k)) throw std::invalid_argument("k must be finite");
    if (steps < 0) throw std::invalid_argument("steps must be non-negative");
    mpz_inits(x_, y_, t_, nullptr);
    bits_ = needed_bits(steps, guard_);

    int e = 0;
    double f = std::frexp(k, &e);
    mpz_set_d(t_, std::ldexp(f, 53));  // k = t * 2^(e - 53)
    const long kexp = e - 53;

    mpz_set(y_, t_);
    shift(y_, bits_ + kexp);
    mpz_fdiv_r_2exp(y_, y_, bits_);

    // lambda * 2^W = (2^W + sqrt(13 * 4^W)) / 2
    const long w = bits_ + 64 + std::max(0, e);
    mpz_t lam;
    mpz_init(lam);
    mpz_set_ui(lam, 13);
    mpz_mul_2exp(lam, lam, 2 * w);
    mpz_sqrt(lam, lam);
    mpz_t one;
    mpz_init_set_ui(one, 1);
    mpz_mul_2exp(one, one, w);
    mpz_add(lam, lam, one);
    mpz_fdiv_q_2exp(lam, lam, 1);
    mpz_mul(x_, lam, t_);
    shift(x_, bits_ + kexp - w);
    mpz_fdiv_r_2exp(x_, x_, bits_);
    mpz_clears(lam, one, nullptr);
}

ExactOrbit::~ExactOrbit() { mpz_clears(x_, y_, t_, nullptr); }

double ExactOrbit::top(const mpz_t v) const
{
    mpz_t& t = const_cast<mpz_t&>(t_);
    mpz_set(t, v);
    shift(t, 53 - bits_);
    return std::ldexp(mpz_get_d(t), -53);
}

double ExactOrbit::x() const { return top(x_); }
double ExactOrbit::y() const { return top(y_); }

void ExactOrbit::advance()
{
    // (x, y) <- (x + 3y, x) mod 2^P
    mpz_mul_ui(t_, y_, 3);
    mpz_add(t_, t_, x_);
    mpz_swap(y_, x_);
    mpz_fdiv_r_2exp(x_, t_, bits_);
    ++index_;
    if ((index_ & 63) == 0) trim();
}

void ExactOrbit::trim()
{
    long want = needed_bits(std::max(0L, steps_ - index_), guard_);
    if (want >= bits_ - 64) return;
    long drop = bits_ - want;
    mpz_fdiv_q_2exp(x_, x_, drop);
    mpz_fdiv_q_2exp(y_, y_, drop);
    bits_ = want;
}

}  // namespace nonpv
