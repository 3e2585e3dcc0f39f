// Exact orbit of k under k -> lambda k, tracked modulo 1 in fixed point.
#pragma once

#include <gmp.h>

namespace nonpv {

/// Pairs (frac(lambda^{l+1} k), frac(lambda^l k)) for l = 0 .. steps, correct to double
/// precision. Fixed-point integers of P bits advance by (x, y) -> (x + 3y mod 2^P, x);
/// P shrinks as the remaining step count drops.
class ExactOrbit {
public:
    ExactOrbit(double k, long steps, int guard_bits = 96);
    ~ExactOrbit();
    ExactOrbit(const ExactOrbit&) = delete;
    ExactOrbit& operator=(const ExactOrbit&) = delete;

    double x() const;  // frac(lambda^{l+1} k)
    double y() const;  // frac(lambda^l k)
    long index() const { return index_; }
    long bits() const { return bits_; }
    void advance();

private:
    double top(const mpz_t v) const;
    void trim();

    mpz_t x_, y_, t_;
    long bits_;
    long steps_;
    long index_ = 0;
    int guard_;
};

}  // namespace nonpv
