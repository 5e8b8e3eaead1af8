#ifndef VFREE_PADIC_HPP
#define VFREE_PADIC_HPP

#include <vector>

#include <gmpxx.h>

#include "vfree/numeric.hpp"
#include "vfree/parallel.hpp"

namespace vfree {

using num::u64;

// A p-adic value p^e * u with integer valuation e (possibly negative) and
// unit part u known modulo p^w. The zero marker stands for a value that is
// zero in every tracked digit. Results of arithmetic always declare the
// precision they actually carry; precision is never silently lost.
class PAdicNumber {
public:
    static PAdicNumber zero(u64 p, u64 w);
    PAdicNumber(u64 p, long long valuation, mpz_class unit, u64 w);
    static PAdicNumber from_integer(const mpz_class& x, u64 p, u64 w);
    static PAdicNumber from_rational(const mpq_class& x, u64 p, u64 w);

    bool is_zero() const { return zero_; }
    long long valuation() const; // throws on the zero marker
    const mpz_class& unit() const { return unit_; }
    u64 precision() const { return w_; }
    u64 prime() const { return p_; }

    PAdicNumber mul(const PAdicNumber& o) const;
    PAdicNumber div(const PAdicNumber& o) const;
    // Addition anchors absolute precision at the smaller valuation; digit
    // cancellation reduces the declared precision of the result accordingly.
    PAdicNumber add(const PAdicNumber& o) const;

    // Value mod p^alpha as a residue in [0, p^alpha). Requires valuation >= 0
    // and enough known digits (valuation + w >= alpha).
    mpz_class residue(u64 alpha) const;

private:
    PAdicNumber() = default;
    u64 p_ = 2;
    long long val_ = 0;
    mpz_class unit_ = 0;
    u64 w_ = 0;
    bool zero_ = false;
};

// n! as a PAdicNumber: valuation by Legendre's formula, unit part by the
// factorial decomposition n! = p^{floor(n/p)} * (floor(n/p))! * prod of the
// p-free factors up to n, applied recursively.
PAdicNumber padic_factorial(u64 n, u64 p, u64 w);

// Unit parts of n! mod p^w for every n <= max_n, built by one pass of running
// products of p-stripped integers. The parallel path computes per-block
// products first and stitches them with a prefix scan.
class FactorialUnits {
public:
    FactorialUnits(u64 p, u64 w, u64 max_n, Exec exec = Exec::parallel);
    const mpz_class& unit(u64 n) const { return units_.at(n); }
    u64 max_index() const { return units_.size() - 1; }
    const mpz_class& modulus() const { return mod_; }

private:
    std::vector<mpz_class> units_;
    mpz_class mod_;
};

} // namespace vfree

#endif
