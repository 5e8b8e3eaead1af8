#ifndef VFREE_NUMERIC_HPP
#define VFREE_NUMERIC_HPP

#include <cstdint>
#include <vector>

#include <gmpxx.h>

namespace vfree::num {

using u64 = std::uint64_t;
using i64 = std::int64_t;

bool is_prime(u64 n);

// Divisors of n in increasing order.
std::vector<u64> divisors(u64 n);

u64 totient(u64 n);

// Legendre's formula: valuation of n! at the prime p.
u64 factorial_valuation(u64 n, u64 p);

// Valuation of a nonzero integer.
u64 valuation(u64 n, u64 p);
long valuation(const mpz_class& n, u64 p);

// n with all factors of p removed.
u64 strip_p(u64 n, u64 p);

u64 mulmod(u64 a, u64 b, u64 m);
u64 powmod(u64 base, u64 exp, u64 m);

// p^exp as an exact integer.
mpz_class pow_int(u64 p, u64 exp);

// C(n, k) mod p via Lucas' theorem.
u64 binomial_mod_p(const mpz_class& n, const mpz_class& k, u64 p);

// C(n, k) mod p^alpha together with its exact valuation: the k-term product
// n-k+1, ..., n over 1, ..., k with p-parts stripped and counted separately.
// Returns the full residue (valuation folded back in, 0 if valuation >= alpha).
mpz_class binomial_mod_pw(const mpz_class& n, u64 k, u64 p, u64 alpha);

} // namespace vfree::num

#endif
