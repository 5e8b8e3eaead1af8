#include "vfree/numeric.hpp"

#include <algorithm>

#include "vfree/errors.hpp"

namespace vfree::num {

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 d : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == d) return true;
        if (n % d == 0) return false;
    }
    // deterministic Miller-Rabin for 64-bit inputs
    u64 d = n - 1;
    int r = 0;
    while ((d & 1) == 0) { d >>= 1; ++r; }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        u64 x = powmod(a % n, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 0; i < r - 1; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

std::vector<u64> divisors(u64 n) {
    std::vector<u64> small, large;
    for (u64 d = 1; d * d <= n; ++d) {
        if (n % d == 0) {
            small.push_back(d);
            if (d != n / d) large.push_back(n / d);
        }
    }
    small.insert(small.end(), large.rbegin(), large.rend());
    return small;
}

u64 totient(u64 n) {
    u64 result = n;
    for (u64 p = 2; p * p <= n; ++p) {
        if (n % p == 0) {
            result -= result / p;
            while (n % p == 0) n /= p;
        }
    }
    if (n > 1) result -= result / n;
    return result;
}

u64 factorial_valuation(u64 n, u64 p) {
    u64 v = 0;
    while (n) { n /= p; v += n; }
    return v;
}

u64 valuation(u64 n, u64 p) {
    if (n == 0) throw internal_error("valuation of zero");
    u64 v = 0;
    while (n % p == 0) { n /= p; ++v; }
    return v;
}

long valuation(const mpz_class& n, u64 p) {
    if (n == 0) throw internal_error("valuation of zero");
    mpz_class q = abs(n), r;
    long v = 0;
    mpz_class pz(static_cast<unsigned long>(p));
    while (true) {
        mpz_class quo;
        mpz_fdiv_qr(quo.get_mpz_t(), r.get_mpz_t(), q.get_mpz_t(), pz.get_mpz_t());
        if (r != 0) break;
        q = quo;
        ++v;
    }
    return v;
}

u64 strip_p(u64 n, u64 p) {
    while (n % p == 0) n /= p;
    return n;
}

u64 mulmod(u64 a, u64 b, u64 m) {
    return static_cast<u64>((static_cast<unsigned __int128>(a) * b) % m);
}

u64 powmod(u64 base, u64 exp, u64 m) {
    u64 r = 1 % m;
    base %= m;
    while (exp) {
        if (exp & 1) r = mulmod(r, base, m);
        base = mulmod(base, base, m);
        exp >>= 1;
    }
    return r;
}

mpz_class pow_int(u64 p, u64 exp) {
    mpz_class r;
    mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(exp));
    return r;
}

u64 binomial_mod_p(const mpz_class& n, const mpz_class& k, u64 p) {
    if (k < 0 || k > n) return 0;
    // Lucas: product of digit binomials base p.
    mpz_class nn = n, kk = k;
    u64 result = 1;
    mpz_class pz(static_cast<unsigned long>(p));
    while (kk > 0 || nn > 0) {
        mpz_class nd = nn % pz, kd = kk % pz;
        u64 a = nd.get_ui(), b = kd.get_ui();
        if (b > a) return 0;
        // small binomial mod p
        u64 num = 1, den = 1;
        for (u64 i = 1; i <= b; ++i) {
            num = mulmod(num, (a + 1 - i) % p, p);
            den = mulmod(den, i % p, p);
        }
        result = mulmod(result, mulmod(num, powmod(den, p - 2, p), p), p);
        nn /= pz;
        kk /= pz;
    }
    return result;
}

mpz_class binomial_mod_pw(const mpz_class& n, u64 k, u64 p, u64 alpha) {
    if (n < 0) throw internal_error("binomial_mod_pw: negative upper index");
    if (mpz_class(k) > n) return 0;
    mpz_class mod = pow_int(p, alpha);
    mpz_class num_unit = 1, den_unit = 1;
    long val = 0;
    mpz_class pz(static_cast<unsigned long>(p));
    for (u64 t = 1; t <= k; ++t) {
        mpz_class factor = n - mpz_class(k) + mpz_class(t);
        while (mpz_divisible_p(factor.get_mpz_t(), pz.get_mpz_t())) {
            factor /= pz;
            ++val;
        }
        num_unit = num_unit * (factor % mod) % mod;
        u64 tt = t;
        while (tt % p == 0) { tt /= p; --val; }
        den_unit = den_unit * mpz_class(static_cast<unsigned long>(tt)) % mod;
    }
    if (val < 0) throw internal_error("binomial_mod_pw: negative valuation");
    if (static_cast<u64>(val) >= alpha) return 0;
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), den_unit.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw internal_error("binomial_mod_pw: denominator unit not invertible");
    mpz_class r = num_unit * inv % mod;
    r = r * pow_int(p, static_cast<u64>(val)) % mod;
    if (r < 0) r += mod;
    return r;
}

} // namespace vfree::num
