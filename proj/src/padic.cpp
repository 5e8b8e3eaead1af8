#include "vfree/padic.hpp"

#include <algorithm>

#include "vfree/errors.hpp"

namespace vfree {

PAdicNumber PAdicNumber::zero(u64 p, u64 w) {
    PAdicNumber z;
    z.p_ = p;
    z.w_ = w;
    z.zero_ = true;
    z.unit_ = 0;
    return z;
}

PAdicNumber::PAdicNumber(u64 p, long long valuation, mpz_class unit, u64 w)
    : p_(p), val_(valuation), unit_(std::move(unit)), w_(w) {
    if (w_ == 0) throw precondition_error("PAdicNumber: precision must be >= 1");
    mpz_class mod = num::pow_int(p_, w_);
    unit_ %= mod;
    if (unit_ < 0) unit_ += mod;
    if (unit_ == 0 || mpz_divisible_ui_p(unit_.get_mpz_t(), static_cast<unsigned long>(p_)))
        throw internal_error("PAdicNumber: unit part not coprime to p");
}

PAdicNumber PAdicNumber::from_integer(const mpz_class& x, u64 p, u64 w) {
    if (x == 0) return zero(p, w);
    long v = num::valuation(x, p);
    mpz_class u = x / num::pow_int(p, static_cast<u64>(v));
    return PAdicNumber(p, v, std::move(u), w);
}

PAdicNumber PAdicNumber::from_rational(const mpq_class& x, u64 p, u64 w) {
    if (x == 0) return zero(p, w);
    long vn = num::valuation(x.get_num(), p);
    long vd = num::valuation(x.get_den(), p);
    mpz_class un = x.get_num() / num::pow_int(p, static_cast<u64>(vn));
    mpz_class ud = x.get_den() / num::pow_int(p, static_cast<u64>(vd));
    mpz_class mod = num::pow_int(p, w);
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), ud.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw internal_error("PAdicNumber: denominator unit not invertible");
    return PAdicNumber(p, vn - vd, un * inv % mod, w);
}

long long PAdicNumber::valuation() const {
    if (zero_) throw precondition_error("PAdicNumber: zero marker has no finite valuation");
    return val_;
}

PAdicNumber PAdicNumber::mul(const PAdicNumber& o) const {
    if (p_ != o.p_) throw precondition_error("PAdicNumber: prime mismatch");
    if (zero_ || o.zero_) return zero(p_, std::min(w_, o.w_));
    u64 w = std::min(w_, o.w_);
    mpz_class mod = num::pow_int(p_, w);
    return PAdicNumber(p_, val_ + o.val_, unit_ * o.unit_ % mod, w);
}

PAdicNumber PAdicNumber::div(const PAdicNumber& o) const {
    if (p_ != o.p_) throw precondition_error("PAdicNumber: prime mismatch");
    if (o.zero_) throw precondition_error("PAdicNumber: division by zero");
    if (zero_) return zero(p_, std::min(w_, o.w_));
    u64 w = std::min(w_, o.w_);
    mpz_class mod = num::pow_int(p_, w);
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), o.unit_.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw internal_error("PAdicNumber: unit not invertible");
    return PAdicNumber(p_, val_ - o.val_, unit_ * inv % mod, w);
}

PAdicNumber PAdicNumber::add(const PAdicNumber& o) const {
    if (p_ != o.p_) throw precondition_error("PAdicNumber: prime mismatch");
    if (zero_) return o;
    if (o.zero_) return *this;
    const PAdicNumber& lo = (val_ <= o.val_) ? *this : o;
    const PAdicNumber& hi = (val_ <= o.val_) ? o : *this;
    const u64 shift = static_cast<u64>(hi.val_ - lo.val_);
    // absolute precision of the sum
    const long long known =
        std::min(lo.val_ + static_cast<long long>(lo.w_), hi.val_ + static_cast<long long>(hi.w_));
    const u64 w = static_cast<u64>(known - lo.val_);
    if (w == 0) return zero(p_, 1);
    mpz_class mod = num::pow_int(p_, w);
    mpz_class s = lo.unit_;
    if (shift < w) s = (s + hi.unit_ * num::pow_int(p_, shift)) % mod;
    s %= mod;
    if (s < 0) s += mod;
    if (s == 0) return zero(p_, w); // zero in every tracked digit
    long cancel = num::valuation(s, p_);
    mpz_class unit = s / num::pow_int(p_, static_cast<u64>(cancel));
    u64 wr = w - static_cast<u64>(cancel);
    return PAdicNumber(p_, lo.val_ + cancel, std::move(unit), wr);
}

mpz_class PAdicNumber::residue(u64 alpha) const {
    if (zero_) return 0;
    if (val_ < 0) throw precondition_error("PAdicNumber: negative valuation has no residue");
    if (static_cast<long long>(alpha) > val_ + static_cast<long long>(w_))
        throw precondition_error("PAdicNumber: residue requested beyond known precision");
    if (static_cast<u64>(val_) >= alpha) return 0;
    mpz_class mod = num::pow_int(p_, alpha);
    return unit_ * num::pow_int(p_, static_cast<u64>(val_)) % mod;
}

PAdicNumber padic_factorial(u64 n, u64 p, u64 w) {
    if (w == 0) throw precondition_error("padic_factorial: precision must be >= 1");
    mpz_class mod = num::pow_int(p, w);
    mpz_class unit = 1;
    u64 cur = n;
    while (cur > 0) {
        for (u64 i = 1; i <= cur; ++i)
            if (i % p != 0) unit = unit * static_cast<unsigned long>(i) % mod;
        cur /= p;
    }
    return PAdicNumber(p, static_cast<long long>(num::factorial_valuation(n, p)), unit, w);
}

FactorialUnits::FactorialUnits(u64 p, u64 w, u64 max_n, Exec exec) {
    mod_ = num::pow_int(p, w);
    units_.assign(max_n + 1, mpz_class(1));
    const int nthreads = thread_count(exec);
    if (nthreads <= 1 || max_n < 1024) {
        mpz_class run = 1;
        for (u64 i = 1; i <= max_n; ++i) {
            run = run * static_cast<unsigned long>(num::strip_p(i, p)) % mod_;
            units_[i] = run;
        }
        return;
    }
#ifdef _OPENMP
    const u64 blocks = static_cast<u64>(nthreads);
    const u64 block_len = (max_n + blocks - 1) / blocks;
    std::vector<mpz_class> carry(blocks + 1, mpz_class(1));
#pragma omp parallel for schedule(static)
    for (long long b = 0; b < static_cast<long long>(blocks); ++b) {
        const u64 lo = static_cast<u64>(b) * block_len + 1;
        const u64 hi = std::min(max_n, (static_cast<u64>(b) + 1) * block_len);
        mpz_class run = 1;
        for (u64 i = lo; i <= hi; ++i) {
            run = run * static_cast<unsigned long>(num::strip_p(i, p)) % mod_;
            units_[i] = run;
        }
        carry[static_cast<u64>(b) + 1] = run;
    }
    for (u64 b = 1; b <= blocks; ++b) carry[b] = carry[b - 1] * carry[b] % mod_;
#pragma omp parallel for schedule(static)
    for (long long b = 1; b < static_cast<long long>(blocks); ++b) {
        const u64 lo = static_cast<u64>(b) * block_len + 1;
        const u64 hi = std::min(max_n, (static_cast<u64>(b) + 1) * block_len);
        for (u64 i = lo; i <= hi; ++i) units_[i] = units_[i] * carry[b] % mod_;
    }
#endif
}

} // namespace vfree
