#include "vfree/rationality.hpp"

#include <algorithm>

#include "vfree/errors.hpp"
#include "vfree/invariants.hpp"
#include "vfree/modular_seq.hpp"

namespace vfree {

Classification classify(const GraphOfGroups& g, u64 p) {
    if (!num::is_prime(p)) throw precondition_error("classify: p must be prime");
    Classification c;
    c.p = p;
    c.m = m_gamma(g);
    c.mu = free_rank(g);
    c.mu_p = p_rank(g, p);
    // the structurally specific cases take precedence: a finite group is
    // reported as finite whatever p is, a virtually infinite-cyclic group at
    // p = 2 as such, before the generic divisibility dichotomy
    if (c.mu == 0)
        c.label = MainCase::periodic_finite;
    else if (c.mu == 1 && p == 2)
        c.label = MainCase::periodic_virtually_cyclic_p2;
    else if (c.m % p != 0)
        c.label = MainCase::periodic_p_not_dividing_m;
    else if (c.mu_p > 0)
        c.label = MainCase::periodic_mu_p_positive;
    else
        c.label = MainCase::not_periodic;
    return c;
}

const char* case_name(MainCase c) {
    switch (c) {
        case MainCase::periodic_p_not_dividing_m: return "(iii)_1";
        case MainCase::periodic_mu_p_positive: return "(iii)_2";
        case MainCase::periodic_finite: return "(iii)_3";
        case MainCase::periodic_virtually_cyclic_p2: return "(iii)_4";
        case MainCase::not_periodic: return "not periodic";
    }
    return "?";
}

std::string case_description(const Classification& c) {
    const std::string ps = std::to_string(c.p);
    switch (c.label) {
        case MainCase::periodic_p_not_dividing_m:
            return "case (iii)_1: p does not divide m -> ultimately periodic mod every " + ps +
                   "^a";
        case MainCase::periodic_mu_p_positive:
            return "case (iii)_2: p | m, mu_p = " + std::to_string(c.mu_p) +
                   " -> ultimately periodic mod every " + ps + "^a";
        case MainCase::periodic_finite:
            return "case (iii)_3: finite group -> ultimately periodic mod every " + ps + "^a";
        case MainCase::periodic_virtually_cyclic_p2:
            return "case (iii)_4: virtually infinite-cyclic, p = 2 -> ultimately periodic mod "
                   "every 2^a";
        case MainCase::not_periodic:
            return "not periodic: p | m, mu_p = 0, group neither finite nor virtually "
                   "infinite-cyclic with p = 2";
    }
    return "?";
}

bool check_zero_mod_p(const GraphOfGroups& g, u64 p, u64 terms) {
    if (!num::is_prime(p)) throw precondition_error("check_zero_mod_p: p must be prime");
    if (m_gamma(g) % p != 0)
        throw precondition_error("check_zero_mod_p: requires p | m");
    if (p_rank(g, p) == 0)
        throw precondition_error("check_zero_mod_p: requires mu_p > 0");
    std::vector<mpz_class> f = f_mod(g, p, 1, terms);
    for (u64 lam = 1; lam <= terms; ++lam)
        if (f[lam] != 0)
            throw internal_error("check_zero_mod_p: f_" + std::to_string(lam) +
                                 " is nonzero mod p");
    return true;
}

DenominatorSign expected_denominator_sign(const GraphOfGroups& g, u64 p) {
    if (!num::is_prime(p)) throw precondition_error("expected_denominator_sign: p must be prime");
    if (m_gamma(g) % p != 0)
        throw precondition_error("expected_denominator_sign: requires p | m");
    const u64 mu_p = p_rank(g, p);
    if (mu_p != 1)
        throw precondition_error("expected_denominator_sign: requires mu_p = 1");
    const u64 mu = free_rank(g);
    if ((mu - mu_p) % (p - 1) != 0)
        throw internal_error("expected_denominator_sign: (mu - mu_p)/(p-1) is not an integer");
    const u64 M = (mu - mu_p) / (p - 1);
    return {M % 2 == 0 ? +1 : -1, M};
}

RationalFit fit_rational(std::span<const mpz_class> series, u64 p, u64 alpha, int sigma,
                         u64 max_k, u64 margin) {
    if (sigma != 1 && sigma != -1)
        throw precondition_error("fit_rational: sigma must be +1 or -1");
    if (margin == 0) throw precondition_error("fit_rational: margin must be >= 1");
    if (series.size() < margin + 1)
        throw budget_error("fit_rational: prefix shorter than the required margin");
    const mpz_class mod = num::pow_int(p, alpha);

    std::vector<mpz_class> cur(series.begin(), series.end());
    for (auto& c : cur) {
        c %= mod;
        if (c < 0) c += mod;
    }
    for (u64 k = 0; k <= max_k; ++k) {
        long long last_nonzero = -1;
        for (std::size_t i = cur.size(); i-- > 0;)
            if (cur[i] != 0) {
                last_nonzero = static_cast<long long>(i);
                break;
            }
        const u64 trailing = static_cast<u64>(static_cast<long long>(cur.size()) - 1 -
                                              last_nonzero);
        if (trailing >= margin) {
            RationalFit fit;
            fit.p = p;
            fit.alpha = alpha;
            fit.sigma = sigma;
            fit.k = k;
            fit.numerator.assign(cur.begin(), cur.begin() + (last_nonzero + 1));
            fit.verified_prefix_length = series.size();
            fit.margin = margin;
            return fit;
        }
        if (k == max_k) break;
        // multiply by (1 - sigma*z)
        for (std::size_t i = cur.size(); i-- > 1;) {
            cur[i] = (cur[i] - sigma * cur[i - 1]) % mod;
            if (cur[i] < 0) cur[i] += mod;
        }
    }
    throw budget_error("fit_rational: no fit within max_k = " + std::to_string(max_k) +
                       " and margin = " + std::to_string(margin) +
                       " (raise the budgets or the prefix length)");
}

mpz_class fit_coefficient(const RationalFit& fit, u64 lam) {
    const mpz_class mod = num::pow_int(fit.p, fit.alpha);
    if (fit.k == 0)
        return lam < fit.numerator.size() ? fit.numerator[lam] : mpz_class(0);
    mpz_class acc = 0;
    const u64 top = std::min<u64>(lam, fit.numerator.size() - 1);
    for (u64 i = 0; i <= top; ++i) {
        if (fit.numerator[i] == 0) continue;
        mpz_class b = num::binomial_mod_pw(mpz_class(static_cast<unsigned long>(lam - i)) +
                                               static_cast<unsigned long>(fit.k - 1),
                                           fit.k - 1, fit.p, fit.alpha);
        mpz_class term = fit.numerator[i] * b % mod;
        if (fit.sigma == -1 && ((lam - i) % 2 == 1)) term = -term;
        acc = (acc + term) % mod;
    }
    if (acc < 0) acc += mod;
    return acc;
}

bool fit_reproduces_prefix(const RationalFit& fit, std::span<const mpz_class> series,
                           Exec exec) {
    const mpz_class mod = num::pow_int(fit.p, fit.alpha);
    std::vector<unsigned char> bad(series.size(), 0);
    parallel_for(exec, 0, static_cast<std::int64_t>(series.size()), [&](std::int64_t i) {
        mpz_class expect = series[static_cast<std::size_t>(i)] % mod;
        if (expect < 0) expect += mod;
        if (fit_coefficient(fit, static_cast<u64>(i)) != expect)
            bad[static_cast<std::size_t>(i)] = 1;
    });
    return std::find(bad.begin(), bad.end(), 1) == bad.end();
}

bool fit_period_window_check(const RationalFit& fit, u64 omega) {
    if (omega == 0) return false;
    // matching windows long enough to cover the numerator transient plus one
    // full recurrence order propagate the equality to every index
    const u64 deg = fit.numerator.empty() ? 0 : fit.numerator.size() - 1;
    const u64 window = std::max<u64>(fit.k, deg + 1) + fit.k + 1;
    for (u64 lam = 0; lam < window; ++lam)
        if (fit_coefficient(fit, lam) != fit_coefficient(fit, lam + omega)) return false;
    return true;
}

u64 rational_period(const RationalFit& fit) {
    if (fit.numerator.empty()) return 1; // zero series
    if (fit.k == 0) return 1;            // polynomial: eventually zero
    // ceil(log_p k)
    u64 log_term = 0, pw = 1;
    while (pw < fit.k) {
        pw *= fit.p;
        ++log_term;
    }
    const u64 sign_factor = fit.sigma == -1 ? 2 : 1;
    // certified period cap: sign factor times the binomial-coefficient period;
    // bump the exponent if the window check unexpectedly rejects it
    u64 exponent = fit.alpha - 1 + log_term;
    u64 cap = 0;
    for (int bumps = 0;; ++bumps) {
        mpz_class cap_z = sign_factor * num::pow_int(fit.p, exponent);
        if (mpz_sizeinbase(cap_z.get_mpz_t(), 2) > 62)
            throw budget_error("rational_period: period cap exceeds the 64-bit range");
        cap = mpz_get_ui(cap_z.get_mpz_t());
        if (fit_period_window_check(fit, cap)) break;
        if (bumps == 3)
            throw internal_error("rational_period: no certified period cap found");
        ++exponent;
    }

    // divisors of cap are delta * p^j with delta | sign_factor; ascending scan
    std::vector<u64> candidates;
    for (u64 q = 1;; q *= fit.p) {
        if (q <= cap) candidates.push_back(q);
        if (sign_factor == 2 && 2 * q <= cap) candidates.push_back(2 * q);
        if (q > cap / fit.p) break;
    }
    std::sort(candidates.begin(), candidates.end());
    for (u64 omega : candidates)
        if (fit_period_window_check(fit, omega)) return omega;
    throw internal_error("rational_period: certified cap admitted no period");
}

PolynomialCheck polynomial_check(const GraphOfGroups& g, u64 p, u64 alpha, u64 terms,
                                 u64 margin, bool waive_preconditions) {
    if (!num::is_prime(p)) throw precondition_error("polynomial_check: p must be prime");
    if (!waive_preconditions) {
        if (m_gamma(g) % p != 0)
            throw precondition_error("polynomial_check: requires p | m");
        if (p_rank(g, p) < 2)
            throw precondition_error("polynomial_check: requires mu_p >= 2");
    }
    if (terms < margin + 1)
        throw precondition_error("polynomial_check: terms must exceed margin");
    std::vector<mpz_class> f = f_mod(g, p, alpha, terms);
    // series coefficients: F(z) = sum f_{lam+1} z^lam
    long long last_nonzero = -1;
    for (u64 lam = terms; lam >= 1; --lam)
        if (f[lam] != 0) {
            last_nonzero = static_cast<long long>(lam) - 1;
            break;
        }
    PolynomialCheck out;
    out.trailing_zeros = static_cast<u64>(static_cast<long long>(terms) - 1 - last_nonzero);
    out.is_polynomial_prefix = out.trailing_zeros >= margin;
    for (long long i = 0; i <= last_nonzero; ++i)
        out.head.push_back(f[static_cast<u64>(i) + 1]);
    return out;
}

std::optional<u64> mod_p_closed_form(const GraphOfGroups& g, u64 p, u64 lam) {
    if (!num::is_prime(p)) throw precondition_error("mod_p_closed_form: p must be prime");
    if (lam == 0) throw precondition_error("mod_p_closed_form: lam must be >= 1");
    if (p_rank(g, p) != 0)
        throw precondition_error("mod_p_closed_form: requires mu_p = 0");
    const u64 mu = free_rank(g);
    const u64 q = p - 1;
    if ((lam - 1) % q != 0 || (mu * lam) % q != 0 || (mu - 1) % q != 0 || lam % p == 0)
        return std::nullopt;
    const u64 sign_exp = (mu - 1) / q;
    u64 value = num::binomial_mod_p(mpz_class(static_cast<unsigned long>(mu)) *
                                        static_cast<unsigned long>(lam) /
                                        static_cast<unsigned long>(q),
                                    mpz_class(static_cast<unsigned long>((lam - 1) / q)), p);
    value = num::mulmod(value, num::powmod(lam % p, p - 2, p), p);
    if (sign_exp % 2 == 1) value = (p - value) % p;
    return value;
}

int psl2_mod3_automaton(u64 lam) {
    if (lam == 0) throw precondition_error("psl2_mod3_automaton: lam must be >= 1");
    // base-3 digits, most significant first
    std::vector<int> digits;
    for (u64 n = lam; n > 0; n /= 3) digits.push_back(static_cast<int>(n % 3));
    std::reverse(digits.begin(), digits.end());

    std::size_t ones = 0, one_pos = 0;
    for (std::size_t i = 0; i < digits.size(); ++i)
        if (digits[i] == 1) {
            ++ones;
            one_pos = i;
        }
    if (ones != 1) return 0;
    const std::size_t tail = digits.size() - one_pos - 1;
    if (tail == 0) return -1;
    bool all0 = true, all2 = true;
    for (std::size_t i = one_pos + 1; i < digits.size(); ++i) {
        if (digits[i] != 0) all0 = false;
        if (digits[i] != 2) all2 = false;
    }
    return (all0 || all2) ? +1 : 0;
}

} // namespace vfree
