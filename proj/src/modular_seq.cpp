#include "vfree/modular_seq.hpp"

#include <algorithm>
#include <unordered_map>

#include "vfree/errors.hpp"
#include "vfree/exact_seq.hpp"
#include "vfree/invariants.hpp"

namespace vfree {

namespace {

struct Site {
    u64 order;
    u64 step;      // m / order
    bool edge_side; // numerator if true
};

std::vector<Site> collect_sites(const GraphOfGroups& g, u64 m) {
    std::vector<Site> sites;
    for (const auto& e : g.edges) sites.push_back({e.order, m / e.order, true});
    for (const auto& [_, order] : g.vertices) sites.push_back({order, m / order, false});
    return sites;
}

// Montgomery batch inversion mod an odd-prime-power modulus.
std::vector<mpz_class> batch_invert(const std::vector<mpz_class>& xs, const mpz_class& mod) {
    std::vector<mpz_class> prefix(xs.size());
    mpz_class run = 1;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        prefix[i] = run;
        run = run * xs[i] % mod;
    }
    mpz_class inv_all;
    if (mpz_invert(inv_all.get_mpz_t(), run.get_mpz_t(), mod.get_mpz_t()) == 0)
        throw internal_error("batch_invert: product not invertible");
    std::vector<mpz_class> out(xs.size());
    for (std::size_t i = xs.size(); i-- > 0;) {
        out[i] = inv_all * prefix[i] % mod;
        inv_all = inv_all * xs[i] % mod;
    }
    return out;
}

void check_modular_args(u64 p, u64 alpha, u64 terms) {
    if (!num::is_prime(p)) throw precondition_error("modular pipeline: p must be prime");
    if (alpha == 0) throw precondition_error("modular pipeline: alpha must be >= 1");
    if (terms == 0) throw precondition_error("modular pipeline: terms must be >= 1");
}

// Scaled residues g_lam * p^scale mod p^(alpha+guard+scale), shared by f_mod
// and g_mod.
struct ScaledG {
    ModularPlan plan;
    u64 m;
    std::vector<long long> val;   // vp_g per index
    std::vector<mpz_class> units; // unit part of g_lam mod p^unit_precision
    mpz_class unit_mod;
};

ScaledG scaled_g(const GraphOfGroups& g, u64 p, u64 alpha, u64 terms, Exec exec) {
    ScaledG out;
    out.plan = plan_modular(g, p, alpha, terms, exec);
    out.m = m_gamma(g);
    const u64 w = out.plan.unit_precision();
    out.unit_mod = num::pow_int(p, w);

    const std::vector<Site> sites = collect_sites(g, out.m);
    u64 max_arg = 0;
    for (const auto& s : sites) max_arg = std::max(max_arg, terms * s.step);
    // block stitching only pays off once the entries are wide
    const bool wide = mpz_size(out.unit_mod.get_mpz_t()) >= 8;
    FactorialUnits table(p, w, max_arg, (wide && max_arg >= 4096) ? exec : Exec::serial);

    out.val.resize(terms + 1);
    parallel_for(exec, 0, static_cast<std::int64_t>(terms) + 1, [&](std::int64_t lam) {
        out.val[static_cast<std::size_t>(lam)] = vp_g(g, p, static_cast<u64>(lam));
    });

    // per-site stripped power, advanced incrementally in lam
    std::vector<mpz_class> strip_pow(sites.size(), mpz_class(1));
    std::vector<mpz_class> strip_step(sites.size());
    for (std::size_t s = 0; s < sites.size(); ++s) {
        mpz_class base(static_cast<unsigned long>(num::strip_p(sites[s].order, p)));
        mpz_class e(static_cast<unsigned long>(sites[s].step));
        mpz_powm(strip_step[s].get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(),
                 out.unit_mod.get_mpz_t());
    }

    std::vector<mpz_class> numer(terms + 1, mpz_class(1)), denom(terms + 1, mpz_class(1));
    for (u64 lam = 0; lam <= terms; ++lam) {
        for (std::size_t s = 0; s < sites.size(); ++s) {
            mpz_class part = table.unit(lam * sites[s].step) * strip_pow[s] % out.unit_mod;
            if (sites[s].edge_side)
                numer[lam] = numer[lam] * part % out.unit_mod;
            else
                denom[lam] = denom[lam] * part % out.unit_mod;
        }
        if (lam < terms)
            for (std::size_t s = 0; s < sites.size(); ++s)
                strip_pow[s] = strip_pow[s] * strip_step[s] % out.unit_mod;
    }
    std::vector<mpz_class> inv = batch_invert(denom, out.unit_mod);
    out.units.resize(terms + 1);
    parallel_for(exec, 0, static_cast<std::int64_t>(terms) + 1, [&](std::int64_t i) {
        out.units[static_cast<std::size_t>(i)] =
            numer[static_cast<std::size_t>(i)] * inv[static_cast<std::size_t>(i)] % out.unit_mod;
    });
    return out;
}

} // namespace

ModularPlan plan_modular(const GraphOfGroups& g, u64 p, u64 alpha, u64 terms, Exec exec) {
    check_modular_args(p, alpha, terms);
    require_valid(g);
    ModularPlan plan;
    plan.p = p;
    plan.alpha = alpha;
    plan.terms = terms;

    std::vector<long long> e(terms + 1, 0);
    parallel_for(exec, 0, static_cast<std::int64_t>(terms) + 1, [&](std::int64_t lam) {
        e[static_cast<std::size_t>(lam)] = vp_g(g, p, static_cast<u64>(lam));
    });
    plan.min_valuation = *std::min_element(e.begin(), e.end());
    plan.scale = static_cast<u64>(std::max(0ll, -plan.min_valuation));

    // worst accumulated truncation loss over all convolution paths
    std::vector<long long> loss(terms + 1, 0);
    long long guard = 0;
    for (u64 lam = 2; lam <= terms; ++lam) {
        long long worst = 0;
        for (u64 mu = 1; mu < lam; ++mu)
            worst = std::max(worst, loss[lam - mu] + std::max(0ll, -e[mu]));
        loss[lam] = worst;
        guard = std::max(guard, worst);
    }
    plan.guard = static_cast<u64>(guard);
    return plan;
}

std::vector<PAdicNumber> g_mod(const GraphOfGroups& g, u64 p, u64 alpha, u64 terms, Exec exec) {
    ScaledG sg = scaled_g(g, p, alpha, terms, exec);
    const u64 w = sg.plan.alpha + sg.plan.scale; // declared output precision
    std::vector<PAdicNumber> out;
    out.reserve(terms + 1);
    for (u64 lam = 0; lam <= terms; ++lam)
        out.push_back(PAdicNumber(p, sg.val[lam], sg.units[lam], w));
    return out;
}

std::vector<mpz_class> f_mod(const GraphOfGroups& g, u64 p, u64 alpha, u64 terms, Exec exec) {
    ScaledG sg = scaled_g(g, p, alpha, terms, exec);
    const ModularPlan& plan = sg.plan;
    const mpz_class work_mod = num::pow_int(p, plan.alpha + plan.guard + plan.scale);
    const mpz_class store_mod = num::pow_int(p, plan.alpha + plan.guard);
    const mpz_class out_mod = num::pow_int(p, plan.alpha);
    const mpz_class scale_pow = num::pow_int(p, plan.scale);

    // g_lam * p^scale mod work_mod
    std::vector<mpz_class> gs(terms + 1);
    for (u64 lam = 0; lam <= terms; ++lam) {
        const long long shifted = sg.val[lam] + static_cast<long long>(plan.scale);
        if (shifted >= static_cast<long long>(plan.alpha + plan.guard + plan.scale)) {
            gs[lam] = 0;
            continue;
        }
        gs[lam] = sg.units[lam] * num::pow_int(p, static_cast<u64>(shifted)) % work_mod;
    }

    std::vector<mpz_class> fstore(terms + 1), out(terms + 1);

    auto finalize = [&](u64 lam, mpz_class& sum) {
        mpz_class acc = mpz_class(static_cast<unsigned long>(sg.m)) *
                        static_cast<unsigned long>(lam) % work_mod * gs[lam];
        acc = (acc - sum) % work_mod;
        if (acc < 0) acc += work_mod;
        if (!mpz_divisible_p(acc.get_mpz_t(), scale_pow.get_mpz_t()))
            throw internal_error("f_mod: precision shortfall at index " + std::to_string(lam));
        fstore[lam] = acc / scale_pow % store_mod;
        out[lam] = fstore[lam] % out_mod;
    };

    // a barrier per convolution level costs tens of microseconds; only wide
    // operands make the levels heavy enough to amortise it
    const u64 limbs = mpz_size(work_mod.get_mpz_t());
    const bool use_parallel = thread_count(exec) > 1 && limbs >= 48 && terms >= 256;
    if (!use_parallel) {
        for (u64 lam = 1; lam <= terms; ++lam) {
            mpz_class sum = 0;
            for (u64 mu = 1; mu < lam; ++mu) sum += gs[mu] * fstore[lam - mu];
            finalize(lam, sum);
        }
        return out;
    }
#ifdef _OPENMP
    // one persistent region; per-level work sharing with a single finalizer
    mpz_class shared_sum = 0;
    std::exception_ptr failure = nullptr;
#pragma omp parallel
    {
        mpz_class local;
        for (u64 lam = 1; lam <= terms; ++lam) {
            local = 0;
#pragma omp for schedule(static) nowait
            for (long long mu = 1; mu < static_cast<long long>(lam); ++mu)
                local += gs[mu] * fstore[lam - mu];
#pragma omp critical
            shared_sum += local;
#pragma omp barrier
#pragma omp single
            {
                try {
                    if (!failure) finalize(lam, shared_sum);
                } catch (...) {
                    failure = std::current_exception();
                }
                shared_sum = 0;
            }
        }
    }
    if (failure) std::rethrow_exception(failure);
#endif
    return out;
}

std::vector<u64> f_mod_u64(const GraphOfGroups& g, u64 p, u64 alpha, u64 terms, Exec exec) {
    mpz_class mod = num::pow_int(p, alpha);
    if (mpz_sizeinbase(mod.get_mpz_t(), 2) > 62)
        throw budget_error("f_mod_u64: p^alpha does not fit in 64 bits");
    std::vector<mpz_class> big = f_mod(g, p, alpha, terms, exec);
    std::vector<u64> out(big.size());
    for (std::size_t i = 0; i < big.size(); ++i) out[i] = mpz_get_ui(big[i].get_mpz_t());
    return out;
}

u64 cutoff_lambda0(const GraphOfGroups& g, u64 p, u64 alpha) {
    if (!num::is_prime(p)) throw precondition_error("cutoff_lambda0: p must be prime");
    if (alpha == 0) throw precondition_error("cutoff_lambda0: alpha must be >= 1");
    const u64 m = m_gamma(g);
    if (m % p == 0) throw precondition_error("cutoff_lambda0: requires p not dividing m");
    if (free_rank(g) < 2) throw precondition_error("cutoff_lambda0: requires free rank >= 2");
    for (u64 lam = p;; lam += p)
        if (num::factorial_valuation(lam, p) >= alpha) return lam;
}

ModRecurrence recurrence_mod(const GraphOfGroups& g, u64 p, u64 alpha) {
    const u64 cutoff = cutoff_lambda0(g, p, alpha);
    mpz_class mod = num::pow_int(p, alpha);
    if (mpz_sizeinbase(mod.get_mpz_t(), 2) > 62)
        throw budget_error("recurrence_mod: p^alpha does not fit in 64 bits");
    const u64 modulus = mpz_get_ui(mod.get_mpz_t());

    ModRecurrence rec;
    rec.p = p;
    rec.alpha = alpha;
    rec.modulus = modulus;
    rec.order = cutoff - 1;
    if (rec.order < 1) throw internal_error("recurrence_mod: order must be >= 1");

    std::vector<PAdicNumber> gm = g_mod(g, p, alpha, rec.order);
    rec.coeffs.resize(rec.order);
    for (u64 i = 1; i <= rec.order; ++i) {
        mpz_class r = gm[i].residue(alpha);
        u64 res = mpz_get_ui(r.get_mpz_t());
        rec.coeffs[i - 1] = (modulus - res) % modulus;
    }
    return rec;
}

bool purity_certificate(const ModRecurrence& rec) {
    return rec.coeffs.back() % rec.p != 0;
}

namespace {

u64 mix_fingerprint(u64 h, u64 x) {
    // splitmix64-style step
    u64 z = h ^ (x + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2));
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

u64 fingerprint_state(const std::vector<u64>& state) {
    u64 h = 0xcbf29ce484222325ull;
    for (u64 x : state) h = mix_fingerprint(h, x);
    return h;
}

struct Walker {
    const ModRecurrence& rec;
    std::vector<u64> state;

    void step() {
        const u64 d = rec.order;
        unsigned __int128 acc = 0;
        for (u64 i = 1; i <= d; ++i)
            acc += static_cast<unsigned __int128>(rec.coeffs[i - 1]) * state[d - i];
        u64 next = static_cast<u64>(acc % rec.modulus);
        for (u64 i = 0; i + 1 < d; ++i) state[i] = state[i + 1];
        state[d - 1] = next;
    }
};

} // namespace

PeriodReport detect_period(const ModRecurrence& rec, std::span<const u64> initial_state,
                           u64 budget) {
    if (initial_state.size() != rec.order)
        throw precondition_error("detect_period: initial state must have length = order");
    if (budget == 0 || budget > (1ull << 31))
        throw precondition_error("detect_period: budget must be in [1, 2^31]");

    PeriodReport report;
    mpz_class cap;
    mpz_ui_pow_ui(cap.get_mpz_t(), static_cast<unsigned long>(rec.modulus),
                  static_cast<unsigned long>(rec.order));
    report.theoretical_cap = cap;

    std::vector<u64> init(initial_state.begin(), initial_state.end());
    for (u64& x : init) x %= rec.modulus;

    Walker walker{rec, init};
    const u64 checkpoint_stride = 2048;
    std::vector<std::pair<u64, std::vector<u64>>> checkpoints; // (step, state)
    std::unordered_map<u64, std::uint32_t> first_at;
    first_at.reserve(static_cast<std::size_t>(std::min<u64>(budget, 1u << 22)));
    std::vector<std::pair<u64, std::uint32_t>> overflow;

    auto state_at = [&](u64 target) {
        // rebuild from the nearest checkpoint at or before target
        std::size_t ci = target / checkpoint_stride;
        ci = std::min(ci, checkpoints.size() - 1);
        Walker w{rec, checkpoints[ci].second};
        for (u64 s = checkpoints[ci].first; s < target; ++s) w.step();
        return w.state;
    };

    u64 found_n1 = 0, found_n2 = 0;
    bool found = false;
    for (u64 step = 0; step < budget; ++step) {
        if (step % checkpoint_stride == 0) checkpoints.emplace_back(step, walker.state);
        const u64 fp = fingerprint_state(walker.state);
        auto matches_at = [&](u64 old_step) {
            return state_at(old_step) == walker.state;
        };
        auto it = first_at.find(fp);
        bool matched = false;
        if (it != first_at.end()) {
            if (matches_at(it->second)) {
                found_n1 = it->second;
                matched = true;
            } else {
                for (const auto& [ofp, ostep] : overflow)
                    if (ofp == fp && matches_at(ostep)) {
                        found_n1 = ostep;
                        matched = true;
                        break;
                    }
                if (!matched) overflow.emplace_back(fp, static_cast<std::uint32_t>(step));
            }
        } else {
            first_at.emplace(fp, static_cast<std::uint32_t>(step));
        }
        if (matched) {
            found_n2 = step;
            found = true;
            report.steps_used = step;
            break;
        }
        walker.step();
    }
    if (!found) {
        report.budget_exhausted = true;
        report.steps_used = budget;
        return report;
    }

    const u64 t = found_n1, c = found_n2 - found_n1;

    // value-level minimisation over one state cycle
    std::vector<u64> values(t + c + rec.order);
    {
        Walker w{rec, init};
        for (u64 i = 0; i < values.size(); ++i) {
            values[i] = w.state[0];
            w.step();
        }
    }
    auto tail_value = [&](u64 n) { // n >= t, reduced into the certified cycle
        return n < t + c ? values[n] : values[t + (n - t) % c];
    };
    u64 omega = c;
    for (u64 d : num::divisors(c)) {
        bool ok = true;
        for (u64 n = t; n < t + c && ok; ++n)
            if (tail_value(n + d) != values[n]) ok = false;
        if (ok) {
            omega = d;
            break;
        }
    }
    u64 n0 = t;
    while (n0 > 0 && values[n0 - 1] == tail_value(n0 - 1 + omega)) --n0;

    report.preperiod = n0;
    report.period = omega;
    report.purely_periodic = (n0 == 0);
    report.certified = true;
    return report;
}

PeriodReport detect_period_prefix(std::span<const u64> seq) {
    PeriodReport report;
    const u64 n = seq.size();
    for (u64 omega = 1; 2 * omega <= n; ++omega) {
        u64 n0 = 0;
        for (u64 i = n - omega; i-- > 0;) {
            if (seq[i] != seq[i + omega]) {
                n0 = i + 1;
                break;
            }
        }
        if (n0 + 2 * omega <= n) {
            report.preperiod = n0;
            report.period = omega;
            report.purely_periodic = (n0 == 0);
            report.certified = false; // prefix evidence only
            return report;
        }
    }
    report.budget_exhausted = true;
    return report;
}

} // namespace vfree
