// vfree-count: exact and modular free-subgroup counting for finite graphs of
// finite cyclic groups.

#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "vfree/errors.hpp"
#include "vfree/exact_seq.hpp"
#include "vfree/gog.hpp"
#include "vfree/invariants.hpp"
#include "vfree/modular_seq.hpp"
#include "vfree/rationality.hpp"

using json = nlohmann::ordered_json;
using namespace vfree;

namespace {

struct Output {
    std::string format = "text"; // text | json
    std::string path;            // empty = stdout

    void emit(const std::string& text, const json& machine) const {
        std::ostream* os = &std::cout;
        std::ofstream file;
        if (!path.empty()) {
            file.open(path);
            if (!file) throw input_error("cannot open output file: " + path);
            os = &file;
        }
        if (format == "text")
            *os << text;
        else
            *os << machine.dump(2) << '\n';
    }
};

std::string q_str(const mpq_class& q) { return q.get_str(); }
std::string z_str(const mpz_class& z) { return z.get_str(); }

json type_json(const GroupType& t) {
    json zeta = json::object();
    for (const auto& [kappa, z] : t.zeta) zeta[std::to_string(kappa)] = z;
    return json{{"m", std::to_string(t.m)}, {"zeta", zeta}};
}

int run_invariants(const std::string& file, u64 extra_p, const Output& out) {
    GraphOfGroups g = load_gog_file(file);
    GroupType t = group_type(g);
    mpq_class chi = euler_char(g);
    mpq_class chi_t = euler_char_from_type(t);
    u64 mu = free_rank(g);
    SmallRankClass cls = classify_small_rank(g);
    LargenessReport large = is_large(g);

    std::vector<u64> primes;
    for (u64 p = 2; p <= t.m; ++p)
        if (num::is_prime(p) && t.m % p == 0) primes.push_back(p);
    if (extra_p && std::find(primes.begin(), primes.end(), extra_p) == primes.end())
        primes.push_back(extra_p);

    std::ostringstream text;
    text << "m = " << t.m << "\n";
    text << "type: ";
    for (const auto& [kappa, z] : t.zeta) text << "zeta_" << kappa << " = " << z << "  ";
    text << "\n";
    text << "euler characteristic = " << q_str(chi) << " (type formula: " << q_str(chi_t)
         << ")\n";
    text << "free rank mu = " << mu << "\n";
    json mup = json::object();
    for (u64 p : primes) {
        u64 r = p_rank(g, p);
        text << "mu_" << p << " = " << r << "\n";
        mup[std::to_string(p)] = std::to_string(r);
    }
    text << "small-rank class: " << to_string(cls.kind);
    if (cls.kind == SmallRankKind::large) text << "(" << cls.mu << ")";
    text << "\n";
    text << "large: " << (large.is_large ? "yes" : "no") << " (" << large.detail << ")\n";

    json machine{{"command", "invariants"},
                 {"input", file},
                 {"type", type_json(t)},
                 {"euler_char", q_str(chi)},
                 {"mu", std::to_string(mu)},
                 {"mu_p", mup},
                 {"small_rank_class", to_string(cls.kind)},
                 {"large", large.is_large},
                 {"large_detail", large.detail}};
    out.emit(text.str(), machine);
    return 0;
}

int run_normalize(const std::string& file, const Output& out) {
    GraphOfGroups g = load_gog_file(file);
    GraphOfGroups n = normalize(g);
    json machine{{"command", "normalize"}, {"input", file}, {"graph", serialize_gog(n)}};
    out.emit(serialize_gog(n), machine);
    return 0;
}

int run_lift(const std::string& file, u64 factor, const Output& out) {
    GraphOfGroups g = load_gog_file(file);
    GraphOfGroups l = lift(g, factor);
    json machine{{"command", "lift"},
                 {"input", file},
                 {"factor", std::to_string(factor)},
                 {"graph", serialize_gog(l)}};
    out.emit(serialize_gog(l), machine);
    return 0;
}

int run_sequence(const std::string& file, u64 terms, bool with_g, const Output& out) {
    GraphOfGroups g = load_gog_file(file);
    SequencePrefix prefix = compute_prefix(g, terms);
    std::ostringstream text;
    json rows = json::array();
    for (u64 lam = 1; lam <= terms; ++lam) {
        if (with_g)
            text << lam << ' ' << q_str(prefix.g[lam]) << ' ' << z_str(prefix.f[lam]) << "\n";
        else
            text << lam << ' ' << z_str(prefix.f[lam]) << "\n";
        rows.push_back(json{{"lambda", std::to_string(lam)},
                            {"g", q_str(prefix.g[lam])},
                            {"f", z_str(prefix.f[lam])}});
    }
    json machine{{"command", "sequence"},
                 {"input", file},
                 {"m", std::to_string(prefix.m)},
                 {"terms", std::to_string(terms)},
                 {"rows", rows}};
    out.emit(text.str(), machine);
    return 0;
}

int run_modseq(const std::string& file, u64 p, u64 alpha, u64 terms, const Output& out) {
    GraphOfGroups g = load_gog_file(file);
    ModularPlan plan = plan_modular(g, p, alpha, terms);
    std::vector<mpz_class> f = f_mod(g, p, alpha, terms);
    std::ostringstream text;
    json rows = json::array();
    for (u64 lam = 1; lam <= terms; ++lam) {
        text << lam << ' ' << z_str(f[lam]) << "\n";
        rows.push_back(json{{"lambda", std::to_string(lam)}, {"f_mod", z_str(f[lam])}});
    }
    json machine{{"command", "modseq"},
                 {"input", file},
                 {"p", std::to_string(p)},
                 {"alpha", std::to_string(alpha)},
                 {"terms", std::to_string(terms)},
                 {"scale", std::to_string(plan.scale)},
                 {"guard", std::to_string(plan.guard)},
                 {"rows", rows}};
    out.emit(text.str(), machine);
    return 0;
}

int run_period(const std::string& file, u64 p, u64 alpha, u64 budget, const Output& out) {
    GraphOfGroups g = load_gog_file(file);
    ModRecurrence rec = recurrence_mod(g, p, alpha);
    std::vector<u64> f = f_mod_u64(g, p, alpha, rec.order);
    std::vector<u64> state(f.begin() + 1, f.end());
    PeriodReport report = detect_period(rec, state, budget);
    bool pure_cert = purity_certificate(rec);

    std::ostringstream text;
    text << "cutoff lambda* = " << rec.order + 1 << ", recurrence order d = " << rec.order
         << "\n";
    text << "coefficients (c_1..c_d mod " << p << "^" << alpha << "):";
    for (u64 c : rec.coeffs) text << ' ' << c;
    text << "\n";
    text << "purity certificate (c_d unit): " << (pure_cert ? "yes" : "no") << "\n";
    if (report.budget_exhausted) {
        text << "period: not detected within budget " << budget << " (theoretical cap "
             << z_str(report.theoretical_cap) << ")\n";
    } else {
        text << "preperiod = " << report.preperiod << ", period = " << report.period
             << (report.purely_periodic ? " (purely periodic)" : "")
             << (report.certified ? " [certified]" : "") << "\n";
        text << "theoretical cap: " << z_str(report.theoretical_cap) << "\n";
    }
    json coeffs = json::array();
    for (u64 c : rec.coeffs) coeffs.push_back(std::to_string(c));
    json machine{{"command", "period"},
                 {"input", file},
                 {"p", std::to_string(p)},
                 {"alpha", std::to_string(alpha)},
                 {"cutoff", std::to_string(rec.order + 1)},
                 {"order", std::to_string(rec.order)},
                 {"coefficients", coeffs},
                 {"purity_certificate", pure_cert},
                 {"preperiod", std::to_string(report.preperiod)},
                 {"period", std::to_string(report.period)},
                 {"purely_periodic", report.purely_periodic},
                 {"certified", report.certified},
                 {"budget_exhausted", report.budget_exhausted},
                 {"theoretical_cap", z_str(report.theoretical_cap)}};
    if (report.budget_exhausted)
        throw budget_error("period not detected within budget " + std::to_string(budget));
    out.emit(text.str(), machine);
    return 0;
}

int run_classify(const std::string& file, u64 p, const Output& out) {
    GraphOfGroups g = load_gog_file(file);
    Classification c = classify(g, p);
    std::ostringstream text;
    text << case_description(c) << "\n";
    text << "m = " << c.m << ", mu = " << c.mu << ", mu_" << p << " = " << c.mu_p << "\n";
    json machine{{"command", "classify"}, {"input", file},
                 {"p", std::to_string(p)},   {"case", case_name(c.label)},
                 {"description", case_description(c)}, {"m", std::to_string(c.m)},
                 {"mu", std::to_string(c.mu)}, {"mu_p", std::to_string(c.mu_p)}};
    out.emit(text.str(), machine);
    return 0;
}

int run_ratfit(const std::string& file, u64 p, u64 alpha, const std::string& sign, u64 terms,
               u64 max_k, u64 margin, const Output& out) {
    GraphOfGroups g = load_gog_file(file);
    int sigma;
    if (sign == "plus")
        sigma = +1;
    else if (sign == "minus")
        sigma = -1;
    else if (m_gamma(g) % p == 0 && p_rank(g, p) == 1)
        sigma = expected_denominator_sign(g, p).sigma;
    else
        sigma = +1;
    if (max_k == 0) max_k = free_rank(g) * alpha + 16;

    std::vector<mpz_class> f = f_mod(g, p, alpha, terms);
    std::vector<mpz_class> series(f.begin() + 1, f.end());
    RationalFit fit = fit_rational(series, p, alpha, sigma, max_k, margin);
    if (!fit_reproduces_prefix(fit, series))
        throw internal_error("ratfit: re-expansion does not reproduce the prefix");
    u64 period = rational_period(fit);

    std::ostringstream text;
    text << "denominator: (1 " << (sigma == 1 ? "-" : "+") << " z)^" << fit.k << " mod " << p
         << "^" << alpha << "\n";
    text << "numerator (constant term first):";
    if (fit.numerator.empty()) text << " 0";
    for (const auto& n : fit.numerator) text << ' ' << z_str(n);
    text << "\n";
    text << "verified prefix length: " << fit.verified_prefix_length
         << ", margin: " << fit.margin << "\n";
    text << "period of the coefficient sequence: " << period << "\n";
    json numer = json::array();
    for (const auto& n : fit.numerator) numer.push_back(z_str(n));
    json machine{{"command", "ratfit"},
                 {"input", file},
                 {"p", std::to_string(p)},
                 {"alpha", std::to_string(alpha)},
                 {"sigma", sigma},
                 {"k", std::to_string(fit.k)},
                 {"numerator", numer},
                 {"verified_prefix_length", std::to_string(fit.verified_prefix_length)},
                 {"margin", std::to_string(fit.margin)},
                 {"period", std::to_string(period)}};
    out.emit(text.str(), machine);
    return 0;
}

int run_polycheck(const std::string& file, u64 p, u64 alpha, u64 terms, u64 margin,
                  const Output& out) {
    GraphOfGroups g = load_gog_file(file);
    PolynomialCheck check = polynomial_check(g, p, alpha, terms, margin);
    std::ostringstream text;
    text << "polynomial over the prefix: " << (check.is_polynomial_prefix ? "yes" : "no")
         << " (trailing zeros: " << check.trailing_zeros << ")\n";
    text << "head:";
    if (check.head.empty()) text << " 0";
    for (const auto& c : check.head) text << ' ' << z_str(c);
    text << "\n";
    json head = json::array();
    for (const auto& c : check.head) head.push_back(z_str(c));
    json machine{{"command", "polycheck"},
                 {"input", file},
                 {"p", std::to_string(p)},
                 {"alpha", std::to_string(alpha)},
                 {"is_polynomial_prefix", check.is_polynomial_prefix},
                 {"trailing_zeros", std::to_string(check.trailing_zeros)},
                 {"head", head}};
    out.emit(text.str(), machine);
    return 0;
}

int run_modpform(const std::string& file, u64 p, u64 lam, const Output& out) {
    GraphOfGroups g = load_gog_file(file);
    std::optional<u64> value = mod_p_closed_form(g, p, lam);
    std::ostringstream text;
    if (value)
        text << "f_" << lam << " = " << *value << " mod " << p << "\n";
    else
        text << "not applicable at lambda = " << lam << "\n";
    json machine{{"command", "modpform"},
                 {"input", file},
                 {"p", std::to_string(p)},
                 {"lambda", std::to_string(lam)},
                 {"applicable", value.has_value()},
                 {"value", value ? std::to_string(*value) : std::string("")}};
    out.emit(text.str(), machine);
    return 0;
}

int run_psl2auto(u64 lam, const Output& out) {
    int r = psl2_mod3_automaton(lam);
    std::ostringstream text;
    text << r << "\n";
    json machine{{"command", "psl2auto"}, {"lambda", std::to_string(lam)}, {"value", r}};
    out.emit(text.str(), machine);
    return 0;
}

// ---- selfcheck ----------------------------------------------------------

struct Suite {
    std::string name;
    bool ok = true;
    std::string note;
};

GraphOfGroups fixture_free_product(const std::vector<u64>& orders) {
    GraphOfGroups g;
    for (std::size_t i = 0; i < orders.size(); ++i)
        g.vertices["v" + std::to_string(i)] = orders[i];
    for (std::size_t i = 0; i + 1 < orders.size(); ++i)
        g.edges.push_back({"e" + std::to_string(i), "v" + std::to_string(i),
                           "v" + std::to_string(i + 1), 1});
    return g;
}

GraphOfGroups random_valid_graph(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> nv_dist(1, 5);
    const int nv = nv_dist(rng);
    GraphOfGroups g;
    std::uniform_int_distribution<u64> order_dist(1, 12);
    for (int i = 0; i < nv; ++i) g.vertices["v" + std::to_string(i)] = order_dist(rng);
    auto vertex_id = [&](int i) { return "v" + std::to_string(i); };
    int eid = 0;
    // spanning path keeps it connected
    for (int i = 0; i + 1 < nv; ++i) {
        u64 a = g.vertices[vertex_id(i)], b = g.vertices[vertex_id(i + 1)];
        u64 e = std::gcd(a, b);
        std::vector<u64> divs = num::divisors(e);
        std::uniform_int_distribution<std::size_t> pick(0, divs.size() - 1);
        g.edges.push_back({"e" + std::to_string(eid++), vertex_id(i), vertex_id(i + 1),
                           divs[pick(rng)]});
    }
    std::uniform_int_distribution<int> extra_dist(0, 2);
    int extra = extra_dist(rng);
    std::uniform_int_distribution<int> v_dist(0, nv - 1);
    for (int j = 0; j < extra; ++j) {
        int a = v_dist(rng), b = v_dist(rng);
        u64 e = std::gcd(g.vertices[vertex_id(a)], g.vertices[vertex_id(b)]);
        std::vector<u64> divs = num::divisors(e);
        std::uniform_int_distribution<std::size_t> pick(0, divs.size() - 1);
        g.edges.push_back(
            {"x" + std::to_string(eid++), vertex_id(a), vertex_id(b), divs[pick(rng)]});
    }
    return g;
}

int run_selfcheck(bool full, const Output& out) {
    std::vector<Suite> suites;
    auto run_suite = [&](const std::string& name, auto&& body) {
        Suite s{name};
        try {
            body(s);
        } catch (const std::exception& e) {
            s.ok = false;
            s.note = e.what();
        }
        suites.push_back(std::move(s));
    };

    const GraphOfGroups psl2 = fixture_free_product({2, 3});
    const GraphOfGroups h6 = fixture_free_product({2, 6});

    run_suite("oracle-vs-formula", [&](Suite& s) {
        if (oracle_g_enumerate(psl2, 1) != mpq_class(5, 6)) throw internal_error("g_1 oracle");
        if (oracle_f_transitive(psl2, 1) != 5) throw internal_error("f_1 oracle");
        if (oracle_f_transitive(fixture_free_product({2, 2, 2}), 1) != 1)
            throw internal_error("f_1 oracle C2*C2*C2");
        std::vector<mpz_class> f = f_sequence(psl2, 2);
        if (f[1] != 5 || f[2] != 60) throw internal_error("exact f prefix");
        s.note = "g and f match the enumeration oracles";
    });

    run_suite("exact-vs-modular", [&](Suite& s) {
        for (const auto& g : {psl2, h6}) {
            std::vector<mpz_class> f = f_sequence(g, 60);
            for (u64 p : {2, 3, 5, 7}) {
                for (u64 alpha : {1, 2}) {
                    std::vector<mpz_class> fm = f_mod(g, p, alpha, 60);
                    mpz_class mod = num::pow_int(p, alpha);
                    for (u64 lam = 1; lam <= 60; ++lam)
                        if (fm[lam] != f[lam] % mod)
                            throw internal_error("mismatch at p=" + std::to_string(p));
                }
            }
        }
        s.note = "fast modular path agrees with the exact path";
    });

    run_suite("type-invariance-under-normalize", [&](Suite& s) {
        std::mt19937_64 rng(0x5eed);
        int count = 0;
        for (int i = 0; i < 200 && count < 40; ++i) {
            GraphOfGroups g = random_valid_graph(rng);
            if (!validate(g).empty()) continue;
            ++count;
            if (!(group_type(normalize(g)) == group_type(g)))
                throw internal_error("type changed under normalization");
        }
        s.note = std::to_string(count) + " random graphs";
    });

    run_suite("valuation-lower-bound", [&](Suite& s) {
        for (u64 p : {5, 7}) {
            LemmaMainResult r = lemma_main_check(psl2, p, 200);
            if (!r.ok) throw internal_error("valuation bound failed");
        }
        s.note = "v_p(g) >= v_p(lambda!) over 200 terms";
    });

    run_suite("invalid-fixture-rejected", [&](Suite& s) {
        const char* bad =
            "vertex a 2\nvertex b 3\nvertex c 5\nedge e a b 1\n"; // c unreachable
        try {
            parse_gog(bad);
            throw internal_error("two-component graph was accepted");
        } catch (const input_error&) {
            s.note = "two-component fixture rejected as expected";
        }
    });

    if (full) {
        run_suite("h6-golden-fit", [&](Suite& s) {
            std::vector<mpz_class> f = f_mod(h6, 3, 9, 400);
            std::vector<mpz_class> series(f.begin() + 1, f.end());
            RationalFit fit = fit_rational(series, 3, 9, -1, 43, 50);
            const std::vector<long> expect{15,   1845, 17433, 1566, 1584,
                                           7326, 6165, 1926,  585,  19680};
            if (fit.k != 10 || fit.numerator.size() != expect.size())
                throw internal_error("fit shape differs from the published one");
            for (std::size_t i = 0; i < expect.size(); ++i)
                if (fit.numerator[i] != expect[i])
                    throw internal_error("fit numerator differs from the published one");
            if (!fit_reproduces_prefix(fit, series))
                throw internal_error("fit does not reproduce the prefix");
            u64 period = rational_period(fit);
            if (period != 4374)
                throw internal_error("period of the fit changed: " + std::to_string(period));
            s.note = "k = 10, published numerator, least period 4374";
        });

        run_suite("classifier-truth-table", [&](Suite& s) {
            GraphOfGroups d4;
            d4.vertices = {{"a", 4}, {"b", 4}};
            d4.edges = {{"e", "a", "b", 2}};
            GraphOfGroups c6;
            c6.vertices = {{"a", 6}};
            if (classify(psl2, 5).label != MainCase::periodic_p_not_dividing_m ||
                classify(h6, 3).label != MainCase::periodic_mu_p_positive ||
                classify(c6, 2).label != MainCase::periodic_finite ||
                classify(d4, 2).label != MainCase::periodic_virtually_cyclic_p2 ||
                classify(psl2, 3).label != MainCase::not_periodic)
                throw internal_error("classifier label mismatch");
            s.note = "all five labels as published";
        });

        run_suite("psl2-digit-languages", [&](Suite& s) {
            std::vector<u64> f = f_mod_u64(psl2, 3, 1, 729);
            for (u64 lam = 1; lam <= 729; ++lam) {
                int a = psl2_mod3_automaton(lam);
                u64 expect = a < 0 ? 2 : static_cast<u64>(a);
                if (f[lam] != expect)
                    throw internal_error("digit language mismatch at " + std::to_string(lam));
            }
            s.note = "digit automaton matches f mod 3 through 729";
        });
    }

    std::ostringstream text;
    json jsuites = json::array();
    bool all_ok = true;
    for (const auto& s : suites) {
        text << (s.ok ? "PASS" : "FAIL") << "  " << s.name;
        if (!s.note.empty()) text << "  (" << s.note << ")";
        text << "\n";
        jsuites.push_back(json{{"name", s.name}, {"ok", s.ok}, {"note", s.note}});
        all_ok = all_ok && s.ok;
    }
    text << (all_ok ? "selfcheck passed" : "selfcheck FAILED") << "\n";
    json machine{{"command", "selfcheck"}, {"full", full}, {"suites", jsuites}, {"ok", all_ok}};
    out.emit(text.str(), machine);
    return all_ok ? 0 : 5;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"free subgroup counting for graphs of finite cyclic groups"};
    app.require_subcommand(1);

    Output out;
    app.add_option("--format", out.format, "output format")
        ->check(CLI::IsMember({"text", "json", "json-like"}))
        ->default_val("text");
    app.add_option("--output", out.path, "write the report to a file");

    std::string file;
    u64 p = 2, alpha = 1, terms = 50, lam = 1, factor = 1, budget = 1'000'000;
    u64 fit_terms = 400, poly_terms = 200;
    u64 max_k = 0, margin = 50, extra_p = 0;
    bool with_g = false, full = false;
    std::string sign = "auto";

    auto* inv = app.add_subcommand("invariants", "structural invariants of the group");
    inv->add_option("file", file)->required();
    inv->add_option("-p,--prime", extra_p, "also report mu_p for this prime");

    auto* norm = app.add_subcommand("normalize", "contract trivial tree edges");
    norm->add_option("file", file)->required();

    auto* lft = app.add_subcommand("lift", "multiply all stabiliser orders");
    lft->add_option("file", file)->required();
    lft->add_option("--factor", factor, "lift factor")->required();

    auto* seq = app.add_subcommand("sequence", "exact subgroup counts");
    seq->add_option("file", file)->required();
    seq->add_option("--terms", terms, "number of terms")->required();
    seq->add_flag("--with-g", with_g, "also print the torsion-free action counts");

    auto* mod = app.add_subcommand("modseq", "subgroup counts modulo p^alpha");
    mod->add_option("file", file)->required();
    mod->add_option("-p", p)->required();
    mod->add_option("-a,--alpha", alpha)->required();
    mod->add_option("--terms", terms)->required();

    auto* per = app.add_subcommand("period", "recurrence and certified period mod p^alpha");
    per->add_option("file", file)->required();
    per->add_option("-p", p)->required();
    per->add_option("-a,--alpha", alpha)->required();
    per->add_option("--budget", budget, "max states for the period walk");

    auto* cls = app.add_subcommand("classify", "periodicity classification");
    cls->add_option("file", file)->required();
    cls->add_option("-p", p)->required();

    auto* fit = app.add_subcommand("ratfit", "rational generating-function fit mod p^alpha");
    fit->add_option("file", file)->required();
    fit->add_option("-p", p)->required();
    fit->add_option("-a,--alpha", alpha)->required();
    fit->add_option("--sign", sign, "denominator sign: auto, plus (1-z) or minus (1+z)")
        ->check(CLI::IsMember({"auto", "plus", "minus"}));
    fit->add_option("--terms", fit_terms, "prefix length");
    fit->add_option("--max-k", max_k, "largest denominator power to try (0 = automatic)");
    fit->add_option("--margin", margin, "required trailing zero coefficients");

    auto* poly = app.add_subcommand("polycheck", "polynomial verdict mod p^alpha");
    poly->add_option("file", file)->required();
    poly->add_option("-p", p)->required();
    poly->add_option("-a,--alpha", alpha)->required();
    poly->add_option("--terms", poly_terms);
    poly->add_option("--margin", margin);

    auto* mpf = app.add_subcommand("modpform", "guarded mod-p closed form");
    mpf->add_option("file", file)->required();
    mpf->add_option("-p", p)->required();
    mpf->add_option("--lambda", lam)->required();

    auto* aut = app.add_subcommand("psl2auto", "modular-group digit automaton mod 3");
    aut->add_option("--lambda", lam)->required();

    auto* self = app.add_subcommand("selfcheck", "run the cross-validation suites");
    self->add_flag("--full", full, "include the long suites");

    for (CLI::App* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    try {
        app.parse(argc, argv);
        if (inv->parsed()) return run_invariants(file, extra_p, out);
        if (norm->parsed()) return run_normalize(file, out);
        if (lft->parsed()) return run_lift(file, factor, out);
        if (seq->parsed()) return run_sequence(file, terms, with_g, out);
        if (mod->parsed()) return run_modseq(file, p, alpha, terms, out);
        if (per->parsed()) return run_period(file, p, alpha, budget, out);
        if (cls->parsed()) return run_classify(file, p, out);
        if (fit->parsed())
            return run_ratfit(file, p, alpha, sign, fit_terms, max_k, margin, out);
        if (poly->parsed()) return run_polycheck(file, p, alpha, poly_terms, margin, out);
        if (mpf->parsed()) return run_modpform(file, p, lam, out);
        if (aut->parsed()) return run_psl2auto(lam, out);
        if (self->parsed()) return run_selfcheck(full, out);
        return 0;
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const input_error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const precondition_error& e) {
        std::cerr << "precondition violation: " << e.what() << "\n";
        return 3;
    } catch (const budget_error& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 4;
    } catch (const internal_error& e) {
        std::cerr << "internal assertion failure: " << e.what() << "\n";
        return 5;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 5;
    }
}
