#pragma once

#include <algorithm>
#include <chrono>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "lax.hpp"
#include "solutions.hpp"
#include "solve.hpp"

namespace mckp {

// ---------------------------------------------------------------------------
// Run configuration.  Parsed from a flat key = value file ('#' comments,
// dotted keys for the solution subsection).
// ---------------------------------------------------------------------------
struct SolutionChoice {
    std::string kind = "vacuum"; // vacuum | soliton | jet | file
    Rational p = Rational(2), q = Rational(3), a = Rational(1);
    unsigned long long seed = 1;
    std::string path; // kind = file
};

struct RunConfig {
    int n = 2;
    int jmax = 4;      // highest time index stored per component
    int cutoff = 4;    // weighted-degree truncation of every jet
    int aux_order = -1; // spectral-variable depth; -1 means "= cutoff"
    int band = 4;      // operator band depth for the dressed operators
    int radius = 2;    // charge box half-width
    int lax_jmax = 2;  // highest flow index exercised by operator suites
    unsigned long long seed = 1;
    SolutionChoice solution;
    std::vector<std::string> checks; // empty = every applicable suite
    std::string out;                 // optional JSON report path
};

inline const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names = {
        "signs",      "bilinear",  "fay",         "limits",
        "algebra",    "wave_lambda", "wave_time", "wave_charge",
        "sato",       "lax",       "negative_controls"};
    return names;
}

inline RunConfig parse_config(std::istream& is) {
    RunConfig cfg;
    std::string line;
    int lineno = 0;
    auto fail = [&](const std::string& msg) {
        return ConfigInvalid("config line " + std::to_string(lineno) + ": " + msg);
    };
    auto to_int = [&](const std::string& v) {
        size_t pos = 0;
        int r = 0;
        try {
            r = std::stoi(v, &pos);
        } catch (const std::exception&) {
            throw fail("expected an integer, got '" + v + "'");
        }
        if (pos != v.size()) throw fail("expected an integer, got '" + v + "'");
        return r;
    };
    auto to_seed = [&](const std::string& v) {
        try {
            return std::stoull(v);
        } catch (const std::exception&) {
            throw fail("expected a seed integer, got '" + v + "'");
        }
    };
    auto to_rational = [&](const std::string& v) {
        Rational r;
        try {
            r = Rational(v);
        } catch (const std::exception&) {
            throw fail("expected a rational like 3 or -1/2, got '" + v + "'");
        }
        if (r.get_den() == 0) throw fail("zero denominator in '" + v + "'");
        r.canonicalize();
        return r;
    };
    while (std::getline(is, line)) {
        ++lineno;
        if (size_t h = line.find('#'); h != std::string::npos) line.erase(h);
        size_t eq = line.find('=');
        std::string key = line.substr(0, eq == std::string::npos ? line.size() : eq);
        auto trim = [](std::string s) {
            size_t b = s.find_first_not_of(" \t\r");
            size_t e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        key = trim(key);
        if (key.empty()) continue;
        if (eq == std::string::npos) throw fail("expected 'key = value'");
        std::string value = trim(line.substr(eq + 1));
        if (key == "n") cfg.n = to_int(value);
        else if (key == "jmax") cfg.jmax = to_int(value);
        else if (key == "cutoff") cfg.cutoff = to_int(value);
        else if (key == "aux_order") cfg.aux_order = to_int(value);
        else if (key == "band") cfg.band = to_int(value);
        else if (key == "radius") cfg.radius = to_int(value);
        else if (key == "lax_jmax") cfg.lax_jmax = to_int(value);
        else if (key == "seed") cfg.seed = to_seed(value);
        else if (key == "out") cfg.out = value;
        else if (key == "solution") cfg.solution.kind = value;
        else if (key == "solution.p") cfg.solution.p = to_rational(value);
        else if (key == "solution.q") cfg.solution.q = to_rational(value);
        else if (key == "solution.a") cfg.solution.a = to_rational(value);
        else if (key == "solution.seed") cfg.solution.seed = to_seed(value);
        else if (key == "solution.path") cfg.solution.path = value;
        else if (key == "checks") {
            cfg.checks.clear();
            std::istringstream cs(value);
            std::string item;
            while (std::getline(cs, item, ',')) {
                item = trim(item);
                if (item.empty()) continue;
                if (std::find(suite_names().begin(), suite_names().end(), item) ==
                    suite_names().end())
                    throw fail("unknown check suite '" + item + "'");
                cfg.checks.push_back(item);
            }
        } else {
            throw fail("unknown key '" + key + "'");
        }
    }
    return cfg;
}

inline void validate_config(const RunConfig& cfg) {
    auto fail = [](const std::string& m) { return ConfigInvalid(m); };
    if (cfg.n < 1) throw fail("n must be >= 1");
    if (cfg.cutoff < 1) throw fail("cutoff must be >= 1");
    if (cfg.jmax < cfg.cutoff)
        throw fail("jmax must be >= cutoff (the trust model needs every time "
                   "index up to the grade cutoff)");
    if (cfg.radius < 0) throw fail("radius must be >= 0");
    if (cfg.lax_jmax < 1) throw fail("lax_jmax must be >= 1");
    if (cfg.band < cfg.lax_jmax + 2)
        throw fail("band must be >= lax_jmax + 2 so flow generators of every "
                   "requested order fit the trusted band");
    if (cfg.aux_order >= 0 && cfg.aux_order < cfg.cutoff)
        throw fail("aux_order must be >= cutoff (spectral depth cannot trail "
                   "the grade truncation)");
    if (cfg.solution.kind == "soliton") {
        if (cfg.n != 1) throw fail("the soliton family is one-component (n = 1)");
        if (cfg.solution.p == cfg.solution.q) throw fail("soliton momenta must differ");
        if (cfg.solution.a == Rational(-1)) throw fail("soliton amplitude -1 is degenerate");
    } else if (cfg.solution.kind == "file") {
        if (cfg.solution.path.empty()) throw fail("solution.path required for kind 'file'");
    } else if (cfg.solution.kind != "vacuum" && cfg.solution.kind != "jet") {
        throw fail("unknown solution kind '" + cfg.solution.kind + "'");
    }
}

inline TauFunction make_solution(RunConfig& cfg) {
    if (cfg.solution.kind == "vacuum")
        return vacuum_tau(cfg.n, cfg.jmax, cfg.cutoff, cfg.radius);
    if (cfg.solution.kind == "soliton")
        return soliton_tau_n1(cfg.solution.p, cfg.solution.q, cfg.solution.a, cfg.jmax,
                              cfg.cutoff);
    if (cfg.solution.kind == "jet")
        return solve_hierarchy_tau(cfg.n, cfg.jmax, cfg.cutoff, cfg.radius,
                                   cfg.solution.seed);
    std::ifstream f(cfg.solution.path);
    if (!f) throw ConfigInvalid("cannot open tau file '" + cfg.solution.path + "'");
    TauFunction tau = TauFunction::deserialize(f);
    // The stored model is authoritative for its own shape.
    cfg.n = tau.n();
    cfg.jmax = tau.jmax();
    cfg.cutoff = tau.cutoff();
    cfg.radius = tau.radius();
    return tau;
}

// ---------------------------------------------------------------------------
// Report records.
// ---------------------------------------------------------------------------
struct CheckRecord {
    std::string suite;
    std::string name;
    std::string params;
    CheckStatus status = CheckStatus::Error;
    size_t discrepancy_count = 0;
    std::string note;
};

struct RunReport {
    std::vector<CheckRecord> records;
    std::vector<double> ms; // parallel to records; kept out of comparisons

    size_t count(CheckStatus st) const {
        size_t r = 0;
        for (const CheckRecord& c : records)
            if (c.status == st) ++r;
        return r;
    }
    bool ok() const {
        for (const CheckRecord& c : records)
            if (c.status == CheckStatus::Fail || c.status == CheckStatus::Error)
                return false;
        return !records.empty();
    }
};

namespace detail {

class SuiteRunner {
public:
    SuiteRunner(const TauFunction& tau, const RunConfig& cfg, RunReport& out)
        : tau_(tau), cfg_(cfg), out_(out) {}

    bool enabled(const std::string& suite) const {
        return cfg_.checks.empty() ||
               std::find(cfg_.checks.begin(), cfg_.checks.end(), suite) !=
                   cfg_.checks.end();
    }

    void add(const std::string& suite, std::string params, const IdentityReport& rep) {
        CheckRecord c;
        c.suite = suite;
        c.name = rep.name;
        c.params = std::move(params);
        c.status = rep.status;
        c.discrepancy_count = rep.discrepancies.size();
        c.note = rep.note;
        out_.records.push_back(std::move(c));
        out_.ms.push_back(elapsed_ms());
    }

    // A negative control passes when the underlying check detects the
    // injected fault (fails), and fails when the fault goes unnoticed.
    void add_control(std::string name, std::string params, const IdentityReport& rep) {
        CheckRecord c;
        c.suite = "negative_controls";
        c.name = std::move(name);
        c.params = std::move(params);
        c.discrepancy_count = rep.discrepancies.size();
        if (rep.status == CheckStatus::Fail) {
            c.status = CheckStatus::Pass;
            c.note = "injected fault detected";
        } else if (rep.status == CheckStatus::Pass) {
            c.status = CheckStatus::Fail;
            c.note = "injected fault went undetected";
        } else {
            c.status = rep.status;
            c.note = rep.note;
        }
        out_.records.push_back(std::move(c));
        out_.ms.push_back(elapsed_ms());
    }

    void run() {
        if (enabled("signs")) run_signs();
        if (enabled("bilinear")) run_bilinear();
        if (enabled("fay")) run_fay();
        if (enabled("limits")) run_limits();
        bool ops = enabled("algebra") || enabled("wave_lambda") || enabled("wave_time") ||
                   enabled("wave_charge") || enabled("sato") || enabled("lax");
        if (ops) run_operator_suites();
        if (enabled("negative_controls")) run_negative_controls();
    }

private:
    double elapsed_ms() {
        auto now = std::chrono::steady_clock::now();
        double r = std::chrono::duration<double, std::milli>(now - mark_).count();
        mark_ = now;
        return r;
    }

    static std::string cs(const Charge& s) { return to_string(s); }

    void run_signs() {
        IdentityReport rep;
        rep.name = "sign-sweep";
        try {
            long k = sign_sweep(tau_.n(), 3);
            rep.status = CheckStatus::Pass;
            rep.note = std::to_string(k) + " instances";
        } catch (const Error& ex) {
            rep.status = CheckStatus::Fail;
            rep.note = ex.what();
        }
        add("signs", "radius=3", rep);
    }

    void run_bilinear() {
        int n = tau_.n();
        for (const Charge& s : tau_.charges()) {
            // t' = t pairings, undifferentiated and kappa-differentiated.
            for (int a = 1; a <= n; ++a)
                for (int b = 1; b <= n; ++b)
                    for (int k = 0; k <= (a == b ? n : 0); ++k) {
                        IdentityReport rep = detail::run_residual("bilinear", [&] {
                            return bilinear_pairing_residue(tau_, s, s, {}, a, b, k);
                        });
                        add("bilinear",
                            "s=" + cs(s) + " a=" + std::to_string(a) + " b=" +
                                std::to_string(b) + " k=" + std::to_string(k),
                            rep);
                    }
            // Charge-transfer pairings s' = s + e_a - e_b.
            for (int a = 1; a <= n; ++a)
                for (int b = 1; b <= n; ++b) {
                    if (a == b) continue;
                    IdentityReport rep = detail::run_residual("bilinear-transfer", [&] {
                        return bilinear_pairing_residue(tau_, s, shift_charge(s, a, b), {},
                                                        a, b, 0);
                    });
                    add("bilinear",
                        "s=" + cs(s) + " a=" + std::to_string(a) + " b=" +
                            std::to_string(b),
                        rep);
                }
            // Residue-path oracles of the differential identities.
            for (int a = 1; a <= n; ++a)
                add("bilinear", "s=" + cs(s) + " a=" + std::to_string(a),
                    oracle_dfi(tau_, s, a));
            for (int a = 1; a <= n; ++a)
                for (int b = 1; b <= n; ++b) {
                    if (a == b) continue;
                    std::string p =
                        "s=" + cs(s) + " a=" + std::to_string(a) + " b=" + std::to_string(b);
                    add("bilinear", p, oracle_dfii(tau_, s, a, b));
                    add("bilinear", p, oracle_dfiii(tau_, s, a, b));
                    for (int k = 1; k <= n; ++k) {
                        if (k == a || k == b) continue;
                        add("bilinear", p + " k=" + std::to_string(k),
                            oracle_dfiv(tau_, s, a, b, k));
                    }
                }
        }
    }

    void run_fay() {
        int n = tau_.n();
        for (const Charge& s : tau_.charges()) {
            for (int a = 1; a <= n; ++a)
                add("fay", "s=" + cs(s) + " a=" + std::to_string(a), check_dfi(tau_, s, a));
            for (int a = 1; a <= n; ++a)
                for (int b = 1; b <= n; ++b) {
                    if (a == b) continue;
                    std::string p =
                        "s=" + cs(s) + " a=" + std::to_string(a) + " b=" + std::to_string(b);
                    add("fay", p, check_dfii(tau_, s, a, b));
                    add("fay", p, check_dfiii(tau_, s, a, b));
                    for (int k = 1; k <= n; ++k) {
                        if (k == a || k == b) continue;
                        add("fay", p + " k=" + std::to_string(k),
                            check_dfiv(tau_, s, a, b, k));
                        add("fay", p + " l=" + std::to_string(k),
                            check_cfii(tau_, s, a, b, k));
                        for (int l = 1; l <= n; ++l) {
                            if (l == a || l == b || l == k) continue;
                            add("fay",
                                p + " l=" + std::to_string(l) + " k=" + std::to_string(k),
                                check_cfi(tau_, s, a, b, l, k));
                        }
                    }
                    if (n == 2) {
                        add("fay", p, detail::skipped_n("dfiv", 3, n));
                        add("fay", p, detail::skipped_n("cfii", 3, n));
                    }
                    if (n == 3) add("fay", p, detail::skipped_n("cfi", 4, n));
                }
        }
    }

    void run_limits() {
        int n = tau_.n();
        if (n < 2) {
            add("limits", "", detail::skipped_n("limit-dfii", 2, n));
            return;
        }
        for (const Charge& s : tau_.charges())
            for (int a = 1; a <= n; ++a)
                for (int b = 1; b <= n; ++b) {
                    if (a == b) continue;
                    std::string p =
                        "s=" + cs(s) + " a=" + std::to_string(a) + " b=" + std::to_string(b);
                    add("limits", p, check_limit_dfii(tau_, s, a, b));
                    add("limits", p, check_limit_dfiii(tau_, s, a, b));
                    for (int k = 1; k <= n; ++k) {
                        if (k == a || k == b) continue;
                        std::string pk = p + " k=" + std::to_string(k);
                        add("limits", pk, check_limit_dfiv_mu(tau_, s, a, b, k));
                        add("limits", pk, check_limit_dfiv_nu(tau_, s, a, b, k));
                        add("limits", pk, check_limit_dfiv_double(tau_, s, a, b, k));
                        add("limits", pk, check_limit_tower(tau_, s, a, b, k));
                    }
                    if (n == 2)
                        add("limits", p, detail::skipped_n("limit-dfiv", 3, n));
                }
    }

    // Operator suites run at the origin charge (every window contains it);
    // the charge families exercise its shifted neighbors.
    void run_operator_suites() {
        int n = tau_.n();
        Charge origin(static_cast<size_t>(n), 0);
        LaxBundle base;
        try {
            base = build_lax(tau_, origin, cfg_.band);
        } catch (const Error& ex) {
            IdentityReport rep;
            rep.name = "lax-bundle";
            rep.status = CheckStatus::Error;
            rep.note = ex.what();
            add("algebra", "s=" + cs(origin), rep);
            return;
        }
        std::string p0 = "s=" + cs(origin);

        if (enabled("algebra")) add("algebra", p0, check_algebra(base));
        if (enabled("wave_lambda"))
            for (int a = 1; a <= n; ++a)
                add("wave_lambda", p0 + " a=" + std::to_string(a),
                    check_wave_lambda(tau_, origin, a));
        if (enabled("wave_time"))
            for (int a = 1; a <= n; ++a)
                for (int j = 1; j <= cfg_.lax_jmax; ++j)
                    add("wave_time",
                        p0 + " a=" + std::to_string(a) + " j=" + std::to_string(j),
                        check_wave_time(tau_, base, a, j));
        if (enabled("sato"))
            for (int a = 1; a <= n; ++a)
                for (int j = 1; j <= cfg_.lax_jmax; ++j)
                    add("sato", p0 + " a=" + std::to_string(a) + " j=" + std::to_string(j),
                        check_sato(base, a, j));
        if (enabled("wave_charge"))
            for (int a = 1; a <= n; ++a)
                for (int b = 1; b <= n; ++b) {
                    if (a == b) continue;
                    add("wave_charge",
                        p0 + " a=" + std::to_string(a) + " b=" + std::to_string(b),
                        check_wave_charge(tau_, origin, a, b));
                }
        if (!enabled("lax")) return;

        for (int g = 1; g <= n; ++g)
            for (int j = 1; j <= cfg_.lax_jmax; ++j) {
                std::string pj = p0 + " g=" + std::to_string(g) + " j=" + std::to_string(j);
                add("lax", pj, check_lax_time_l(base, g, j));
                for (int b = 1; b <= n; ++b)
                    add("lax", pj + " b=" + std::to_string(b),
                        check_lax_time_r(base, b, g, j));
            }
        for (int a = 1; a <= n; ++a)
            for (int b = 1; b <= n; ++b) {
                if (a == b) continue;
                std::string pab =
                    p0 + " a=" + std::to_string(a) + " b=" + std::to_string(b);
                bool have = false;
                LaxBundle shifted;
                MatrixPsdo P;
                try {
                    P = build_charge_shift(tau_, origin, a, b);
                    shifted = build_lax(tau_, shift_charge(origin, a, b), cfg_.band);
                    have = true;
                } catch (const OutsideWindow& ex) {
                    IdentityReport rep;
                    rep.name = "lax-charge";
                    rep.status = CheckStatus::SkippedOutsideWindow;
                    rep.note = ex.what();
                    add("lax", pab, rep);
                }
                if (!have) continue;
                add("lax", pab, check_lax_charge_l(base, shifted, P));
                for (int g = 1; g <= n; ++g)
                    add("lax", pab + " g=" + std::to_string(g),
                        check_lax_charge_r(base, shifted, P, g));
                for (int g = 1; g <= n; ++g)
                    for (int j = 1; j <= cfg_.lax_jmax; ++j)
                        add("lax",
                            pab + " g=" + std::to_string(g) + " j=" + std::to_string(j),
                            check_lax_time_p(base, shifted, P, g, j));
            }
    }

    void run_negative_controls() {
        int n = tau_.n();
        Charge origin(static_cast<size_t>(n), 0);

        // Sign sensitivity: the shift-swap law is a genuine constraint, so
        // its sign-flipped variant must be violated somewhere in the box.
        {
            bool violated = false;
            for (const Charge& s : charge_box(n >= 2 ? n : 2, 2))
                if (epsilon(s, 1, 2) !=
                    epsilon(shift_charge(s, 1, 2), 1, 2)) // wrong variant of swap law
                    violated = true;
            IdentityReport rep;
            rep.name = "sign-flip";
            rep.status = violated ? CheckStatus::Fail : CheckStatus::Pass;
            add_control("fault-signs", "radius=2", rep);
        }

        // One corrupted jet coefficient of tau at the origin.
        int pj = std::min(2, tau_.cutoff());
        TauFunction bad =
            tau_.with_perturbed(origin, Monomial(TimeVar{1, pj}, 1), Rational(1, 7));
        std::string pp = "perturb t[1," + std::to_string(pj) + "] at " + cs(origin);

        if (n == 1) {
            add_control("fault-dfi", pp, check_dfi(bad, origin, 1));
            add_control("fault-oracle-dfi", pp, oracle_dfi(bad, origin, 1));
        } else {
            add_control("fault-dfii", pp, check_dfii(bad, origin, 1, 2));
            add_control("fault-oracle-dfii", pp, oracle_dfii(bad, origin, 1, 2));
            add_control("fault-limit-dfii", pp, check_limit_dfii(bad, origin, 1, 2));
            add_control("fault-wave-charge", pp, check_wave_charge(bad, origin, 1, 2));
            add_control("fault-lax-time-r", pp,
                        check_lax_time_r(bad, origin, 1, 2, 1, cfg_.band));
        }
        // For a single component the first flow coincides with the dressing
        // derivation, so its evolution laws hold for any tau; probe the
        // second flow there instead.
        int fj = (n == 1) ? 2 : 1;
        add_control("fault-wave-lambda", pp, check_wave_lambda(bad, origin, 1));
        add_control("fault-wave-time", pp, check_wave_time(bad, origin, 1, fj, cfg_.band));
        add_control("fault-sato", pp, check_sato(bad, origin, 1, fj, cfg_.band));
        if (n >= 3) {
            TauFunction bad3 =
                tau_.with_perturbed(origin, Monomial(TimeVar{3, 1}, 1), Rational(1, 5));
            std::string p3 = "perturb t[3,1] at " + cs(origin);
            add_control("fault-dfiv", p3, check_dfiv(bad3, origin, 1, 2, 3));
            add_control("fault-cfii", p3, check_cfii(bad3, origin, 1, 2, 3));
        }

        // The conjugation algebra holds for any tau; its control corrupts an
        // operator coefficient instead.
        try {
            LaxBundle b = build_lax(tau_, origin, cfg_.band);
            b.R[0].add_entry(-1, 0, 0, AuxSeries::constant(Rational(1, 3), tau_.cutoff()));
            add_control("fault-algebra", "corrupt R coefficient at D^-1",
                        check_algebra(b));
        } catch (const Error& ex) {
            IdentityReport rep;
            rep.name = "operator-algebra";
            rep.status = CheckStatus::Error;
            rep.note = ex.what();
            add_control("fault-algebra", "corrupt R coefficient at D^-1", rep);
        }
    }

    const TauFunction& tau_;
    const RunConfig& cfg_;
    RunReport& out_;
    std::chrono::steady_clock::time_point mark_ = std::chrono::steady_clock::now();
};

} // namespace detail

inline RunReport run_suites(const TauFunction& tau, const RunConfig& cfg) {
    RunReport report;
    detail::SuiteRunner(tau, cfg, report).run();
    return report;
}

// ---------------------------------------------------------------------------
// Report serialization.  The comparison payload (config echo + records +
// summary) is deterministic for a fixed config/seed; wall-clock timings live
// in a separate section.
// ---------------------------------------------------------------------------
inline nlohmann::ordered_json report_json(const RunConfig& cfg, const RunReport& rep) {
    nlohmann::ordered_json j;
    j["schema"] = "mckp-report/1";
    nlohmann::ordered_json jc;
    jc["n"] = cfg.n;
    jc["jmax"] = cfg.jmax;
    jc["cutoff"] = cfg.cutoff;
    jc["band"] = cfg.band;
    jc["radius"] = cfg.radius;
    jc["lax_jmax"] = cfg.lax_jmax;
    jc["seed"] = cfg.seed;
    jc["solution"] = cfg.solution.kind;
    if (cfg.solution.kind == "jet") jc["solution_seed"] = cfg.solution.seed;
    if (cfg.solution.kind == "soliton") {
        jc["p"] = to_string(cfg.solution.p);
        jc["q"] = to_string(cfg.solution.q);
        jc["a"] = to_string(cfg.solution.a);
    }
    j["config"] = std::move(jc);
    nlohmann::ordered_json recs = nlohmann::ordered_json::array();
    for (const CheckRecord& c : rep.records) {
        nlohmann::ordered_json r;
        r["suite"] = c.suite;
        r["identity"] = c.name;
        r["params"] = c.params;
        r["status"] = to_string(c.status);
        r["discrepancies"] = c.discrepancy_count;
        if (!c.note.empty()) r["note"] = c.note;
        recs.push_back(std::move(r));
    }
    j["records"] = std::move(recs);
    nlohmann::ordered_json sum;
    sum["total"] = rep.records.size();
    sum["pass"] = rep.count(CheckStatus::Pass);
    sum["fail"] = rep.count(CheckStatus::Fail);
    sum["skipped"] = rep.count(CheckStatus::SkippedInsufficientN) +
                     rep.count(CheckStatus::SkippedOutsideWindow);
    sum["error"] = rep.count(CheckStatus::Error);
    sum["ok"] = rep.ok();
    j["summary"] = std::move(sum);
    nlohmann::ordered_json times = nlohmann::ordered_json::array();
    for (double m : rep.ms) times.push_back(m);
    j["timings_ms"] = std::move(times);
    return j;
}

inline std::string report_text(const RunReport& rep) {
    std::ostringstream os;
    std::map<std::string, std::array<size_t, 4>> per; // pass, fail, skip, error
    for (const CheckRecord& c : rep.records) {
        auto& a = per[c.suite];
        switch (c.status) {
            case CheckStatus::Pass: ++a[0]; break;
            case CheckStatus::Fail: ++a[1]; break;
            case CheckStatus::Error: ++a[3]; break;
            default: ++a[2]; break;
        }
    }
    for (const std::string& s : suite_names()) {
        auto it = per.find(s);
        if (it == per.end()) continue;
        auto& a = it->second;
        os << s << ": " << a[0] << " pass, " << a[1] << " fail, " << a[2] << " skipped";
        if (a[3]) os << ", " << a[3] << " error";
        os << "\n";
    }
    for (const CheckRecord& c : rep.records)
        if (c.status == CheckStatus::Fail || c.status == CheckStatus::Error)
            os << "  " << to_string(c.status) << " " << c.suite << "/" << c.name << " "
               << c.params << (c.note.empty() ? "" : " -- " + c.note) << "\n";
    os << (rep.ok() ? "OK" : "FAILED") << "\n";
    return os.str();
}

} // namespace mckp
