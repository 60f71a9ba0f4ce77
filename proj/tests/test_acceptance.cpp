// Acceptance gate: one line per criterion, nonzero exit if any fails.
#include <chrono>
#include <iostream>
#include <map>
#include <sstream>
#include <string>

#include <mckp/run.hpp>

using namespace mckp;

namespace {

int g_failures = 0;

void line(int k, bool ok, const std::string& detail) {
    std::cout << "criterion " << k << ": " << (ok ? "PASS" : "FAIL") << " - " << detail
              << "\n";
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string t(double s) {
    std::ostringstream os;
    os.precision(2);
    os << std::fixed << s << "s";
    return os.str();
}

struct SuiteTally {
    size_t pass = 0, fail = 0, skip = 0, error = 0;
};

std::map<std::string, SuiteTally> tally(const RunReport& rep) {
    std::map<std::string, SuiteTally> out;
    for (const CheckRecord& c : rep.records) {
        SuiteTally& a = out[c.suite];
        switch (c.status) {
            case CheckStatus::Pass: ++a.pass; break;
            case CheckStatus::Fail: ++a.fail; break;
            case CheckStatus::Error: ++a.error; break;
            default: ++a.skip; break;
        }
    }
    return out;
}

// 1. Exhaustive sign-layer sweep, all components counts 2..4, charges with
//    entries bounded by 3, under one second.
void criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    long total = 0;
    std::string err;
    try {
        for (int n = 2; n <= 4; ++n) total += sign_sweep(n, 3);
    } catch (const Error& ex) {
        err = ex.what();
    }
    double el = seconds_since(t0);
    if (!err.empty()) {
        line(1, false, "sign sweep raised: " + err);
        return;
    }
    line(1, el < 1.0,
         "sign layer exhaustive over n=2..4, entries <= 3: " + std::to_string(total) +
             " instances, " + t(el));
}

// 2. Constant model, three components, full suite, zero discrepancies.
//    Reported honestly: the constant charge-sector collection is not a
//    solution of the identity system for more than one component (already
//    the simplest cross-derivative identity reduces on it to a nonzero
//    constant), so only the structure-level checks can pass.  The criterion
//    is therefore unattainable as stated; the failure pattern below is the
//    derived one, and the same shape with a solved model passes everything
//    (see criterion 4 and the README notes).
void criterion2(const TauFunction*& vac_out) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg;
    cfg.n = 3;
    cfg.jmax = 6;
    cfg.cutoff = 6;
    cfg.radius = 2;
    cfg.solution.kind = "vacuum";
    static TauFunction tau = make_solution(cfg);
    vac_out = &tau;
    RunReport rep = run_suites(tau, cfg);
    double el = seconds_since(t0);
    auto per = tally(rep);
    // The attainable part must still hold: the checks that are valid for
    // any stored model (sign layer, conjugation algebra, and the
    // conjugation-transport identity families) pass, and nothing errors.
    bool structure_ok = per["signs"].fail == 0 && per["algebra"].fail == 0 &&
                        rep.count(CheckStatus::Error) == 0;
    bool all_ok = rep.ok();
    std::ostringstream d;
    d << "constant model n=3: " << rep.count(CheckStatus::Pass) << " pass, "
      << rep.count(CheckStatus::Fail)
      << " fail, " << t(el)
      << (all_ok ? ""
                 : "; unattainable as stated: a constant charge-sector collection is "
                   "not a solution for n>=2 (the cross-derivative identity reduces to "
                   "a nonzero constant on it), so solution-dependent checks fail; "
                   "structure-level checks ")
      << (all_ok ? "" : (structure_ok ? "all pass" : "ALSO FAIL"));
    line(2, all_ok && el < 120.0, d.str());
}

// 3. One-component soliton: differential three-term identity and the
//    pairing residue pass exactly, the dressed operator has scalar shape
//    D + u D^-1 + ..., and the wave evolution holds for flows up to order 3.
void criterion3() {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg;
    cfg.n = 1;
    cfg.jmax = 8;
    cfg.cutoff = 8;
    cfg.radius = 0;
    cfg.band = 5;
    cfg.lax_jmax = 3;
    cfg.solution.kind = "soliton";
    cfg.solution.p = Rational(2);
    cfg.solution.q = Rational(3);
    cfg.solution.a = Rational(1);
    TauFunction tau = make_solution(cfg);
    cfg.checks = {"bilinear", "fay", "wave_time"};
    RunReport rep = run_suites(tau, cfg);
    bool ok = rep.ok() && rep.count(CheckStatus::Pass) > 0;

    std::string shape = "scalar shape D + u D^-1 + ...";
    try {
        Charge origin(1, 0);
        LaxBundle b = build_lax(tau, origin, cfg.band);
        AuxSeries lead = b.L.entry(1, 0, 0) - AuxSeries::constant(1, tau.cutoff());
        bool lead_ok = lead.trusted_zero();
        bool diag_ok = b.L.entry(0, 0, 0).trusted_zero();
        if (!(lead_ok && diag_ok)) {
            ok = false;
            shape = "dressed operator NOT of scalar shape";
        }
    } catch (const Error& ex) {
        ok = false;
        shape = std::string("operator build raised: ") + ex.what();
    }
    double el = seconds_since(t0);
    line(3, ok && el < 60.0,
         "soliton p=2 q=3 a=1, degree 8: identities pass, " + shape + ", flows j<=3, " +
             t(el));
}

// 4. Solved two-component model, degree 5, window radius 2, seed 1: every
//    suite the solver does not impose is an independent validation and must
//    pass.
const TauFunction* criterion4(RunConfig& cfg_out) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg;
    cfg.n = 2;
    cfg.jmax = 5;
    cfg.cutoff = 5;
    cfg.radius = 2;
    cfg.solution.kind = "jet";
    cfg.solution.seed = 1;
    static TauFunction tau = make_solution(cfg);
    RunReport rep = run_suites(tau, cfg);
    double el = seconds_since(t0);
    auto per = tally(rep);
    std::ostringstream d;
    d << "solved model n=2 degree 5 seed 1: " << rep.count(CheckStatus::Pass)
      << " checks pass";
    for (const auto& [s, a] : per)
        if (a.fail || a.error) d << "; " << s << " has " << (a.fail + a.error) << " failures";
    d << ", " << t(el);
    line(4, rep.ok() && el < 300.0, d.str());
    cfg_out = cfg;
    return &tau;
}

// 5. The two constructions of the flow generators (power of the dressed
//    operator vs direct conjugation of the bare flow) agree inside the
//    trusted band for every component and order up to 3, on both the
//    criterion-2 and criterion-4 models.  build_B computes both and raises
//    on any disagreement.
void criterion5(const TauFunction* vac, const TauFunction* jet) {
    auto t0 = std::chrono::steady_clock::now();
    int built = 0;
    std::string err;
    try {
        for (const TauFunction* tp : {vac, jet}) {
            if (!tp) continue;
            Charge origin(static_cast<size_t>(tp->n()), 0);
            LaxBundle b = build_lax(*tp, origin, 5);
            for (int a = 1; a <= tp->n(); ++a)
                for (int j = 1; j <= 3; ++j) {
                    build_B(b, a, j);
                    ++built;
                }
        }
    } catch (const Error& ex) {
        err = ex.what();
    }
    double el = seconds_since(t0);
    if (!err.empty() || built == 0)
        line(5, false, "flow-generator cross-construction: " + (err.empty() ? "no instances" : err));
    else
        line(5, true,
             "flow generators agree between both constructions on " +
                 std::to_string(built) + " (component, order) instances, " + t(el));
}

// 6. The cross-multiplied identity checkers agree with the direct pairing
//    residue on twenty seeded solved models, both on the clean model (all
//    pass) and on a corrupted copy (both sides detect the fault).
void criterion6() {
    auto t0 = std::chrono::steady_clock::now();
    int agreements = 0;
    std::string err;
    try {
        for (unsigned long long seed = 1; seed <= 20; ++seed) {
            TauFunction tau = solve_hierarchy_tau(2, 4, 4, 1, seed);
            Charge origin(2, 0);
            auto agree = [&](const IdentityReport& a, const IdentityReport& b) {
                if (a.status != b.status)
                    throw InternalMismatch("checker/oracle disagreement at seed " +
                                           std::to_string(seed) + ": " + a.name + "=" +
                                           to_string(a.status) + " vs " + b.name + "=" +
                                           to_string(b.status));
                ++agreements;
            };
            agree(check_dfi(tau, origin, 1), oracle_dfi(tau, origin, 1));
            agree(check_dfii(tau, origin, 1, 2), oracle_dfii(tau, origin, 1, 2));
            agree(check_dfiii(tau, origin, 2, 1), oracle_dfiii(tau, origin, 2, 1));
            TauFunction bad =
                tau.with_perturbed(origin, Monomial(TimeVar{1, 2}, 1), Rational(1, 7));
            agree(check_dfii(bad, origin, 1, 2), oracle_dfii(bad, origin, 1, 2));
            if (check_dfii(bad, origin, 1, 2).status != CheckStatus::Fail)
                throw InternalMismatch("fault not detected at seed " +
                                       std::to_string(seed));
        }
    } catch (const Error& ex) {
        err = ex.what();
    }
    double el = seconds_since(t0);
    line(6, err.empty(),
         err.empty() ? "checker/oracle verdicts agree on " + std::to_string(agreements) +
                           " instances over 20 seeds, " + t(el)
                     : err);
}

// 7. Fault injection: every suite has a negative control, and every control
//    detects its fault on the solved two-component model.
void criterion7(const TauFunction* jet, const RunConfig& jet_cfg) {
    if (!jet) {
        line(7, false, "no solved model available");
        return;
    }
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = jet_cfg;
    cfg.checks = {"negative_controls"};
    RunReport rep = run_suites(*jet, cfg);
    // Which suite each control guards.
    std::map<std::string, std::string> target = {
        {"fault-signs", "signs"},         {"fault-oracle-dfii", "bilinear"},
        {"fault-dfii", "fay"},            {"fault-limit-dfii", "limits"},
        {"fault-algebra", "algebra"},     {"fault-wave-lambda", "wave_lambda"},
        {"fault-wave-time", "wave_time"}, {"fault-wave-charge", "wave_charge"},
        {"fault-sato", "sato"},           {"fault-lax-time-r", "lax"}};
    std::map<std::string, bool> covered;
    size_t undetected = 0;
    for (const CheckRecord& c : rep.records) {
        if (c.status != CheckStatus::Pass) ++undetected;
        auto it = target.find(c.name);
        if (it != target.end() && c.status == CheckStatus::Pass) covered[it->second] = true;
    }
    std::string missing;
    for (const std::string& s : suite_names()) {
        if (s == "negative_controls") continue;
        if (!covered.count(s)) missing += (missing.empty() ? "" : ", ") + s;
    }
    double el = seconds_since(t0);
    if (undetected || !missing.empty())
        line(7, false,
             std::to_string(undetected) + " undetected faults; suites without a "
             "detected control: " + (missing.empty() ? "none" : missing));
    else
        line(7, true,
             "every suite has a fault-injection control and every fault is detected (" +
                 std::to_string(rep.records.size()) + " controls), " + t(el));
}

// 8. Reports are identical across two runs with the same configuration and
//    seed, apart from the timing section.
void criterion8(const RunConfig& jet_cfg) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = jet_cfg;
    TauFunction t1 = make_solution(cfg);
    TauFunction t2 = make_solution(cfg);
    bool tau_same = t1.serialize() == t2.serialize();
    nlohmann::ordered_json a = report_json(cfg, run_suites(t1, cfg));
    nlohmann::ordered_json b = report_json(cfg, run_suites(t2, cfg));
    a.erase("timings_ms");
    b.erase("timings_ms");
    double el = seconds_since(t0);
    line(8, tau_same && a == b,
         tau_same && a == b
             ? "two runs with the same config/seed produce byte-identical models and "
               "reports outside the timing section, " + t(el)
             : std::string("nondeterminism: ") + (tau_same ? "reports" : "solver output") +
                   " differ");
}

} // namespace

int main() {
    criterion1();
    const TauFunction* vac = nullptr;
    criterion2(vac);
    criterion3();
    RunConfig jet_cfg;
    const TauFunction* jet = criterion4(jet_cfg);
    criterion5(vac, jet);
    criterion6();
    criterion7(jet, jet_cfg);
    criterion8(jet_cfg);
    std::cout << (g_failures ? "ACCEPTANCE: " + std::to_string(g_failures) + " criterion(s) failing"
                             : std::string("ACCEPTANCE: all criteria pass"))
              << "\n";
    return g_failures ? 1 : 0;
}
