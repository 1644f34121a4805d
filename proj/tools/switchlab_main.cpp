// Command-line front end: runs the scenarios, the possibilistic replay, the
// chained sweep, the enumeration, and the randomized property suites, and
// writes machine-readable JSON/CSV reports.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "switchlab/json_report.hpp"
#include "switchlab/selfcheck.hpp"

namespace {

using namespace switchlab;

std::string fmt9(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.9f", v);
    return buf;
}

void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + path + " for writing");
    out << text;
}

void write_json(const std::string& path, const nlohmann::json& j) {
    write_file(path, j.dump(2) + "\n");
}

struct SweepRange {
    int lo = 0, hi = 0;
};

SweepRange parse_sweep(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) throw CLI::ValidationError("--sweep expects lo:hi");
    SweepRange r;
    try {
        r.lo = std::stoi(text.substr(0, colon));
        r.hi = std::stoi(text.substr(colon + 1));
    } catch (const std::exception&) {
        throw CLI::ValidationError("--sweep expects integer lo:hi");
    }
    if (r.lo < 2 || r.hi < r.lo) throw CLI::ValidationError("--sweep range must satisfy 2 <= lo <= hi");
    return r;
}

int run_ghz_mermin(double noise, const std::string& json_path, const std::string& table_path) {
    const ScenarioData d = build_ghz_three_switch({noise});
    const SwitchDataReport cond = verify_switch_data_conditions(d);
    const MerminReport rep = eval_causal_mermin(d);

    std::cout << "ghz-mermin (depolarizing " << fmt9(noise) << ")\n";
    std::cout << "  parity terms:";
    for (double p : rep.parity_terms) std::cout << ' ' << fmt9(p);
    std::cout << "\n  alpha " << fmt9(rep.alpha) << "  beta " << fmt9(rep.beta) << "  gamma "
              << fmt9(rep.gamma) << "\n";
    std::cout << "  total " << fmt9(rep.total) << "  classical bound " << fmt9(rep.classical_bound)
              << "  algebraic max " << fmt9(rep.algebraic_max) << "\n";
    std::cout << "  data conditions: " << (cond.all_pass() ? "all pass" : "FAILURES") << "\n";
    std::cout << "  verdict: " << (rep.violated ? "VIOLATED" : "NOT_VIOLATED") << "\n";

    if (!json_path.empty()) write_json(json_path, to_json(rep));
    if (!table_path.empty()) write_json(table_path, to_json(d));
    return rep.violated && cond.all_pass() ? 0 : 1;
}

int run_possibilistic(double noise, double eps, const std::string& json_path) {
    ScenarioData d = build_ghz_three_switch({noise});
    d.poss = possibilize(d.joint, eps);
    const ProofCertificate cert = replay_possibilistic_contradiction(d);

    std::cout << "possibilistic replay (depolarizing " << fmt9(noise) << ", eps " << eps << ")\n";
    for (const auto& c : cert.conditions) {
        std::cout << "  [" << (c.pass ? "pass" : "FAIL") << "] " << c.name << " - " << c.detail
                  << "\n";
    }
    std::cout << "  verdict: " << cert.verdict << "\n";

    if (!json_path.empty()) write_json(json_path, to_json(cert));
    return cert.verdict == "INFEASIBLE" ? 0 : 1;
}

int run_chained(int n_single, const std::string& sweep, const std::string& json_path,
                const std::string& csv_path, const std::string& table_path) {
    SweepRange range{n_single, n_single};
    if (!sweep.empty()) range = parse_sweep(sweep);

    nlohmann::json reports = nlohmann::json::array();
    std::string csv =
        "N,bcValue,alpha,constrainedValue,classicalBound,algebraicMax,closedForm,causalFractionBound\n";
    bool as_expected = true;

    std::cout << "chained sweep n in [" << range.lo << ", " << range.hi << "]\n";
    for (int n = range.lo; n <= range.hi; ++n) {
        const ScenarioData d = build_chained_switch({n});
        const ChainReport rep = eval_chain_causal(d, n);
        reports.push_back(to_json(rep));
        csv += std::to_string(n) + "," + fmt9(rep.bc_value) + "," + fmt9(rep.alpha) + ","
               + fmt9(rep.constrained_value) + "," + fmt9(rep.classical_bound) + ","
               + fmt9(rep.algebraic_max) + "," + fmt9(rep.closed_form) + ","
               + fmt9(rep.causal_fraction_bound) + "\n";
        std::cout << "  n=" << n << "  bc " << fmt9(rep.bc_value) << "  constrained "
                  << fmt9(rep.constrained_value) << "  bound " << fmt9(rep.classical_bound)
                  << "  " << (rep.violated ? "VIOLATED" : "not violated") << "\n";
        as_expected = as_expected && std::abs(rep.bc_value - rep.closed_form) < 1e-9
                      && std::abs(rep.alpha) < 1e-12;
        if (!table_path.empty() && sweep.empty()) write_json(table_path, to_json(d));
    }

    if (!json_path.empty()) write_json(json_path, reports);
    if (!csv_path.empty()) write_file(csv_path, csv);
    return as_expected ? 0 : 1;
}

int run_enumerate(const std::string& json_path) {
    const ScenarioData d = build_ghz_three_switch({});
    const PossTable marg = marginalize(d.poss, {"a1", "a2", "x1", "x2"});
    const auto exts = enumerate_single_switch_extensions(marg);
    const bool forced = check_forced_determinism(exts);

    long candidates = 1;
    for (std::size_t s = 0; s < marg.support_size(); ++s) candidates *= 3;
    std::cout << "single-switch extension enumeration\n";
    std::cout << "  support cells: " << marg.support_size() << "\n";
    std::cout << "  candidates: " << candidates << "\n";
    std::cout << "  valid extensions: " << exts.size() << "\n";
    std::cout << "  forced determinism: " << (forced ? "holds" : "FAILS") << "\n";

    if (!json_path.empty()) {
        nlohmann::json jext = nlohmann::json::array();
        for (const auto& e : exts) {
            nlohmann::json cells = nlohmann::json::array();
            std::vector<int> digits;
            for (std::size_t s = 0; s < e.support_cells.size(); ++s) {
                marg.shape().decode(e.support_cells[s], digits);
                cells.push_back({{"cell", digits}, {"lambdas", e.lambda_sets[s]}});
            }
            jext.push_back(cells);
        }
        write_json(json_path, {{"support", marg.support_size()},
                               {"candidates", candidates},
                               {"valid", exts.size()},
                               {"forcedDeterminism", forced},
                               {"extensions", jext}});
    }
    return (!exts.empty() && forced) ? 0 : 1;
}

int run_random_models(int seeds, const std::string& json_path) {
    SuiteOptions opt;
    opt.mermin_seeds = seeds;
    opt.chained_seeds = seeds;
    opt.table_seeds = seeds;

    const double mermin_worst = detail::max_over_seeds(opt.mermin_seeds, 0, [](std::uint64_t s) {
        const ProbTable t = random_probabilistic_hco({s, 3, HcoFamily::Mermin});
        const MerminReport rep = eval_causal_mermin(t);
        const double claim = conditional_event_probability(
            t, Event::parity({"a1", "lambdaA"}, 0), Event::assign({{"x1", 1}, {"x2", 1}}));
        return std::max(rep.total - 3.0, (1.0 - rep.alpha) - claim);
    });
    double chained_worst = -1e300;
    for (int n = 2; n <= 4; ++n) {
        chained_worst = std::max(
            chained_worst, detail::max_over_seeds(opt.chained_seeds, 0, [n](std::uint64_t s) {
                const ProbTable t = random_probabilistic_hco({s, n, HcoFamily::Chained});
                const ChainedRestriction res = restrict_chained(t, n);
                return eval_bc(res.r, n) - 2.0 * n * res.alpha - 2.0 * n;
            }));
    }

    const bool pass = mermin_worst <= 1e-9 && chained_worst <= 1e-9;
    std::cout << "random model suites (" << seeds << " seeds)\n";
    std::cout << "  mermin-family worst margin:  " << fmt9(mermin_worst) << " (<= 0 expected)\n";
    std::cout << "  chained-family worst margin: " << fmt9(chained_worst) << " (<= 0 expected)\n";
    if (!json_path.empty()) {
        write_json(json_path, {{"seeds", seeds},
                               {"merminWorstMargin", round9(mermin_worst)},
                               {"chainedWorstMargin", round9(chained_worst)},
                               {"pass", pass}});
    }
    return pass ? 0 : 1;
}

int run_suite(const SuiteOptions& opt, const std::string& json_path) {
    const SuiteResult suite = run_selfcheck(opt);
    for (const auto& c : suite.checks) {
        std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << "  measured "
                  << fmt9(c.measured) << "  tol " << c.tolerance << "  - " << c.detail << "\n";
    }
    std::cout << (suite.all_pass() ? "ALL CHECKS PASSED" : "CHECK FAILURES") << " ("
              << fmt9(suite.elapsed_seconds) << " s)\n";
    if (!json_path.empty()) write_json(json_path, to_json(suite));
    return suite.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"switchlab: quantum switch correlations, causal inequalities, and their verification"};
    app.require_subcommand(1);

    double noise = 0.0, eps = 1e-9;
    int n = 3, seeds = 200;
    std::string sweep, json_path, csv_path, table_path;

    auto* ghz = app.add_subcommand("ghz-mermin", "three-switch scenario and the causal Mermin value");
    ghz->add_option("--noise", noise, "control-state depolarizing strength in [0,1]");
    ghz->add_option("--json", json_path, "write the inequality report as JSON");
    ghz->add_option("--table", table_path, "write the full scenario tables as JSON");

    auto* poss = app.add_subcommand("possibilistic", "replay the possibilistic impossibility certificate");
    poss->add_option("--noise", noise, "control-state depolarizing strength in [0,1]");
    poss->add_option("--eps", eps, "possibilization threshold");
    poss->add_option("--json", json_path, "write the certificate as JSON");

    auto* chain = app.add_subcommand("chained", "single-switch chained scenario");
    chain->add_option("--n", n, "number of chain links (>= 2)");
    chain->add_option("--sweep", sweep, "range lo:hi of n values");
    chain->add_option("--json", json_path, "write reports as JSON");
    chain->add_option("--csv", csv_path, "write sweep rows as CSV");
    chain->add_option("--table", table_path, "write the scenario tables as JSON (single n only)");

    auto* enm = app.add_subcommand("enumerate-hco", "exhaustive hidden-order extension enumeration");
    enm->add_option("--json", json_path, "write the enumeration summary as JSON");

    auto* rnd = app.add_subcommand("random-models", "randomized model property suites");
    rnd->add_option("--seeds", seeds, "seeds per family");
    rnd->add_option("--json", json_path, "write the summary as JSON");

    auto* self = app.add_subcommand("selfcheck", "run the full verification suite");
    self->add_option("--json", json_path, "write the suite result as JSON");
    SuiteOptions opt;
    int all_seeds = 0;
    self->add_option("--seeds", all_seeds, "seed count for every randomized suite");
    self->add_option("--mermin-seeds", opt.mermin_seeds, "seeds for the mermin-family suite");
    self->add_option("--chained-seeds", opt.chained_seeds, "seeds per n for the chained-family suite");
    self->add_option("--table-seeds", opt.table_seeds, "seeds for the event-list bound suite");
    self->add_option("--inject-noise", opt.inject_noise, "force depolarizing noise into the scenario")
        ->group(""); // test hook, hidden from help

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e); // prints help, exit 0
    } catch (const CLI::ParseError& e) {
        std::cerr << e.what() << "\n\n" << app.help() << std::flush;
        return 2;
    }

    try {
        if (app.got_subcommand(ghz)) return run_ghz_mermin(noise, json_path, table_path);
        if (app.got_subcommand(poss)) return run_possibilistic(noise, eps, json_path);
        if (app.got_subcommand(chain)) return run_chained(n, sweep, json_path, csv_path, table_path);
        if (app.got_subcommand(enm)) return run_enumerate(json_path);
        if (app.got_subcommand(rnd)) return run_random_models(seeds, json_path);
        if (app.got_subcommand(self)) {
            if (all_seeds > 0) {
                opt.mermin_seeds = all_seeds;
                opt.chained_seeds = all_seeds;
                opt.table_seeds = all_seeds;
            }
            return run_suite(opt, json_path);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
