#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "switchlab/causal_models.hpp"
#include "switchlab/inequalities.hpp"

using namespace switchlab;

namespace {

PossTable switch_marginal() {
    const ScenarioData d = build_ghz_three_switch({});
    return marginalize(d.poss, {"a1", "a2", "x1", "x2"});
}

PossTable full_support_base() {
    PossTable base({{"a1", 2}, {"a2", 2}, {"x1", 2}, {"x2", 2}});
    for (std::size_t f = 0; f < base.size(); ++f) base[f] = 1;
    return base;
}

HcoExtension manual_extension(const PossTable& base,
                              const std::vector<std::vector<int>>& sets) {
    std::vector<std::size_t> support;
    for (std::size_t f = 0; f < base.size(); ++f) {
        if (base[f]) support.push_back(f);
    }
    REQUIRE(support.size() == sets.size());
    std::vector<VarSpec> vars = base.vars();
    vars.push_back({"lambda", 2});
    PossTable ext(vars);
    std::vector<int> digits;
    for (std::size_t s = 0; s < support.size(); ++s) {
        base.shape().decode(support[s], digits);
        digits.push_back(0);
        for (int lam : sets[s]) {
            digits.back() = lam;
            ext[ext.shape().flat(digits)] = 1;
        }
    }
    return {std::move(ext), support, sets};
}

} // namespace

TEST_CASE("switch marginal has the expected support and a unique extension") {
    const PossTable marg = switch_marginal();
    REQUIRE(marg.support_size() == 5);

    const auto exts = enumerate_single_switch_extensions(marg);
    REQUIRE(exts.size() == 1);

    // The surviving assignment: both lambda values on every single-outcome
    // input cell, and the 11-cells pinned to lambda = a1.
    const auto& ext = exts[0];
    std::vector<int> digits;
    for (std::size_t s = 0; s < ext.support_cells.size(); ++s) {
        marg.shape().decode(ext.support_cells[s], digits);
        const int a1 = digits[0], x1 = digits[2], x2 = digits[3];
        if (x1 == 1 && x2 == 1) {
            REQUIRE(ext.lambda_sets[s] == std::vector<int>{a1});
        } else {
            REQUIRE(ext.lambda_sets[s] == std::vector<int>{0, 1});
        }
    }
    REQUIRE(check_forced_determinism(exts));
}

TEST_CASE("every enumerated extension marginalizes back to its base") {
    const PossTable marg = switch_marginal();
    for (const auto& ext : enumerate_single_switch_extensions(marg)) {
        const PossTable back = marginalize(ext.table, {"a1", "a2", "x1", "x2"});
        REQUIRE(back.values() == marg.values());
    }
}

TEST_CASE("a base with both outputs reading the remote input admits no extension") {
    // a1 = x2 and a2 = x1 deterministically
    PossTable base({{"a1", 2}, {"a2", 2}, {"x1", 2}, {"x2", 2}});
    for (int x1 = 0; x1 < 2; ++x1) {
        for (int x2 = 0; x2 < 2; ++x2) {
            base[base.shape().flat({x2, x1, x1, x2})] = 1;
        }
    }
    REQUIRE(enumerate_single_switch_extensions(base).empty());
}

TEST_CASE("a fully independent base accepts the both-lambdas-everywhere extension") {
    const PossTable base = full_support_base();
    const HcoExtension ext = manual_extension(
        base, std::vector<std::vector<int>>(16, std::vector<int>{0, 1}));
    REQUIRE(check_independence(ext.table, {"lambda"}, {"x1", "x2"}).independent);
    REQUIRE(check_independence(ext.table, {"a1"}, {"x2"}, Given::at({{"lambda", 0}})).independent);
    REQUIRE(check_independence(ext.table, {"a2"}, {"x1"}, Given::at({{"lambda", 1}})).independent);
}

TEST_CASE("enumeration requires full input support") {
    PossTable base({{"a1", 2}, {"a2", 2}, {"x1", 2}, {"x2", 2}});
    base[base.shape().flat({0, 0, 0, 0})] = 1; // only x = 00 supported
    REQUIRE_THROWS_AS(enumerate_single_switch_extensions(base), std::invalid_argument);
}

TEST_CASE("forced determinism fails when a1=1 escapes at x2=0") {
    const PossTable base = full_support_base();
    const HcoExtension ext = manual_extension(
        base, std::vector<std::vector<int>>(16, std::vector<int>{0, 1}));
    // at x1=x2=1 every (a1, lambda) combination is possible, so the
    // implication a1 = lambda cannot hold
    REQUIRE_FALSE(check_forced_determinism({ext}));

    // vacuous on the empty list, and monotone under removal
    REQUIRE(check_forced_determinism({}));
    auto exts = enumerate_single_switch_extensions(switch_marginal());
    REQUIRE(check_forced_determinism(exts));
    exts.push_back(ext);
    REQUIRE_FALSE(check_forced_determinism(exts));
    exts.pop_back();
    REQUIRE(check_forced_determinism(exts));
}

TEST_CASE("parity model exhaustion") {
    const ParityModelScan scan = bruteforce_parity_models();
    REQUIRE(scan.max_satisfied == 3);
    REQUIRE(scan.satisfying_all == 0);

    // flipping one target parity makes the system satisfiable
    const ParityModelScan flipped = bruteforce_parity_models({0, 1, 1, 0});
    REQUIRE(flipped.satisfying_all > 0);
    REQUIRE(flipped.max_satisfied == 4);

    // pure function: identical on repeated calls
    const ParityModelScan again = bruteforce_parity_models();
    REQUIRE(again.max_satisfied == scan.max_satisfied);
    REQUIRE(again.satisfying_all == scan.satisfying_all);
}

TEST_CASE("deterministic chain bound scan") {
    REQUIRE(bruteforce_bc_bound(2).max_constrained == Catch::Approx(4.0).margin(1e-12));
    REQUIRE(bruteforce_bc_bound(3).max_constrained == Catch::Approx(6.0).margin(1e-12));
    for (int n = 2; n <= 5; ++n) {
        const BcBoundScan scan = bruteforce_bc_bound(n);
        REQUIRE(scan.max_constrained == Catch::Approx(2.0 * n).margin(1e-12));
        REQUIRE(scan.monogamy_holds);
    }
    REQUIRE_THROWS_AS(bruteforce_bc_bound(1), std::invalid_argument);
    REQUIRE_THROWS_AS(bruteforce_bc_bound(11), std::invalid_argument);
}

TEST_CASE("possibilistic replay on exact data is infeasible with all checks green") {
    const ScenarioData d = build_ghz_three_switch({});
    const ProofCertificate cert = replay_possibilistic_contradiction(d);
    REQUIRE(cert.verdict == "INFEASIBLE");
    REQUIRE(cert.all_conditions_pass());
    REQUIRE(cert.forced_determinism);
    REQUIRE(cert.xor_system_parity == 1);
    REQUIRE(cert.models_satisfying_all == 0);
    REQUIRE(cert.max_parity_constraints == 3);
    REQUIRE(cert.candidates_per_wing == 243);
    for (std::size_t w = 0; w < 3; ++w) REQUIRE(cert.valid_extensions[w] == 1);
}

TEST_CASE("replay on noisy data is not applicable") {
    const ScenarioData d = build_ghz_three_switch({0.3});
    const ProofCertificate cert = replay_possibilistic_contradiction(d);
    REQUIRE(cert.verdict == "NOT_APPLICABLE");
    bool some_failure = false;
    for (const auto& c : cert.conditions) some_failure = some_failure || !c.pass;
    REQUIRE(some_failure);
}

TEST_CASE("an even parity target system carries no contradiction") {
    const ScenarioData d = build_ghz_three_switch({});
    const ProofCertificate cert = replay_possibilistic_contradiction(d, {0, 1, 1, 0});
    REQUIRE(cert.verdict == "NO_CONTRADICTION");
    REQUIRE(cert.xor_system_parity == 0);
    REQUIRE(cert.models_satisfying_all > 0);
}

TEST_CASE("random mermin models satisfy the structural independences") {
    for (std::uint64_t seed : {0ull, 1ull, 42ull}) {
        const ProbTable t = random_probabilistic_hco({seed, 3, HcoFamily::Mermin});
        REQUIRE(std::abs(t.total_mass() - 1.0) < 1e-9);
        const auto lam_free = check_independence(
            t, {"lambdaA", "lambdaB", "lambdaC"}, {"x1", "x2", "y1", "y2", "z1", "z2"},
            Given::none(), 1e-12);
        REQUIRE(lam_free.independent);
        REQUIRE(check_independence(t, {"a1"}, {"x2"},
                                   Given::at({{"lambdaA", 0}}), 1e-12).independent);
        REQUIRE(check_independence(t, {"a2"}, {"x1"},
                                   Given::at({{"lambdaA", 1}}), 1e-12).independent);
        REQUIRE(check_independence(t, {"a1", "a2", "lambdaA"}, {"y1", "y2", "z1", "z2"},
                                   Given::on_vars({"x1", "x2"}), 1e-12).independent);
    }
}

TEST_CASE("random mermin models obey the bound and the forced-outcome claim") {
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        const ProbTable t = random_probabilistic_hco({seed, 3, HcoFamily::Mermin});
        const MerminReport rep = eval_causal_mermin(t);
        REQUIRE(rep.total <= 3.0 + 1e-9);
        const double claim = conditional_event_probability(
            t, Event::parity({"a1", "lambdaA"}, 0), Event::assign({{"x1", 1}, {"x2", 1}}));
        REQUIRE(claim >= 1.0 - rep.alpha - 1e-9);
    }
}

TEST_CASE("random chained models obey the constrained chain bound") {
    for (int n = 2; n <= 4; ++n) {
        for (std::uint64_t seed = 0; seed < 60; ++seed) {
            const ProbTable t = random_probabilistic_hco({seed, n, HcoFamily::Chained});
            REQUIRE(std::abs(t.total_mass() - 1.0) < 1e-9);
            const ChainedRestriction res = restrict_chained(t, n);
            REQUIRE(eval_bc(res.r, n) - 2.0 * n * res.alpha <= 2.0 * n + 1e-9);
        }
    }
}

TEST_CASE("degenerate chained model: pinned order, deterministic first outcome") {
    // lambda = 0 always, a1 copies x1, everything else deterministic zeros.
    const int n = 2;
    ProbTable t({{"lambda", 2}, {"x1", 2}, {"x2", 2}, {"x3", n + 1}, {"y", n + 1},
                 {"a1", 2}, {"a2", 2}, {"a3", 2}, {"b", 2}});
    const double w = 1.0 / (4.0 * (n + 1) * (n + 1));
    std::vector<int> d(9);
    for (int x1 = 0; x1 < 2; ++x1)
        for (int x2 = 0; x2 < 2; ++x2)
            for (int x3 = 0; x3 <= n; ++x3)
                for (int y = 0; y <= n; ++y) {
                    d = {0, x1, x2, x3, y, x1, 0, 0, 0};
                    t[t.shape().flat(d)] = w;
                }

    const ChainedRestriction res = restrict_chained(t, n);
    // alpha = P(a1=1|10) + P(a2=1|01) + P(a1 a2 = 00|11) = 1 + 0 + 0
    REQUIRE(res.alpha == Catch::Approx(1.0).margin(1e-12));
    // claim holds with equality: P(a1 = lambda | x=11) = 0 = 1 - alpha
    const double claim = conditional_event_probability(
        t, Event::parity({"a1", "lambda"}, 0), Event::assign({{"x1", 1}, {"x2", 1}}));
    REQUIRE(claim == Catch::Approx(0.0).margin(1e-12));
    REQUIRE(eval_bc(res.r, n) - 2.0 * n * res.alpha <= 2.0 * n + 1e-9);
}
