#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <map>
#include <vector>

#include "lgm/centralized.hpp"
#include "lgm/errors.hpp"
#include "lgm/gen.hpp"
#include "lgm/mechanism.hpp"
#include "lgm/ne.hpp"
#include "lgm/rng.hpp"
#include "lgm/scenario.hpp"

using namespace lgm;

namespace {

Scenario power_benchmark() { return load_scenario(LGM_DATA_DIR "/appendix_c.json"); }

struct Constructed {
    Scenario scenario;
    CentralizedSolution solution;
    PersonalizedPrices prices;
    MessageProfile profile;
};

Constructed construct(const Scenario& sc) {
    Constructed out{sc, solve_centralized(sc), {}, {}};
    out.prices = personalized_prices_from_optimum(sc, out.solution.actions);
    out.profile = construct_ne(sc, out.solution.actions, out.prices);
    return out;
}

}  // namespace

TEST_CASE("equilibrium prices on the power benchmark match the closed form") {
    const Constructed c = construct(power_benchmark());
    // At a* = 1/4: own price = alpha/2 · a^(alpha-1) = 1, cross price
    // = −beta·a^(beta-1) = −1/2 for every neighbor.
    for (int i = 0; i < 3; ++i) {
        for (int k = 0; k < 3; ++k) {
            const double expected = (k == i) ? 1.0 : -0.5;
            CHECK(c.prices.l[i][k] == doctest::Approx(expected).epsilon(1e-8));
        }
    }
    // Column sums vanish by construction.
    for (int j = 0; j < 3; ++j) {
        double sum = 0.0;
        for (int i = 0; i < 3; ++i) sum += c.prices.l[i][j];
        CHECK(std::abs(sum) <= 1e-12);
    }
}

TEST_CASE("prices-from-optimum rejects non-stationary points") {
    const Scenario sc = power_benchmark();
    CHECK_THROWS_AS(personalized_prices_from_optimum(sc, {0.9, 0.9, 0.9}),
                    KKTNotSatisfied);
}

TEST_CASE("cyclic price system solves the difference equations") {
    const std::vector<int> cycle = {0, 1, 2};

    SUBCASE("benchmark column") {
        // l = (1, -1/2, -1/2) around a 3-cycle: pi must satisfy
        // pi[succ(p)] - pi[succ2(p)] = l[p] for each position p.
        const std::vector<double> pi = solve_price_system({1.0, -0.5, -0.5}, cycle);
        CHECK(pi[0] == doctest::Approx(0.5));
        CHECK(pi[1] == doctest::Approx(1.0));
        CHECK(pi[2] == 0.0);
    }

    SUBCASE("asymmetric column") {
        const std::vector<double> pi = solve_price_system({1.0, -1.0, 0.0}, cycle);
        CHECK(pi[0] == doctest::Approx(1.0));
        CHECK(pi[1] == doctest::Approx(1.0));
        CHECK(pi[2] == 0.0);
    }

    SUBCASE("zero column gives zero prices") {
        const std::vector<double> pi = solve_price_system({0.0, 0.0, 0.0}, cycle);
        CHECK(pi == std::vector<double>{0.0, 0.0, 0.0});
    }

    SUBCASE("random columns round-trip and normalize") {
        Rng rng(808);
        for (int trial = 0; trial < 200; ++trial) {
            const int s = 3 + static_cast<int>(rng.uniform(0.0, 5.99));
            std::vector<int> cyc(s);
            for (int p = 0; p < s; ++p) cyc[p] = p;
            std::vector<double> l(s);
            double sum = 0.0;
            for (int p = 0; p < s - 1; ++p) {
                l[p] = rng.uniform(-2.0, 2.0);
                sum += l[p];
            }
            l[s - 1] = -sum;  // enforce the zero-sum constraint exactly enough
            const std::vector<double> pi = solve_price_system(l, cyc);
            double lowest = pi[0];
            for (double v : pi) {
                CHECK(v >= 0.0);
                lowest = std::min(lowest, v);
            }
            CHECK(lowest == 0.0);  // minimal shift leaves an exact zero
            for (int p = 0; p < s; ++p) {
                const double recon = pi[(p + 1) % s] - pi[(p + 2) % s];
                CHECK(std::abs(recon - l[p]) <= 1e-9);
            }
        }
    }

    SUBCASE("inconsistent column is rejected") {
        CHECK_THROWS_AS(solve_price_system({1.0, 1.0, 1.0}, cycle), InconsistentColumn);
    }

    SUBCASE("cycles below the minimum size are rejected") {
        CHECK_THROWS_AS(solve_price_system({1.0, -1.0}, {0, 1}), CycleTooSmall);
    }
}

TEST_CASE("constructed profile realizes the optimum with zero taxes") {
    const Constructed c = construct(power_benchmark());
    const Allocation out =
        compute_outcome(c.profile, c.scenario.topology, c.scenario.table);
    for (int i = 0; i < 3; ++i) {
        CHECK(out.actions[i] == doctest::Approx(0.25).epsilon(1e-8));
        CHECK(std::abs(out.taxes[i]) <= 1e-12);
    }
    double total = 0.0;
    for (double t : out.taxes) total += t;
    CHECK(std::abs(total) <= 1e-9);
}

TEST_CASE("constructed profile satisfies the equilibrium characterization") {
    const Constructed c = construct(power_benchmark());
    const EquilibriumConditions rep =
        check_equilibrium_conditions(c.scenario, c.profile, c.solution.actions, c.prices);
    CHECK(rep.averaging_exact);
    CHECK(rep.max_price_diff <= 1e-9);
    CHECK(rep.complementarity_zero);
    CHECK(rep.prices_nonnegative);
    CHECK(rep.ok);
}

TEST_CASE("verifier accepts the constructed equilibrium and rejects others") {
    const Constructed c = construct(power_benchmark());

    VerifyConfig cfg;
    cfg.random_deviations = 800;
    cfg.seed = 3;
    const NEReport good = verify_ne(c.scenario, c.profile, cfg);
    CHECK(good.is_equilibrium);
    CHECK(good.worst_gain <= good.gain_tol);
    CHECK(good.deviations_tested >= 3 * 800);
    CHECK(good.payoffs.size() == 3);
    for (double p : good.payoffs) CHECK(p == doctest::Approx(0.375).epsilon(1e-6));

    // The all-zero profile realizes a = 0, where the power utilities see
    // marginal value ~infinity; a best response finds the improvement.
    const NEReport zero =
        verify_ne(c.scenario, zero_profile(c.scenario.topology), cfg);
    CHECK(!zero.is_equilibrium);
    CHECK(zero.worst_gain > 1e-3);

    // Perturbing one proposal away from the fixed point reopens a deviation.
    MessageProfile shifted = c.profile;
    shifted[1].actions[0] += 0.2;
    const NEReport bad = verify_ne(c.scenario, shifted, cfg);
    CHECK(!bad.is_equilibrium);
}

TEST_CASE("deviation evaluator agrees with the full outcome function") {
    GenConfig gen;
    gen.n = 7;
    gen.density = 0.5;
    gen.family = UtilityFamily::quadratic;
    gen.seed = 19;
    const Scenario sc = generate_scenario(gen);
    Rng rng(4242);
    MessageProfile profile = zero_profile(sc.topology);
    for (Message& m : profile) {
        for (double& a : m.actions) a = rng.uniform(-0.5, 0.5);
        for (double& p : m.prices) p = rng.uniform(0.0, 1.0);
    }
    for (int i = 0; i < sc.topology.n; ++i) {
        const UserDeviation dev(profile, sc, i);
        for (int trial = 0; trial < 25; ++trial) {
            Message cand = profile[i];
            for (double& a : cand.actions) a = rng.uniform(-1.0, 1.0);
            for (double& p : cand.prices) p = rng.uniform(0.0, 2.0);
            MessageProfile full = profile;
            full[i] = cand;
            const double direct = payoff(full, sc, i);
            const double fast = dev.payoff(cand);
            if (is_neg_inf(direct)) {
                CHECK(is_neg_inf(fast));
            } else {
                const double scale = std::max(1.0, std::abs(direct));
                CHECK(std::abs(direct - fast) <= 1e-12 * scale);
            }
        }
        // Base payoff must match the unperturbed evaluation the same way.
        const double base_direct = payoff(profile, sc, i);
        if (is_neg_inf(base_direct)) {
            CHECK(is_neg_inf(dev.base_payoff()));
        } else {
            CHECK(std::abs(base_direct - dev.base_payoff()) <=
                  1e-12 * std::max(1.0, std::abs(base_direct)));
        }
    }
}

TEST_CASE("payoff_gain handles the infeasibility sentinel by cases") {
    CHECK(payoff_gain(1.0, 3.5) == doctest::Approx(2.5));
    CHECK(payoff_gain(kNegInf, kNegInf) == 0.0);
    CHECK(payoff_gain(kNegInf, -7.0) == std::numeric_limits<double>::infinity());
    CHECK(payoff_gain(2.0, kNegInf) == kNegInf);
}

TEST_CASE("individual rationality holds at the constructed equilibrium") {
    const Constructed c = construct(power_benchmark());
    const Allocation out =
        compute_outcome(c.profile, c.scenario.topology, c.scenario.table);
    for (int i = 0; i < 3; ++i) {
        const std::vector<double> mine =
            actions_over(out.actions, c.scenario.topology, i);
        const double at_ne = aggregate_utility(c.scenario.utilities[i],
                                               c.scenario.boxes[i], mine, out.taxes[i]);
        const std::vector<double> zeros(mine.size(), 0.0);
        const double opt_out = aggregate_utility(c.scenario.utilities[i],
                                                 c.scenario.boxes[i], zeros, 0.0);
        CHECK(at_ne >= opt_out - 1e-9);
    }
}

TEST_CASE("degenerate linear scenario still yields a verifiable equilibrium") {
    // c_j = 1 everywhere with b = 3 makes each user's own marginal negative
    // and the welfare gradient exactly zero, so any interior point is optimal
    // and the solver stops at the midpoint start.
    const std::vector<std::vector<int>> g = {{1, 1, 1}, {1, 1, 1}, {1, 1, 1}};
    std::vector<ActionBox> boxes(3, ActionBox{-1.0, 2.0});
    const std::map<int, double> cmap = {{0, 1.0}, {1, 1.0}, {2, 1.0}};
    const std::vector<UtilityParams> params(3, UtilityParams::linear(cmap, 3.0));
    const Scenario sc = make_scenario("degenerate_linear", g, boxes, params);

    const Constructed c = construct(sc);
    CHECK(check_equilibrium_conditions(sc, c.profile, c.solution.actions, c.prices).ok);
    VerifyConfig cfg;
    cfg.random_deviations = 500;
    cfg.seed = 12;
    CHECK(verify_ne(sc, c.profile, cfg).is_equilibrium);
}

TEST_CASE("shuffled cycle assignments run the full pipeline unchanged") {
    GenConfig gen;
    gen.n = 6;
    gen.density = 0.6;
    gen.family = UtilityFamily::quadratic;
    gen.seed = 31;
    gen.policy = IndexPolicy{IndexPolicyKind::shuffled, 99};
    const Scenario sc = generate_scenario(gen);
    const Constructed c = construct(sc);

    CHECK(check_equilibrium_conditions(sc, c.profile, c.solution.actions, c.prices).ok);
    const Allocation out = compute_outcome(c.profile, sc.topology, sc.table);
    double total = 0.0;
    for (double t : out.taxes) total += t;
    CHECK(std::abs(total) <= 1e-9);
    VerifyConfig cfg;
    cfg.random_deviations = 400;
    cfg.seed = 8;
    CHECK(verify_ne(sc, c.profile, cfg).is_equilibrium);
}
