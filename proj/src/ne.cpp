#include "lgm/ne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "lgm/dynamics.hpp"
#include "lgm/errors.hpp"
#include "lgm/rng.hpp"

namespace lgm {

PersonalizedPrices personalized_prices_from_optimum(const Scenario& scenario,
                                                    const std::vector<double>& a_star,
                                                    double kkt_tol) {
    const int n = scenario.n();
    if (static_cast<int>(a_star.size()) != n) {
        throw DimensionMismatch("optimum has " + std::to_string(a_star.size()) +
                                " actions, expected " + std::to_string(n));
    }
    const KKTReport kkt = kkt_residual(scenario, a_star);
    if (kkt.max_residual > kkt_tol) {
        throw KKTNotSatisfied("candidate optimum has KKT residual " +
                              std::to_string(kkt.max_residual) + " > " +
                              std::to_string(kkt_tol) +
                              "; prices require a centralized optimum");
    }

    PersonalizedPrices prices;
    prices.l.resize(n);
    // Off-diagonal entries first: marginal utilities at the optimum.
    for (int i = 0; i < n; ++i) {
        const auto& r_set = scenario.topology.r_sets[i];
        const std::vector<double> grad = utility_gradient(
            scenario.utilities[i], actions_over(a_star, scenario.topology, i));
        prices.l[i].assign(r_set.size(), 0.0);
        for (std::size_t k = 0; k < r_set.size(); ++k) {
            if (r_set[k] != i) prices.l[i][k] = grad[k];
        }
    }
    // Own-good prices close each column to zero.
    for (int i = 0; i < n; ++i) {
        double column_rest = 0.0;
        for (int k : scenario.topology.c_sets[i]) {
            if (k == i) continue;
            column_rest += prices.l[k][scenario.topology.r_pos[k][i]];
        }
        prices.l[i][scenario.topology.r_pos[i][i]] = -column_rest;
    }
    return prices;
}

std::vector<double> price_column(const PersonalizedPrices& prices,
                                 const NetworkTopology& topology, int j,
                                 const std::vector<int>& cycle) {
    std::vector<double> column(cycle.size());
    for (std::size_t p = 0; p < cycle.size(); ++p) {
        column[p] = prices.l[cycle[p]][topology.r_pos[cycle[p]][j]];
    }
    return column;
}

std::vector<double> solve_price_system(const std::vector<double>& l_column,
                                       const std::vector<int>& cycle, int good) {
    const std::size_t s = cycle.size();
    if (l_column.size() != s) {
        throw DimensionMismatch("price column and cycle size disagree for good " +
                                std::to_string(good));
    }
    if (s < 3) throw CycleTooSmall(good, static_cast<int>(s));
    double sum = 0.0;
    for (double v : l_column) sum += v;
    if (std::abs(sum) > 1e-9) throw InconsistentColumn(good, sum);

    // The user at 1-based position q pins π_{q+1} − π_{q+2} = l_q. Anchoring
    // position 1 at 0 and walking the chain backwards one equation at a time
    // determines every entry; the dropped equation holds because Σ l = 0.
    std::vector<double> pi(s, 0.0);
    pi[1] = -l_column[s - 1];
    for (std::size_t p = 2; p < s; ++p) pi[p] = pi[p - 1] - l_column[p - 2];

    const double lowest = *std::min_element(pi.begin(), pi.end());
    for (double& v : pi) v -= lowest;  // minimal nonnegativity shift
    return pi;
}

MessageProfile construct_ne(const Scenario& scenario, const std::vector<double>& a_star,
                            const PersonalizedPrices& prices) {
    const NetworkTopology& topology = scenario.topology;
    const int n = topology.n;
    if (static_cast<int>(a_star.size()) != n) {
        throw DimensionMismatch("optimum has " + std::to_string(a_star.size()) +
                                " actions, expected " + std::to_string(n));
    }
    MessageProfile profile = zero_profile(topology);
    for (int k = 0; k < n; ++k) {
        const auto& r_set = topology.r_sets[k];
        for (std::size_t slot = 0; slot < r_set.size(); ++slot) {
            profile[k].actions[slot] = a_star[r_set[slot]];
        }
    }
    for (int j = 0; j < n; ++j) {
        const std::vector<int>& cycle = scenario.table.order[j];
        const std::vector<double> pi =
            solve_price_system(price_column(prices, topology, j, cycle), cycle, j);
        for (std::size_t p = 0; p < cycle.size(); ++p) {
            profile[cycle[p]].prices[topology.r_pos[cycle[p]][j]] = pi[p];
        }
    }
    return profile;
}

EquilibriumConditions check_equilibrium_conditions(const Scenario& scenario, const MessageProfile& profile,
                              const std::vector<double>& a_star,
                              const PersonalizedPrices& prices) {
    const NetworkTopology& topology = scenario.topology;
    EquilibriumConditions report;
    report.averaging_exact = true;
    report.complementarity_zero = true;
    report.prices_nonnegative = true;
    for (int i = 0; i < topology.n; ++i) {
        for (int k : topology.c_sets[i]) {
            if (profile[k].actions[topology.r_pos[k][i]] != a_star[i]) {
                report.averaging_exact = false;
            }
        }
    }
    for (int i = 0; i < topology.n; ++i) {
        const auto& r_set = topology.r_sets[i];
        for (std::size_t k = 0; k < r_set.size(); ++k) {
            const int j = r_set[k];
            report.max_price_diff =
                std::max(report.max_price_diff,
                         std::abs(personalized_price(profile, topology, scenario.table, i, j) -
                                  prices.l[i][k]));
            const int succ = cyclic_successor(scenario.table, j, i, 1);
            const double gap =
                profile[i].actions[k] - profile[succ].actions[topology.r_pos[succ][j]];
            if (profile[i].prices[k] * gap * gap != 0.0) report.complementarity_zero = false;
            if (!(profile[i].prices[k] >= 0.0)) report.prices_nonnegative = false;
        }
    }
    report.ok = report.averaging_exact && report.complementarity_zero &&
                report.prices_nonnegative && report.max_price_diff <= 1e-9;
    return report;
}

UserDeviation::UserDeviation(const MessageProfile& profile, const Scenario& scenario, int i)
    : scenario_(&scenario), user_(i), current_(profile[i]) {
    const NetworkTopology& topology = scenario.topology;
    const auto& r_set = topology.r_sets[i];
    const std::size_t slots = r_set.size();
    cycle_size_.resize(slots);
    others_sum_.resize(slots);
    price_coeff_.resize(slots);
    successor_action_.resize(slots);
    type3_.resize(slots);
    for (std::size_t k = 0; k < slots; ++k) {
        const int j = r_set[k];
        const int succ = cyclic_successor(scenario.table, j, i, 1);
        const int succ2 = cyclic_successor(scenario.table, j, i, 2);
        const int succ_slot = topology.r_pos[succ][j];
        const int succ2_slot = topology.r_pos[succ2][j];
        cycle_size_[k] = static_cast<double>(topology.c_sets[j].size());
        double sum = 0.0;
        for (int u : topology.c_sets[j]) {
            if (u != i) sum += profile[u].actions[topology.r_pos[u][j]];
        }
        others_sum_[k] = sum;
        price_coeff_[k] = profile[succ].prices[succ_slot] - profile[succ2].prices[succ2_slot];
        successor_action_[k] = profile[succ].actions[succ_slot];
        const double succ_gap =
            profile[succ].actions[succ_slot] - profile[succ2].actions[succ2_slot];
        type3_[k] = profile[succ].prices[succ_slot] * succ_gap * succ_gap;
    }
    base_payoff_ = payoff(current_);
}

double UserDeviation::payoff(const Message& candidate) const {
    const std::size_t slots = price_coeff_.size();
    if (candidate.actions.size() != slots || candidate.prices.size() != slots) {
        throw DimensionMismatch("candidate message of user " + std::to_string(user_) +
                                " must carry " + std::to_string(slots) + " proposals");
    }
    std::vector<double> allocated_actions(slots);
    double tax = 0.0;
    for (std::size_t k = 0; k < slots; ++k) {
        const double a_hat = allocated(k, candidate.actions[k]);
        allocated_actions[k] = a_hat;
        tax += price_coeff_[k] * a_hat;
        const double own_gap = candidate.actions[k] - successor_action_[k];
        tax += candidate.prices[k] * own_gap * own_gap;
        tax -= type3_[k];
    }
    return aggregate_utility(scenario_->utilities[user_], scenario_->boxes[user_],
                             allocated_actions, tax);
}

double payoff_gain(double base, double candidate) {
    if (is_neg_inf(base)) {
        return is_neg_inf(candidate) ? 0.0 : std::numeric_limits<double>::infinity();
    }
    if (is_neg_inf(candidate)) return kNegInf;
    return candidate - base;
}

NEReport verify_ne(const Scenario& scenario, const MessageProfile& profile,
                   const VerifyConfig& config) {
    validate_profile(profile, scenario.topology);
    const int n = scenario.n();

    double max_price = 0.0;
    for (const Message& m : profile) {
        for (double p : m.prices) max_price = std::max(max_price, p);
    }
    // A zero-price profile would degenerate the sampling range to a point;
    // keep exercising the price directions anyway.
    const double price_hi = config.price_factor * (max_price > 0.0 ? max_price : 1.0);

    NEReport report;
    report.gain_tol = config.gain_tol;
    report.per_user_gains.assign(n, 0.0);
    report.payoffs.assign(n, 0.0);
    const int per_user = config.random_deviations + (config.use_best_response ? 1 : 0);
    report.deviations_tested = static_cast<long long>(per_user) * n;

#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n; ++i) {
        const UserDeviation dev(profile, scenario, i);
        report.payoffs[i] = dev.base_payoff();
        Rng rng(Rng::derive(config.seed, static_cast<std::uint64_t>(i)));
        double best = per_user > 0 ? kNegInf : 0.0;
        Message candidate = dev.current();
        for (int d = 0; d < config.random_deviations; ++d) {
            for (std::size_t k = 0; k < candidate.actions.size(); ++k) {
                candidate.actions[k] =
                    dev.current().actions[k] +
                    rng.uniform(-config.action_radius, config.action_radius);
            }
            for (std::size_t k = 0; k < candidate.prices.size(); ++k) {
                candidate.prices[k] = rng.uniform(0.0, price_hi);
            }
            best = std::max(best, payoff_gain(dev.base_payoff(), dev.payoff(candidate)));
        }
        if (config.use_best_response) {
            const BestResponse br = best_response(scenario, profile, i);
            best = std::max(best, br.gain);
        }
        report.per_user_gains[i] = best;
    }

    report.worst_gain = n > 0 ? kNegInf : 0.0;
    bool ok = true;
    for (int i = 0; i < n; ++i) {
        report.worst_gain = std::max(report.worst_gain, report.per_user_gains[i]);
        const double scale =
            is_neg_inf(report.payoffs[i]) ? 1.0 : std::max(1.0, std::abs(report.payoffs[i]));
        if (!(report.per_user_gains[i] <= config.gain_tol * scale)) ok = false;
    }
    report.is_equilibrium = ok;
    return report;
}

}  // namespace lgm
