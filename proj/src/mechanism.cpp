#include "lgm/mechanism.hpp"

#include <string>

#include "lgm/errors.hpp"

namespace lgm {

namespace {

// Price and tax of one user, written into the allocation slots. Shared by the
// parallel and serial outcome paths so their per-user arithmetic is identical.
void fill_user_outcome(const MessageProfile& profile, const NetworkTopology& topology,
                       const CyclicIndexTable& table, const std::vector<double>& actions,
                       int i, std::vector<double>& prices_i, double& tax_i) {
    const auto& r_set = topology.r_sets[i];
    prices_i.resize(r_set.size());
    double tax = 0.0;
    for (std::size_t k = 0; k < r_set.size(); ++k) {
        const int j = r_set[k];
        const int succ = cyclic_successor(table, j, i, 1);
        const int succ2 = cyclic_successor(table, j, i, 2);
        const int succ_slot = topology.r_pos[succ][j];
        const int succ2_slot = topology.r_pos[succ2][j];

        const double l_ij = profile[succ].prices[succ_slot] - profile[succ2].prices[succ2_slot];
        prices_i[k] = l_ij;

        tax += l_ij * actions[j];
        const double own_gap = profile[i].actions[k] - profile[succ].actions[succ_slot];
        tax += profile[i].prices[k] * own_gap * own_gap;
        const double succ_gap =
            profile[succ].actions[succ_slot] - profile[succ2].actions[succ2_slot];
        tax -= profile[succ].prices[succ_slot] * succ_gap * succ_gap;
    }
    tax_i = tax;
}

Allocation compute_outcome_impl(const MessageProfile& profile, const NetworkTopology& topology,
                                const CyclicIndexTable& table, bool parallel) {
    Allocation out;
    out.actions.resize(topology.n);
    out.taxes.resize(topology.n);
    out.prices.resize(topology.n);
    for (int i = 0; i < topology.n; ++i) {
        out.actions[i] = allocate_action(profile, topology, i);
    }
    if (parallel) {
#pragma omp parallel for schedule(static)
        for (int i = 0; i < topology.n; ++i) {
            fill_user_outcome(profile, topology, table, out.actions, i, out.prices[i],
                              out.taxes[i]);
        }
    } else {
        for (int i = 0; i < topology.n; ++i) {
            fill_user_outcome(profile, topology, table, out.actions, i, out.prices[i],
                              out.taxes[i]);
        }
    }
    return out;
}

}  // namespace

void validate_profile(const MessageProfile& profile, const NetworkTopology& topology) {
    if (static_cast<int>(profile.size()) != topology.n) {
        throw DimensionMismatch("profile has " + std::to_string(profile.size()) +
                                " messages, expected " + std::to_string(topology.n));
    }
    for (int i = 0; i < topology.n; ++i) {
        const std::size_t want = topology.r_sets[i].size();
        if (profile[i].actions.size() != want || profile[i].prices.size() != want) {
            throw DimensionMismatch("message of user " + std::to_string(i) + " must carry " +
                                    std::to_string(want) + " action and price proposals");
        }
        for (std::size_t k = 0; k < want; ++k) {
            if (!(profile[i].prices[k] >= 0.0)) {
                throw ValidationError("price proposal of user " + std::to_string(i) +
                                      " for good " + std::to_string(topology.r_sets[i][k]) +
                                      " must be ≥ 0; got " +
                                      std::to_string(profile[i].prices[k]));
            }
        }
    }
}

MessageProfile zero_profile(const NetworkTopology& topology) {
    MessageProfile profile(topology.n);
    for (int i = 0; i < topology.n; ++i) {
        profile[i].actions.assign(topology.r_sets[i].size(), 0.0);
        profile[i].prices.assign(topology.r_sets[i].size(), 0.0);
    }
    return profile;
}

double allocate_action(const MessageProfile& profile, const NetworkTopology& topology, int i) {
    const auto& c_set = topology.c_sets[i];
    double sum = 0.0;
    for (int k : c_set) sum += profile[k].actions[topology.r_pos[k][i]];
    return sum / static_cast<double>(c_set.size());
}

double personalized_price(const MessageProfile& profile, const NetworkTopology& topology,
                          const CyclicIndexTable& table, int i, int j) {
    const int succ = cyclic_successor(table, j, i, 1);
    const int succ2 = cyclic_successor(table, j, i, 2);
    return profile[succ].prices[topology.r_pos[succ][j]] -
           profile[succ2].prices[topology.r_pos[succ2][j]];
}

double compute_tax(const MessageProfile& profile, const NetworkTopology& topology,
                   const CyclicIndexTable& table, int i) {
    std::vector<double> actions(topology.n);
    for (int u = 0; u < topology.n; ++u) actions[u] = allocate_action(profile, topology, u);
    std::vector<double> prices;
    double tax = 0.0;
    fill_user_outcome(profile, topology, table, actions, i, prices, tax);
    return tax;
}

Allocation compute_outcome(const MessageProfile& profile, const NetworkTopology& topology,
                           const CyclicIndexTable& table) {
    return compute_outcome_impl(profile, topology, table, /*parallel=*/true);
}

Allocation compute_outcome_serial(const MessageProfile& profile, const NetworkTopology& topology,
                                  const CyclicIndexTable& table) {
    return compute_outcome_impl(profile, topology, table, /*parallel=*/false);
}

std::vector<double> actions_over(const std::vector<double>& actions,
                                 const NetworkTopology& topology, int i) {
    const auto& r_set = topology.r_sets[i];
    std::vector<double> out(r_set.size());
    for (std::size_t k = 0; k < r_set.size(); ++k) out[k] = actions[r_set[k]];
    return out;
}

double payoff(const MessageProfile& profile, const Scenario& scenario, int i) {
    const Allocation alloc = compute_outcome(profile, scenario.topology, scenario.table);
    return aggregate_utility(scenario.utilities[i], scenario.boxes[i],
                             actions_over(alloc.actions, scenario.topology, i), alloc.taxes[i]);
}

std::vector<double> payoff_all(const MessageProfile& profile, const Scenario& scenario) {
    const Allocation alloc = compute_outcome(profile, scenario.topology, scenario.table);
    std::vector<double> out(scenario.n());
    for (int i = 0; i < scenario.n(); ++i) {
        out[i] = aggregate_utility(scenario.utilities[i], scenario.boxes[i],
                                   actions_over(alloc.actions, scenario.topology, i),
                                   alloc.taxes[i]);
    }
    return out;
}

}  // namespace lgm
