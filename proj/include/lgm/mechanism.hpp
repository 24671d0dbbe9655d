#pragma once

#include <vector>

#include "lgm/network.hpp"
#include "lgm/scenario.hpp"

namespace lgm {

// One user's message: a proposed action and a proposed (nonnegative) price
// for every good in its neighborhood, both aligned with r_sets[i].
struct Message {
    std::vector<double> actions;
    std::vector<double> prices;
};

// One Message per user, indexed by user id.
using MessageProfile = std::vector<Message>;

// Throws DimensionMismatch / ValidationError unless every message has |R_i|
// entries in both vectors and all price proposals are ≥ 0.
void validate_profile(const MessageProfile& profile, const NetworkTopology& topology);

// A profile where every proposal is zero — the canonical starting point.
MessageProfile zero_profile(const NetworkTopology& topology);

// Outcome of the game form: realized actions â, taxes t̂, and the personalized
// prices l_ij (sparse, aligned with r_sets[i] like the messages).
struct Allocation {
    std::vector<double> actions;
    std::vector<double> taxes;
    std::vector<std::vector<double>> prices;
};

// â_i: average of the proposals the members of C_i make for user i's action.
double allocate_action(const MessageProfile& profile, const NetworkTopology& topology, int i);

// l_ij: price proposal of i's first cyclic successor in C_j minus the second
// successor's. User i's own proposals never enter (that exclusion is what
// makes prices strategy-proof in i's price coordinates).
double personalized_price(const MessageProfile& profile, const NetworkTopology& topology,
                          const CyclicIndexTable& table, int i, int j);

// t̂_i: Σ_{j∈R_i} of the linear price term l_ij·â_j, plus the own-disagreement
// penalty ^iπ_j·(^ia_j − ^succ a_j)², minus the successor's disagreement term
// ^succ π_j·(^succ a_j − ^succ² a_j)².
double compute_tax(const MessageProfile& profile, const NetworkTopology& topology,
                   const CyclicIndexTable& table, int i);

// Full outcome function. Computes the shared action vector once, then fills
// prices and taxes per user; parallelized over users when built with OpenMP.
Allocation compute_outcome(const MessageProfile& profile, const NetworkTopology& topology,
                           const CyclicIndexTable& table);

// Plain-loop reference implementation kept for differential testing and the
// kernel benchmark; must produce identical results to compute_outcome.
Allocation compute_outcome_serial(const MessageProfile& profile, const NetworkTopology& topology,
                                  const CyclicIndexTable& table);

// u_i^A at the outcome the profile induces: utility of the realized actions
// over R_i minus the user's tax; -inf when â_i leaves A_i.
double payoff(const MessageProfile& profile, const Scenario& scenario, int i);

// All payoffs from one outcome evaluation.
std::vector<double> payoff_all(const MessageProfile& profile, const Scenario& scenario);

// Restriction of the realized action vector to R_i, in r_sets[i] order.
std::vector<double> actions_over(const std::vector<double>& actions,
                                 const NetworkTopology& topology, int i);

}  // namespace lgm
