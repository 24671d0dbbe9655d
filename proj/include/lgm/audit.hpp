#pragma once

#include <vector>

#include "lgm/centralized.hpp"
#include "lgm/mechanism.hpp"
#include "lgm/ne.hpp"
#include "lgm/scenario.hpp"

namespace lgm {

// One-stop diagnostic of a message profile: outcome, budget balance,
// individual rationality, welfare gap against the centralized optimum, and an
// equilibrium check. Property violations are recorded, never thrown.
struct AuditReport {
    Allocation allocation;

    double budget_residual = 0.0;  // |Σ_i t̂_i|
    double budget_scale = 1.0;     // max(1, Σ_i |t̂_i|), for relative reading

    // payoff_i(outcome) minus the utility of staying out (zero actions, zero
    // tax); +inf when the baseline itself is infeasible.
    std::vector<double> ir_margins;

    bool mech_feasible = false;      // every â_i inside its action set
    double mechanism_welfare = 0.0;  // F(â); -inf when infeasible for someone
    double optimality_gap = 0.0;     // F(a*) − F(â); +inf when F(â) = -inf

    CentralizedSolution centralized;
    bool centralized_converged = false;
    double kkt_max_residual = 0.0;  // at the centralized candidate

    NEReport ne_report;
};

AuditReport full_audit(const Scenario& scenario, const MessageProfile& profile,
                       const VerifyConfig& verify = {});

}  // namespace lgm
