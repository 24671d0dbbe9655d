#include "lgm/audit.hpp"

#include <cmath>
#include <limits>

#include "lgm/log.hpp"
#include "lgm/utility.hpp"

namespace lgm {

AuditReport full_audit(const Scenario& scenario, const MessageProfile& profile,
                       const VerifyConfig& verify) {
    const int n = scenario.n();
    AuditReport report;
    report.allocation = compute_outcome(profile, scenario.topology, scenario.table);

    double tax_sum = 0.0, tax_abs = 0.0;
    for (double t : report.allocation.taxes) {
        tax_sum += t;
        tax_abs += std::abs(t);
    }
    report.budget_residual = std::abs(tax_sum);
    report.budget_scale = std::max(1.0, tax_abs);

    report.mech_feasible = true;
    report.ir_margins.resize(n);
    for (int i = 0; i < n; ++i) {
        if (!scenario.boxes[i].contains(report.allocation.actions[i])) {
            report.mech_feasible = false;
        }
        const std::vector<double> local =
            actions_over(report.allocation.actions, scenario.topology, i);
        const double realized = aggregate_utility(scenario.utilities[i], scenario.boxes[i],
                                                  local, report.allocation.taxes[i]);
        const std::vector<double> zeros(local.size(), 0.0);
        const double opt_out =
            evaluate_utility(scenario.utilities[i], scenario.boxes[i], zeros);
        report.ir_margins[i] = payoff_gain(opt_out, realized);
    }
    report.mechanism_welfare = welfare(scenario, report.allocation.actions);

    try {
        report.centralized = solve_centralized(scenario);
        report.centralized_converged = true;
    } catch (const NotConverged& e) {
        log_warn(std::string("audit: centralized solve did not converge: ") + e.what());
        report.centralized = e.best;
        report.centralized_converged = false;
    }
    report.kkt_max_residual = report.centralized.kkt.max_residual;
    report.optimality_gap = is_neg_inf(report.mechanism_welfare)
                                ? std::numeric_limits<double>::infinity()
                                : report.centralized.objective - report.mechanism_welfare;

    report.ne_report = verify_ne(scenario, profile, verify);
    return report;
}

}  // namespace lgm
