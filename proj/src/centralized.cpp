#include "lgm/centralized.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "lgm/mechanism.hpp"
#include "lgm/optimize.hpp"

namespace lgm {

namespace {

// Bound-activity detection window. Converged iterates sit on bounds exactly
// (projection clamps), so this only absorbs borderline hand-supplied points.
constexpr double kActiveTol = 1e-9;
constexpr double kGradientCap = 1e12;

}  // namespace

double welfare(const Scenario& scenario, const std::vector<double>& actions) {
    double total = 0.0;
    for (int i = 0; i < scenario.n(); ++i) {
        const double u = evaluate_utility(scenario.utilities[i], scenario.boxes[i],
                                          actions_over(actions, scenario.topology, i));
        if (is_neg_inf(u)) return kNegInf;
        total += u;
    }
    return total;
}

std::vector<double> welfare_gradient(const Scenario& scenario,
                                     const std::vector<double>& actions) {
    std::vector<double> grad(scenario.n(), 0.0);
    for (int k = 0; k < scenario.n(); ++k) {
        const auto& r_set = scenario.topology.r_sets[k];
        const std::vector<double> g =
            utility_gradient_clamped(scenario.utilities[k],
                                     actions_over(actions, scenario.topology, k));
        for (std::size_t s = 0; s < r_set.size(); ++s) grad[r_set[s]] += g[s];
    }
    for (double& v : grad) v = std::clamp(v, -kGradientCap, kGradientCap);
    return grad;
}

KKTReport kkt_residual(const Scenario& scenario, const std::vector<double>& actions) {
    const int n = scenario.n();
    const std::vector<double> s = welfare_gradient(scenario, actions);
    KKTReport report;
    report.multipliers.assign(n, 0.0);
    report.stationarity_residuals.assign(n, 0.0);
    report.complementarity_residuals.assign(n, 0.0);
    report.active_bound.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        const ActionBox& box = scenario.boxes[i];
        const double a = actions[i];
        if (a <= box.lo + kActiveTol) {
            report.active_bound[i] = -1;
            report.multipliers[i] = std::max(0.0, -s[i]);
            report.stationarity_residuals[i] = std::max(0.0, s[i]);
        } else if (a >= box.hi - kActiveTol) {
            report.active_bound[i] = 1;
            report.multipliers[i] = std::max(0.0, s[i]);
            report.stationarity_residuals[i] = std::max(0.0, -s[i]);
        } else {
            report.stationarity_residuals[i] = std::abs(s[i]);
        }
        report.complementarity_residuals[i] =
            std::abs(report.multipliers[i] * box.constraint(a));
        report.max_residual = std::max({report.max_residual, report.stationarity_residuals[i],
                                        report.complementarity_residuals[i]});
    }
    return report;
}

CentralizedSolution solve_centralized(const Scenario& scenario) {
    return solve_centralized(scenario, scenario.solver);
}

CentralizedSolution solve_centralized(const Scenario& scenario, const SolverConfig& config) {
    const int n = scenario.n();
    std::vector<double> lo(n), hi(n), x0(n);
    for (int i = 0; i < n; ++i) {
        lo[i] = scenario.boxes[i].lo;
        hi[i] = scenario.boxes[i].hi;
        x0[i] = 0.5 * (lo[i] + hi[i]);
    }

    detail::AscentConfig ascent;
    ascent.step0 = config.step;
    ascent.tol = config.tol;
    ascent.max_iter = config.max_iter;
    const detail::AscentResult run = detail::projected_ascent(
        [&](const std::vector<double>& a) { return welfare(scenario, a); },
        [&](const std::vector<double>& a) { return welfare_gradient(scenario, a); }, lo, hi,
        std::move(x0), ascent);

    CentralizedSolution sol;
    sol.actions = run.x;
    sol.objective = run.value;
    sol.converged = run.converged;
    sol.iterations = run.iterations;
    sol.objective_trace = run.trace;
    sol.kkt = kkt_residual(scenario, sol.actions);
    if (!sol.converged) {
        char tol_text[32];
        std::snprintf(tol_text, sizeof(tol_text), "%g", config.tol);
        throw NotConverged("centralized solver did not reach tolerance " +
                               std::string(tol_text) + " within " +
                               std::to_string(config.max_iter) + " iterations",
                           std::move(sol));
    }
    return sol;
}

}  // namespace lgm
