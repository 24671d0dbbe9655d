#pragma once

#include <vector>

#include "lgm/errors.hpp"
#include "lgm/scenario.hpp"

namespace lgm {

// KKT diagnostics for the box-constrained welfare problem. The two one-sided
// box constraints are folded into a single multiplier per user; active_bound
// records which side it belongs to (-1 lower, 0 interior, +1 upper).
struct KKTReport {
    std::vector<double> multipliers;                // λ_i ≥ 0
    std::vector<double> stationarity_residuals;     // absolute values
    std::vector<double> complementarity_residuals;  // |λ_i · f_{A_i}(a_i)|
    std::vector<int> active_bound;
    double max_residual = 0.0;
};

struct CentralizedSolution {
    std::vector<double> actions;
    double objective = 0.0;
    KKTReport kkt;
    bool converged = false;
    int iterations = 0;
    std::vector<double> objective_trace;  // accepted iterates, nondecreasing
};

// Solver gave up before reaching tolerance; carries the best iterate so
// callers can still inspect or report it.
struct NotConverged : Error {
    NotConverged(const std::string& message, CentralizedSolution best_)
        : Error(message), best(std::move(best_)) {}
    CentralizedSolution best;
};

// Social welfare F(a) = Σ_i u_i(a_{R_i}); -inf if any user finds the profile
// infeasible.
double welfare(const Scenario& scenario, const std::vector<double>& actions);

// ∂F/∂a_i = Σ_{k∈C_i} ∂u_k/∂a_i, with the power-family near-zero clamping the
// solver relies on.
std::vector<double> welfare_gradient(const Scenario& scenario,
                                     const std::vector<double>& actions);

// KKT residuals at a feasible point: interior users need a vanishing welfare
// gradient; at a bound only the inward-pointing part counts and the outward
// part becomes the multiplier. Reported gradients are capped at 1e12.
KKTReport kkt_residual(const Scenario& scenario, const std::vector<double>& actions);

// Maximizes F over the box product by projected gradient ascent with Armijo
// backtracking, starting at the box midpoints. Throws NotConverged (carrying
// the best iterate) when neither tolerance nor a stationary face is reached
// within max_iter.
CentralizedSolution solve_centralized(const Scenario& scenario);
CentralizedSolution solve_centralized(const Scenario& scenario, const SolverConfig& config);

}  // namespace lgm
