#pragma once

#include <functional>
#include <limits>
#include <vector>

namespace lgm::detail {

// Small projected-gradient-ascent engine shared by the centralized solver and
// the best-response inner loop. Maximizes f over the box [lo, hi] (entries may
// be ±inf for free coordinates).
struct AscentConfig {
    double step0 = 1.0;    // initial Armijo step
    double shrink = 0.5;   // backtracking factor
    double slope = 1e-4;   // Armijo slope factor
    double tol = 1e-8;     // sup-norm of the unit-step projected gradient
    int max_iter = 50000;
    // Per-iteration cap on the sup-norm of the move; keeps flat directions
    // from running away when the objective is not coercive.
    double trust_radius = std::numeric_limits<double>::infinity();
};

struct AscentResult {
    std::vector<double> x;
    double value = 0.0;
    bool converged = false;
    int iterations = 0;
    std::vector<double> trace;  // objective at the start point and each accepted iterate
};

using Objective = std::function<double(const std::vector<double>&)>;
using Gradient = std::function<std::vector<double>(const std::vector<double>&)>;

AscentResult projected_ascent(const Objective& f, const Gradient& g,
                              const std::vector<double>& lo, const std::vector<double>& hi,
                              std::vector<double> x0, const AscentConfig& config);

}  // namespace lgm::detail
