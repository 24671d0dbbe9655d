#include "lgm/optimize.hpp"

#include <algorithm>
#include <cmath>

#include "lgm/utility.hpp"

namespace lgm::detail {

namespace {

double clamp(double v, double lo, double hi) { return v < lo ? lo : (v > hi ? hi : v); }

}  // namespace

AscentResult projected_ascent(const Objective& f, const Gradient& g,
                              const std::vector<double>& lo, const std::vector<double>& hi,
                              std::vector<double> x0, const AscentConfig& config) {
    const std::size_t dim = x0.size();
    for (std::size_t k = 0; k < dim; ++k) x0[k] = clamp(x0[k], lo[k], hi[k]);

    // Stationarity measure: how far a unit gradient step moves after
    // projection. Zero at box-constrained optima even when the raw gradient
    // points outward.
    const auto pg_norm_at = [&](const std::vector<double>& x,
                                const std::vector<double>& grad) {
        double norm = 0.0;
        for (std::size_t k = 0; k < dim; ++k) {
            norm = std::max(norm, std::abs(x[k] - clamp(x[k] + grad[k], lo[k], hi[k])));
        }
        return norm;
    };

    AscentResult result;
    result.x = std::move(x0);
    result.value = f(result.x);
    result.trace.push_back(result.value);

    std::vector<double> candidate(dim);
    for (int iter = 0; iter < config.max_iter; ++iter) {
        const std::vector<double> grad = g(result.x);
        const double pg_norm = pg_norm_at(result.x, grad);
        if (pg_norm <= config.tol) {
            result.converged = true;
            result.iterations = iter;
            return result;
        }

        // Near the optimum genuine objective changes drop below double
        // resolution, where the Armijo inequality degenerates to "not bitwise
        // worse" and would happily accept divergent overshoots. Below this
        // threshold acceptance switches to demanding stationarity progress.
        const double f_resolution =
            8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(result.value));

        // Armijo backtracking along the projected-arc candidates.
        double step = config.step0;
        bool accepted = false;
        for (int bt = 0; bt < 80; ++bt) {
            double move_norm = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                candidate[k] = clamp(result.x[k] + step * grad[k], lo[k], hi[k]);
                move_norm = std::max(move_norm, std::abs(candidate[k] - result.x[k]));
            }
            if (move_norm > config.trust_radius) {
                // Shrink the whole move back into the trust region; a convex
                // combination of feasible points stays feasible.
                const double scale = config.trust_radius / move_norm;
                for (std::size_t k = 0; k < dim; ++k) {
                    candidate[k] = result.x[k] + scale * (candidate[k] - result.x[k]);
                }
            }
            double directional = 0.0;
            for (std::size_t k = 0; k < dim; ++k) {
                directional += grad[k] * (candidate[k] - result.x[k]);
            }
            const double fc = f(candidate);
            const bool usable = !is_neg_inf(fc) && std::isfinite(fc);
            if (usable &&
                fc >= result.value + std::max(config.slope * directional, f_resolution)) {
                accepted = true;  // representable Armijo progress
            } else if (usable && fc >= result.value - f_resolution) {
                // Flat at float resolution: accept only steps that demonstrably
                // approach stationarity, which rules out the overshoots.
                accepted = pg_norm_at(candidate, g(candidate)) <= 0.9 * pg_norm;
            }
            if (accepted) {
                result.x = candidate;
                result.value = fc;
                result.trace.push_back(fc);
                break;
            }
            step *= config.shrink;
        }
        if (!accepted) {
            // No acceptable step at float resolution; report the honest state.
            result.iterations = iter + 1;
            result.converged = pg_norm <= config.tol;
            return result;
        }
    }
    result.iterations = config.max_iter;
    return result;
}

}  // namespace lgm::detail
