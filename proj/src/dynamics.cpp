#include "lgm/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "lgm/errors.hpp"
#include "lgm/log.hpp"
#include "lgm/optimize.hpp"
#include "lgm/rng.hpp"
#include "lgm/utility.hpp"

namespace lgm {
namespace {

constexpr double kUnbounded = std::numeric_limits<double>::infinity();

// Sup-norm distance between two messages of the same shape.
double message_delta(const Message& a, const Message& b) {
    double d = 0.0;
    for (std::size_t k = 0; k < a.actions.size(); ++k) {
        d = std::max(d, std::abs(a.actions[k] - b.actions[k]));
    }
    for (std::size_t k = 0; k < a.prices.size(); ++k) {
        d = std::max(d, std::abs(a.prices[k] - b.prices[k]));
    }
    return d;
}

Message damped_message(const Message& old_msg, const Message& target, double theta) {
    Message next = old_msg;
    for (std::size_t k = 0; k < next.actions.size(); ++k) {
        next.actions[k] = (1.0 - theta) * old_msg.actions[k] + theta * target.actions[k];
    }
    for (std::size_t k = 0; k < next.prices.size(); ++k) {
        next.prices[k] = (1.0 - theta) * old_msg.prices[k] + theta * target.prices[k];
    }
    return next;
}

}  // namespace

BestResponse best_response(const Scenario& scenario, const MessageProfile& profile, int i,
                           const BestResponseConfig& config) {
    const UserDeviation dev(profile, scenario, i);
    const UtilitySpec& spec = scenario.utilities[i];
    const ActionBox& box = scenario.boxes[i];
    const std::size_t slots = dev.slots();
    const std::size_t own = static_cast<std::size_t>(spec.own_index);

    // Search over the realized outcomes rather than the raw proposals: with
    // zero prices the payoff is u_i(outcome) - sum_k coeff_k * outcome_k plus a
    // constant, and the outcome map is a per-coordinate bijection.
    std::vector<double> lo(slots, kNegInf), hi(slots, kUnbounded);
    if (spec.family == UtilityFamily::power) std::fill(lo.begin(), lo.end(), 0.0);
    lo[own] = std::max(lo[own], box.lo);
    hi[own] = box.hi;

    std::vector<double> start(slots);
    for (std::size_t k = 0; k < slots; ++k) {
        start[k] = std::clamp(dev.allocated(k, dev.current().actions[k]), lo[k], hi[k]);
    }

    const auto objective = [&](const std::vector<double>& x) {
        double v = evaluate_utility(spec, box, x);
        if (is_neg_inf(v)) return kNegInf;
        for (std::size_t k = 0; k < slots; ++k) v -= dev.price_coeff(k) * x[k];
        return v;
    };
    const auto gradient = [&](const std::vector<double>& x) {
        std::vector<double> g = utility_gradient_clamped(spec, x);
        for (std::size_t k = 0; k < slots; ++k) g[k] -= dev.price_coeff(k);
        return g;
    };

    detail::AscentConfig ascent;
    ascent.step0 = config.step0;
    ascent.tol = config.tol;
    ascent.max_iter = config.max_iter;
    ascent.trust_radius = config.trust_radius;
    const detail::AscentResult inner =
        detail::projected_ascent(objective, gradient, lo, hi, start, ascent);

    BestResponse reply;
    reply.inner_converged = inner.converged;
    if (config.require_convergence && !inner.converged) {
        throw InnerNotConverged("best response of user " + std::to_string(i) +
                                " stopped after " + std::to_string(inner.iterations) +
                                " iterations");
    }

    reply.message.actions.resize(slots);
    reply.message.prices.assign(slots, 0.0);
    for (std::size_t k = 0; k < slots; ++k) {
        reply.message.actions[k] =
            inner.x[k] * dev.cycle_size(k) - dev.others_sum(k);
    }
    reply.payoff = dev.payoff(reply.message);
    reply.gain = payoff_gain(dev.base_payoff(), reply.payoff);
    return reply;
}

Trajectory run_dynamics(const Scenario& scenario, const MessageProfile& init,
                        const DynamicsConfig& config) {
    validate_profile(init, scenario.topology);
    if (!(config.damping > 0.0 && config.damping <= 1.0)) {
        throw ValidationError("damping must lie in (0, 1], got " +
                              std::to_string(config.damping));
    }
    const int n = scenario.n();
    MessageProfile profile = init;
    Rng order_rng(Rng::derive(config.seed, 0x5157ull));

    Trajectory traj;
    const auto record = [&](int sweep) {
        traj.recorded_iterations.push_back(sweep);
        traj.iterates.push_back(profile);
        std::vector<double> pay(n);
        for (int i = 0; i < n; ++i) pay[i] = payoff(profile, scenario, i);
        traj.payoffs.push_back(std::move(pay));
    };
    record(0);

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);

    bool change_ok = true;  // holds for a zero-sweep budget
    for (int sweep = 1; sweep <= config.max_iter; ++sweep) {
        if (config.schedule == Schedule::random_order) {
            for (int k = n - 1; k > 0; --k) {
                const int j = static_cast<int>(order_rng.below(static_cast<std::uint64_t>(k + 1)));
                std::swap(order[k], order[j]);
            }
        }

        double delta = 0.0;
        const MessageProfile frozen =
            config.schedule == Schedule::simultaneous ? profile : MessageProfile{};
        std::vector<std::pair<int, Message>> pending;
        for (int idx = 0; idx < n; ++idx) {
            const int i = order[idx];
            const MessageProfile& view =
                config.schedule == Schedule::simultaneous ? frozen : profile;
            const BestResponse reply = best_response(scenario, view, i, config.inner);
            const double base = payoff(view, scenario, i);
            const double scale = is_neg_inf(base) ? 1.0 : std::max(1.0, std::abs(base));
            if (!(reply.gain > config.improve_tol * scale)) continue;  // keep the message
            Message next = damped_message(view[i], reply.message, config.damping);
            delta = std::max(delta, message_delta(view[i], next));
            if (config.schedule == Schedule::simultaneous) {
                pending.emplace_back(i, std::move(next));
            } else {
                profile[i] = std::move(next);
            }
        }
        for (auto& [i, msg] : pending) profile[i] = std::move(msg);

        traj.deltas.push_back(delta);
        traj.sweeps = sweep;
        traj.final_delta = delta;
        if (delta > config.tol) ++traj.converged_at;
        const bool stop = delta <= config.tol;
        if (config.record_stride > 0 &&
            (sweep % config.record_stride == 0 || stop || sweep == config.max_iter)) {
            if (traj.recorded_iterations.back() != sweep) record(sweep);
        }
        if (stop) {
            change_ok = true;
            break;
        }
        change_ok = false;
    }
    if (config.record_stride == 0 && traj.recorded_iterations.back() != traj.sweeps) {
        record(traj.sweeps);
    }

    if (change_ok) {
        traj.final_report = verify_ne(scenario, profile, config.verify);
        traj.verify_ran = true;
        traj.converged = traj.final_report.is_equilibrium;
        if (!traj.converged) {
            log_info("dynamics reached a fixed point that failed equilibrium verification");
        }
    }
    return traj;
}

}  // namespace lgm
