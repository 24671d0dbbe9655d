#pragma once

#include <cstdint>
#include <vector>

#include "lgm/mechanism.hpp"
#include "lgm/ne.hpp"
#include "lgm/scenario.hpp"

namespace lgm {

// Inner solver settings for a single user's best response.
struct BestResponseConfig {
    double step0 = 1.0;
    double tol = 1e-9;
    int max_iter = 2000;
    // The outcome space is unbounded in the neighbours' coordinates; the trust
    // radius caps each ascent move so a divergent direction cannot run away.
    double trust_radius = 10.0;
    bool require_convergence = false;
};

struct BestResponse {
    Message message;       // proposed reply (prices all zero)
    double payoff = 0.0;   // mechanism payoff the reply earns against the profile
    double gain = 0.0;     // payoff minus the user's current payoff
    bool inner_converged = false;
};

// Maximizes user i's payoff over own messages, holding everyone else fixed.
// Any quadratic penalty paid on own proposals vanishes at zero prices, and the
// payoff is searched over the realized outcome coordinates, where it is
// concave for the supported utility families.
BestResponse best_response(const Scenario& scenario, const MessageProfile& profile, int i,
                           const BestResponseConfig& config = {});

enum class Schedule { round_robin, random_order, simultaneous };

struct DynamicsConfig {
    Schedule schedule = Schedule::round_robin;
    double damping = 0.5;  // in (0, 1]; 1 replays the raw best response
    int max_iter = 200;    // sweep budget
    double tol = 1e-7;     // sup-norm message change per sweep
    std::uint64_t seed = 0;
    int record_stride = 1;  // keep every k-th iterate (0 = endpoints only)
    // A reply is adopted only when it beats the current message by more than
    // improve_tol (relative to the payoff scale); converged profiles are
    // therefore exact fixed points.
    double improve_tol = 1e-9;
    BestResponseConfig inner;
    VerifyConfig verify;
};

struct Trajectory {
    std::vector<int> recorded_iterations;  // sweep stamps of the stored iterates
    std::vector<MessageProfile> iterates;
    std::vector<std::vector<double>> payoffs;  // per stored iterate, per user
    std::vector<double> deltas;                // sup message change, one per sweep
    int sweeps = 0;
    int converged_at = 0;      // sweeps that actually moved the profile
    double final_delta = 0.0;  // last sweep's change (0 when converged at start)
    bool verify_ran = false;
    NEReport final_report;  // populated when verify_ran
    bool converged = false; // change criterion met and the end point verified
};

Trajectory run_dynamics(const Scenario& scenario, const MessageProfile& init,
                        const DynamicsConfig& config = {});

}  // namespace lgm
