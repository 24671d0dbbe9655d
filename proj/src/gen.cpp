#include "lgm/gen.hpp"

#include <map>
#include <string>
#include <vector>

#include "lgm/errors.hpp"
#include "lgm/rng.hpp"

namespace lgm {
namespace {

std::string family_tag(UtilityFamily family) {
    switch (family) {
        case UtilityFamily::power: return "power";
        case UtilityFamily::linear: return "linear";
        case UtilityFamily::quadratic: return "quadratic";
    }
    return "unknown";
}

}  // namespace

std::vector<std::vector<int>> generate_adjacency(int n, double density, std::uint64_t seed) {
    if (n < 3) {
        throw ValidationError("generated networks need at least 3 users, got " +
                              std::to_string(n));
    }
    if (!(density >= 0.0 && density <= 1.0)) {
        throw ValidationError("density must lie in [0, 1], got " + std::to_string(density));
    }
    std::vector<std::vector<int>> g(n, std::vector<int>(n, 0));
    Rng edges(Rng::derive(seed, 1));
    for (int i = 0; i < n; ++i) {
        g[i][i] = 1;
        for (int j = 0; j < n; ++j) {
            if (j != i && edges.uniform01() < density) g[i][j] = 1;
        }
    }
    // Top up thin columns so every good has at least three providers' voices.
    Rng repair(Rng::derive(seed, 2));
    for (int j = 0; j < n; ++j) {
        std::vector<int> outside;
        int members = 0;
        for (int i = 0; i < n; ++i) {
            if (g[i][j]) {
                ++members;
            } else {
                outside.push_back(i);
            }
        }
        while (members < 3) {
            const std::size_t pick = static_cast<std::size_t>(
                repair.below(static_cast<std::uint64_t>(outside.size())));
            g[outside[pick]][j] = 1;
            outside.erase(outside.begin() + static_cast<std::ptrdiff_t>(pick));
            ++members;
        }
    }
    return g;
}

Scenario generate_scenario(const GenConfig& config) {
    const auto adjacency = generate_adjacency(config.n, config.density, config.seed);
    const NetworkTopology topology = build_topology(adjacency);

    Rng params(Rng::derive(config.seed, 3));
    std::vector<ActionBox> boxes(config.n);
    std::vector<UtilityParams> utilities;
    utilities.reserve(static_cast<std::size_t>(config.n));
    for (int i = 0; i < config.n; ++i) {
        const auto& r_set = topology.r_sets[i];
        switch (config.family) {
            case UtilityFamily::power: {
                boxes[i] = {0.0, params.uniform(0.6, 1.4)};
                const double alpha = params.uniform(0.25, 0.75);
                std::map<int, double> beta;
                for (int j : r_set) {
                    if (j != i) beta[j] = params.uniform(1.5, 3.0);
                }
                utilities.push_back(UtilityParams::power(alpha, std::move(beta)));
                break;
            }
            case UtilityFamily::linear: {
                boxes[i] = {-params.uniform(0.25, 1.0), params.uniform(0.25, 1.5)};
                std::map<int, double> c;
                for (int j : r_set) c[j] = params.uniform(0.0, 2.0);
                const double b = params.uniform(0.0, 2.0);
                utilities.push_back(UtilityParams::linear(std::move(c), b));
                break;
            }
            case UtilityFamily::quadratic: {
                boxes[i] = {-params.uniform(0.25, 1.0), params.uniform(0.25, 1.5)};
                std::map<int, double> p, q;
                for (int j : r_set) {
                    p[j] = params.uniform(-1.0, 2.0);
                    q[j] = params.uniform(0.1, 1.0);
                }
                utilities.push_back(UtilityParams::quadratic(std::move(p), std::move(q)));
                break;
            }
        }
    }

    SolverConfig solver;
    solver.tol = 1e-9;  // headroom under the downstream equilibrium tolerances

    const std::string name = "gen_" + family_tag(config.family) + "_n" +
                             std::to_string(config.n) + "_seed" +
                             std::to_string(config.seed);
    return make_scenario(name, adjacency, std::move(boxes), utilities, config.policy,
                         solver, config.seed);
}

}  // namespace lgm
