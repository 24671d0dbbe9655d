#pragma once

#include <cstdint>
#include <vector>

#include "lgm/network.hpp"
#include "lgm/scenario.hpp"

namespace lgm {

// Random scenario generator. Draws are consumed in a documented fixed order
// (adjacency row-major, then column repairs on ascending goods, then per-user
// parameters), so a (config) pair maps to exactly one scenario on every
// platform.
struct GenConfig {
    int n = 6;
    double density = 0.4;  // off-diagonal edge probability
    UtilityFamily family = UtilityFamily::power;
    std::uint64_t seed = 0;
    IndexPolicy policy;  // ascending unless configured otherwise
};

// Random directed graph with self-loops on every node; any column with fewer
// than three members is topped up with uniformly chosen extra edges so the
// result always satisfies the |C_j| >= 3 requirement.
std::vector<std::vector<int>> generate_adjacency(int n, double density, std::uint64_t seed);

Scenario generate_scenario(const GenConfig& config = {});

}  // namespace lgm
