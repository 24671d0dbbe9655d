#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "lgm/network.hpp"
#include "lgm/utility.hpp"

namespace lgm {

struct SolverConfig {
    double step = 1.0;      // initial Armijo step
    int max_iter = 50000;
    double tol = 1e-8;      // projected-gradient sup-norm target
};

// Raw, id-keyed utility description as it appears in scenario files, before
// alignment against the topology's R_i.
struct UtilityParams {
    UtilityFamily family = UtilityFamily::linear;
    double alpha = 0.0;              // power
    std::map<int, double> beta;      // power
    std::map<int, double> c;         // linear
    double b = 0.0;                  // linear
    std::map<int, double> p, q;      // quadratic

    static UtilityParams power(double alpha, std::map<int, double> beta);
    static UtilityParams linear(std::map<int, double> c, double b);
    static UtilityParams quadratic(std::map<int, double> p, std::map<int, double> q);
};

// A fully validated problem instance: topology, cyclic index table, action
// boxes, utilities aligned with R_i, solver configuration, and the seed used
// by anything stochastic downstream (deviation sampling, dynamics schedules).
struct Scenario {
    std::string name;
    std::uint64_t seed = 0;
    IndexPolicy index_policy;
    NetworkTopology topology;
    CyclicIndexTable table;
    std::vector<ActionBox> boxes;
    std::vector<UtilitySpec> utilities;
    SolverConfig solver;

    int n() const { return topology.n; }
};

// Builds and validates a Scenario from raw parts: topology construction,
// cyclic index assignment, utility alignment/domain checks, box checks
// (including the power-family requirement that referenced boxes live in the
// nonnegative orthant), and a sampled concavity check per user.
Scenario make_scenario(std::string name, const std::vector<std::vector<int>>& adjacency,
                       std::vector<ActionBox> boxes, const std::vector<UtilityParams>& params,
                       IndexPolicy policy = {}, SolverConfig solver = {},
                       std::uint64_t seed = 0);

// JSON file I/O. load_scenario throws ParseError for malformed JSON and
// ValidationError (naming the violated assumption) for well-formed but
// invalid instances. save_scenario writes a file that reloads identically.
Scenario load_scenario(const std::string& path);
void save_scenario(const Scenario& scenario, const std::string& path);

// String-level versions used by the file API and by tests.
Scenario parse_scenario(const std::string& json_text, const std::string& origin = "<string>");
std::string scenario_to_text(const Scenario& scenario);

}  // namespace lgm
