#include "lgm/network.hpp"

#include <algorithm>
#include <string>

#include "lgm/errors.hpp"
#include "lgm/rng.hpp"

namespace lgm {

NetworkTopology build_topology(const std::vector<std::vector<int>>& adjacency) {
    const int n = static_cast<int>(adjacency.size());
    if (n == 0) throw NonSquare("adjacency matrix is empty");
    for (int i = 0; i < n; ++i) {
        if (static_cast<int>(adjacency[i].size()) != n) {
            throw NonSquare("adjacency row " + std::to_string(i) + " has " +
                            std::to_string(adjacency[i].size()) + " entries, expected " +
                            std::to_string(n));
        }
        for (int j = 0; j < n; ++j) {
            if (adjacency[i][j] != 0 && adjacency[i][j] != 1) {
                throw ValidationError("adjacency[" + std::to_string(i) + "][" +
                                      std::to_string(j) + "] = " +
                                      std::to_string(adjacency[i][j]) + ", entries must be 0 or 1");
            }
        }
        if (adjacency[i][i] != 1) throw MissingSelfLoop(i);
    }

    NetworkTopology t;
    t.n = n;
    t.g = adjacency;
    t.r_sets.resize(n);
    t.c_sets.resize(n);
    t.r_pos.assign(n, std::vector<int>(n, -1));
    t.c_pos.assign(n, std::vector<int>(n, -1));
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (adjacency[i][j] == 1) {
                t.r_pos[i][j] = static_cast<int>(t.r_sets[i].size());
                t.r_sets[i].push_back(j);
                t.c_pos[j][i] = static_cast<int>(t.c_sets[j].size());
                t.c_sets[j].push_back(i);
            }
        }
    }
    // c_pos above indexes by insertion order of rows, which is ascending i —
    // already consistent with c_sets. Validate the audience-size assumption.
    for (int j = 0; j < n; ++j) {
        if (t.c_sets[j].size() < 3) {
            throw CycleTooSmall(j, static_cast<int>(t.c_sets[j].size()));
        }
    }
    return t;
}

CyclicIndexTable assign_cyclic_indices(const NetworkTopology& topology,
                                       const IndexPolicy& policy) {
    const int n = topology.n;
    CyclicIndexTable table;
    table.order.resize(n);
    table.pos.assign(n, std::vector<int>(n, 0));
    for (int j = 0; j < n; ++j) {
        table.order[j] = topology.c_sets[j];  // ascending baseline
        if (policy.kind == IndexPolicyKind::shuffled) {
            // Independent permutation per good: the model allows assignments
            // to differ across goods, and tests must hold either way.
            Rng rng(Rng::derive(policy.seed, static_cast<std::uint64_t>(j)));
            auto& order = table.order[j];
            for (int k = static_cast<int>(order.size()) - 1; k > 0; --k) {
                const int swap_with = static_cast<int>(rng.below(static_cast<std::uint64_t>(k) + 1));
                std::swap(order[k], order[swap_with]);
            }
        }
        for (int p = 0; p < static_cast<int>(table.order[j].size()); ++p) {
            table.pos[j][table.order[j][p]] = p + 1;
        }
    }
    return table;
}

int cyclic_successor(const CyclicIndexTable& table, int j, int i, int offset) {
    const int position = table.pos[j][i];
    if (position == 0) throw NotInCycle(i, j);
    return table.user_at(j, position + offset);
}

}  // namespace lgm
