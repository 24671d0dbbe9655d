#pragma once

#include <cstdint>
#include <vector>

namespace lgm {

// Directed influence network. g[i][j] = 1 means user j's action enters user
// i's utility (j ∈ R_i, equivalently i ∈ C_j). R_i is the row support of g,
// C_j the column support; both are kept in ascending user order. The diagonal
// is always 1 (a user affects itself) and every column support has at least
// three members — the tax construction needs two distinct successors per good.
struct NetworkTopology {
    int n = 0;
    std::vector<std::vector<int>> g;       // n×n, entries 0/1
    std::vector<std::vector<int>> r_sets;  // r_sets[i] = R_i, ascending
    std::vector<std::vector<int>> c_sets;  // c_sets[j] = C_j, ascending
    std::vector<std::vector<int>> r_pos;   // r_pos[i][j] = index of j in r_sets[i], -1 if absent
    std::vector<std::vector<int>> c_pos;   // c_pos[j][i] = index of i in c_sets[j], -1 if absent

    bool affects(int i, int j) const { return g[i][j] != 0; }
};

// Validates the adjacency matrix and derives the support sets. Rejects bad
// input instead of repairing it.
NetworkTopology build_topology(const std::vector<std::vector<int>>& adjacency);

// Cyclic ordering of each good's audience. Positions are 1-based to match the
// usual indexing of cycle members; position |C_j|+1 wraps to 1. index_of is 0
// for users outside the cycle.
struct CyclicIndexTable {
    // order[j][p] = user occupying position p+1 of good j's cycle.
    std::vector<std::vector<int>> order;
    // pos[j][i] = 1-based position of user i in good j's cycle, 0 if i ∉ C_j.
    std::vector<std::vector<int>> pos;

    int index_of(int i, int j) const { return pos[j][i]; }
    int user_at(int j, int position) const {
        const int s = static_cast<int>(order[j].size());
        int p = (position - 1) % s;
        if (p < 0) p += s;
        return order[j][p];
    }
};

enum class IndexPolicyKind { ascending, shuffled };

struct IndexPolicy {
    IndexPolicyKind kind = IndexPolicyKind::ascending;
    std::uint64_t seed = 0;  // used by the shuffled policy only
};

// Assigns cycle positions 1..|C_j| to C_j per the policy. "ascending" uses
// user-id order; "shuffled" draws an independent seeded permutation per good
// (the assignment is arbitrary in the model, so properties must not depend on
// the choice).
CyclicIndexTable assign_cyclic_indices(const NetworkTopology& topology,
                                       const IndexPolicy& policy = {});

// User at position I_ij + offset in good j's cycle, wrapping around. offset is
// 1 or 2 — the two successor roles the tax function uses.
int cyclic_successor(const CyclicIndexTable& table, int j, int i, int offset);

}  // namespace lgm
