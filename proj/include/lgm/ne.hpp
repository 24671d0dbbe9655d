#pragma once

#include <cstdint>
#include <vector>

#include "lgm/centralized.hpp"
#include "lgm/mechanism.hpp"
#include "lgm/scenario.hpp"

namespace lgm {

// Equilibrium personalized prices l*_ij, stored like the mechanism's price
// matrix: l[i][k] is the price user i faces for good r_sets[i][k]. Every
// column over C_j sums to zero by construction.
struct PersonalizedPrices {
    std::vector<std::vector<double>> l;
};

// l*_ij = ∂u_i/∂a_j at a* for j ≠ i; the own-good price comes from the
// column-sum identity l*_ii = −Σ_{k∈C_i, k≠i} l*_ki (equivalent to the KKT
// form but free of multiplier-estimation noise). Throws KKTNotSatisfied when
// a* fails the KKT residual check at kkt_tol.
PersonalizedPrices personalized_prices_from_optimum(const Scenario& scenario,
                                                    const std::vector<double>& a_star,
                                                    double kkt_tol = 1e-6);

// Extracts the column of good j (aligned with the cycle order in `cycle`).
std::vector<double> price_column(const PersonalizedPrices& prices,
                                 const NetworkTopology& topology, int j,
                                 const std::vector<int>& cycle);

// Solves π_{succ(i)} − π_{succ²(i)} = l_i around the cycle by telescoping:
// position 1 is anchored at 0, consecutive differences propagate, and the
// minimal shift −min(π) makes the vector nonnegative (any constant shift
// preserves the differences). l_column and the returned π are aligned with
// `cycle`. Throws InconsistentColumn when Σ l_column exceeds 1e−9.
std::vector<double> solve_price_system(const std::vector<double>& l_column,
                                       const std::vector<int>& cycle, int good = -1);

// The canonical equilibrium profile: every user proposes a*_j for every good
// it sees, and price proposals per good solve the cyclic difference system
// for the equilibrium prices.
MessageProfile construct_ne(const Scenario& scenario, const std::vector<double>& a_star,
                            const PersonalizedPrices& prices);

// The four structural equilibrium conditions a constructed profile must meet:
// proposal agreement/averaging, price differences reproducing l*, the
// own-price·disagreement² complementarity product, and price nonnegativity.
struct EquilibriumConditions {
    bool averaging_exact = false;      // all proposals for good i bitwise equal a*_i,
                                       // and the outcome equals the recomputed average
    double max_price_diff = 0.0;       // worst |l(profile) − l*|
    bool complementarity_zero = false; // every ^iπ_j·(^ia_j − ^succ a_j)² == 0
    bool prices_nonnegative = false;   // every price proposal ≥ 0
    bool ok = false;                   // all of the above with price diff ≤ 1e−9
};
EquilibriumConditions check_equilibrium_conditions(const Scenario& scenario,
                                                   const MessageProfile& profile,
                                                   const std::vector<double>& a_star,
                                                   const PersonalizedPrices& prices);

// Evaluates unilateral deviations of one user in O(|R_i|) per candidate: under
// a deviation by i only the allocations of goods in R_i move, i's price
// coefficients l_ij depend on successors' proposals only, and the type-3 tax
// terms are constants. Differential-tested against the full outcome function.
class UserDeviation {
public:
    UserDeviation(const MessageProfile& profile, const Scenario& scenario, int i);

    int user() const { return user_; }
    std::size_t slots() const { return price_coeff_.size(); }
    double cycle_size(std::size_t k) const { return cycle_size_[k]; }
    double others_sum(std::size_t k) const { return others_sum_[k]; }
    double price_coeff(std::size_t k) const { return price_coeff_[k]; }
    double successor_action(std::size_t k) const { return successor_action_[k]; }

    // Allocation of good r_sets[i][k] if i proposes own_proposal for it.
    double allocated(std::size_t k, double own_proposal) const {
        return (others_sum_[k] + own_proposal) / cycle_size_[k];
    }

    // Full aggregate payoff of user i under the replacement message.
    double payoff(const Message& candidate) const;
    double base_payoff() const { return base_payoff_; }
    const Message& current() const { return current_; }

private:
    const Scenario* scenario_;
    int user_;
    Message current_;
    std::vector<double> cycle_size_;
    std::vector<double> others_sum_;
    std::vector<double> price_coeff_;
    std::vector<double> successor_action_;
    std::vector<double> type3_;
    double base_payoff_;
};

// Payoff difference with the -inf sentinel handled by cases (no -inf
// arithmetic): recovering from an infeasible base counts as +inf gain.
double payoff_gain(double base, double candidate);

struct VerifyConfig {
    int random_deviations = 1000;   // sampled deviations per user
    std::uint64_t seed = 0;
    double gain_tol = 1e-6;         // scaled per user by max(1, |payoff_i|)
    bool use_best_response = true;  // include the inner best-response pass
    double action_radius = 1.0;     // sup-norm ball for action perturbations
    double price_factor = 2.0;      // price samples from [0, factor·max price]
};

struct NEReport {
    bool is_equilibrium = false;
    double worst_gain = 0.0;                // largest improvement found, raw units
    std::vector<double> per_user_gains;
    std::vector<double> payoffs;            // at the unperturbed profile
    long long deviations_tested = 0;        // total candidates across users
    double gain_tol = 0.0;                  // base tolerance used
};

// Falsifier for the Nash property: samples unilateral deviations (perturbed
// actions in a ball, fresh prices in a data-driven range) and runs a
// best-response pass per user; certifies only "no improving deviation found".
NEReport verify_ne(const Scenario& scenario, const MessageProfile& profile,
                   const VerifyConfig& config = {});

}  // namespace lgm
