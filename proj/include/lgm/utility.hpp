#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <vector>

namespace lgm {

// Extended-real sentinel: utilities evaluate to -inf outside their domain.
// The sentinel only ever participates in comparisons; every code path that
// combines utilities with taxes or gains branches on it first so no -inf
// arithmetic (and no silent NaN) can occur.
inline constexpr double kNegInf = -std::numeric_limits<double>::infinity();
inline bool is_neg_inf(double v) { return v == kNegInf; }

// Membership tolerance absorbing float noise from proposal averaging: values
// within 1e-12 of the box count as inside.
inline constexpr double kBoxTol = 1e-12;

// Per-user action set A_i = [lo, hi]. Must contain 0 (the non-participation
// action) and be non-degenerate.
struct ActionBox {
    double lo = 0.0;
    double hi = 1.0;

    bool contains(double a) const { return a >= lo - kBoxTol && a <= hi + kBoxTol; }
    double clamp(double a) const { return a < lo ? lo : (a > hi ? hi : a); }
    // Convex characterization f_A(a) ≤ 0 inside the box, = 0 on the boundary.
    double constraint(double a) const { return a - hi > lo - a ? a - hi : lo - a; }
};

// Throws ValidationError unless lo ≤ 0 ≤ hi and lo < hi.
void validate_box(const ActionBox& box, int user);

enum class UtilityFamily { power, linear, quadratic };

// Concave utility of one user over the actions of its neighborhood R_i.
// Coefficients are stored aligned with `members` (R_i in ascending id order);
// the named constructors take id-keyed maps, validate parameter domains, and
// check the key sets match R_i exactly.
//
// Families:
//   power:      u(a) = a_i^alpha − Σ_{j≠i} a_j^beta_j,   alpha ∈ (0,1), beta_j > 1,
//               defined for a ≥ 0 only (−inf outside the nonnegative orthant);
//   linear:     u(a) = Σ_j c_j a_j − b a_i,              c_j ≥ 0, b ≥ 0;
//   quadratic:  u(a) = Σ_j (p_j a_j − q_j a_j²),         q_j ≥ 0.
struct UtilitySpec {
    UtilityFamily family = UtilityFamily::linear;
    int owner = 0;
    std::vector<int> members;  // R_i, ascending
    int own_index = 0;         // position of owner within members

    double alpha = 0.0;          // power
    std::vector<double> beta;    // power, aligned; beta[own_index] unused
    std::vector<double> c;       // linear, aligned
    double b = 0.0;              // linear
    std::vector<double> p, q;    // quadratic, aligned

    static UtilitySpec power(int owner, std::vector<int> members, double alpha,
                             const std::map<int, double>& beta);
    static UtilitySpec linear(int owner, std::vector<int> members,
                              const std::map<int, double>& c, double b);
    static UtilitySpec quadratic(int owner, std::vector<int> members,
                                 const std::map<int, double>& p,
                                 const std::map<int, double>& q);
};

// u_i(a) with the box rule folded in: -inf when the own coordinate leaves the
// box (within kBoxTol) or, for the power family, when any coordinate is
// negative beyond kBoxTol.
double evaluate_utility(const UtilitySpec& spec, const ActionBox& box,
                        const std::vector<double>& a);

// Analytic gradient over R_i. The power family requires strictly positive
// entries (the own-term derivative is unbounded at 0); throws
// NotDifferentiableAt otherwise.
std::vector<double> utility_gradient(const UtilitySpec& spec, const std::vector<double>& a);

// Solver-facing variant: never throws. Power-family evaluation points are
// floored at `floor_at` and components capped at ±1e12 so ascent steps and
// KKT diagnostics stay finite near 0.
std::vector<double> utility_gradient_clamped(const UtilitySpec& spec,
                                             const std::vector<double>& a,
                                             double floor_at = 1e-10);

// Aggregate utility u_i^A = u_i(a) − t, or -inf when the allocation is
// infeasible for the user (the tax never rescues an infeasible action).
double aggregate_utility(const UtilitySpec& spec, const ActionBox& box,
                         const std::vector<double>& a, double tax);

struct ConcavityCheck {
    bool concave = true;
    double worst_violation = 0.0;  // max over samples of (u(x)+u(y))/2 − u(mid)
};

// Sampled midpoint test of concavity over a representative region of the
// domain. A guard for hand-written scenario parameters, not a proof.
ConcavityCheck check_concavity(const UtilitySpec& spec, const ActionBox& box,
                               int sample_count, std::uint64_t seed);

}  // namespace lgm
