#include "lgm/utility.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "lgm/errors.hpp"
#include "lgm/rng.hpp"

namespace lgm {

namespace {

std::string key_list(const std::map<int, double>& m) {
    std::string s = "{";
    for (const auto& [k, v] : m) {
        if (s.size() > 1) s += ", ";
        s += std::to_string(k);
    }
    return s + "}";
}

void check_members(int owner, const std::vector<int>& members) {
    if (members.empty()) throw ValidationError("utility member list is empty");
    for (std::size_t k = 1; k < members.size(); ++k) {
        if (members[k - 1] >= members[k]) {
            throw ValidationError("utility members of user " + std::to_string(owner) +
                                  " must be strictly ascending");
        }
    }
    if (!std::binary_search(members.begin(), members.end(), owner)) {
        throw ValidationError("utility members of user " + std::to_string(owner) +
                              " must contain the user itself");
    }
}

int index_of(const std::vector<int>& members, int id) {
    return static_cast<int>(std::lower_bound(members.begin(), members.end(), id) -
                            members.begin());
}

// Aligns an id-keyed coefficient map with `members`, requiring the key set to
// equal `members` (minus the owner when skip_owner is set).
std::vector<double> align(const std::map<int, double>& coeffs, const std::vector<int>& members,
                          int owner, bool skip_owner, const char* what) {
    const std::size_t expected = members.size() - (skip_owner ? 1 : 0);
    if (coeffs.size() != expected) {
        throw ValidationError(std::string(what) + " of user " + std::to_string(owner) +
                              " must have one entry per neighborhood member" +
                              (skip_owner ? " other than the user itself" : "") +
                              "; got keys " + key_list(coeffs));
    }
    std::vector<double> out(members.size(), 0.0);
    for (std::size_t k = 0; k < members.size(); ++k) {
        const int id = members[k];
        if (skip_owner && id == owner) continue;
        const auto it = coeffs.find(id);
        if (it == coeffs.end()) {
            throw ValidationError(std::string(what) + " of user " + std::to_string(owner) +
                                  " is missing key " + std::to_string(id));
        }
        out[k] = it->second;
    }
    return out;
}

void check_dimension(const UtilitySpec& spec, const std::vector<double>& a) {
    if (a.size() != spec.members.size()) {
        throw DimensionMismatch("action vector for user " + std::to_string(spec.owner) +
                                " has " + std::to_string(a.size()) + " entries, expected " +
                                std::to_string(spec.members.size()));
    }
}

}  // namespace

void validate_box(const ActionBox& box, int user) {
    if (!(box.lo <= 0.0 && 0.0 <= box.hi)) {
        throw ValidationError("action set of user " + std::to_string(user) +
                              " must contain 0; got [" + std::to_string(box.lo) + ", " +
                              std::to_string(box.hi) + "]");
    }
    if (!(box.lo < box.hi)) {
        throw ValidationError("action set of user " + std::to_string(user) +
                              " is degenerate: lo must be < hi");
    }
}

UtilitySpec UtilitySpec::power(int owner, std::vector<int> members, double alpha,
                               const std::map<int, double>& beta) {
    check_members(owner, members);
    UtilitySpec s;
    s.family = UtilityFamily::power;
    s.owner = owner;
    s.own_index = index_of(members, owner);
    s.members = std::move(members);
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw ValidationError("power-family exponent alpha of user " + std::to_string(owner) +
                              " must lie in (0, 1); got " + std::to_string(alpha));
    }
    s.alpha = alpha;
    s.beta = align(beta, s.members, owner, /*skip_owner=*/true, "power-family exponents beta");
    for (std::size_t k = 0; k < s.members.size(); ++k) {
        if (static_cast<int>(k) == s.own_index) continue;
        if (!(s.beta[k] > 1.0)) {
            throw ValidationError("power-family exponent beta[" + std::to_string(s.members[k]) +
                                  "] of user " + std::to_string(owner) +
                                  " must exceed 1; got " + std::to_string(s.beta[k]));
        }
    }
    return s;
}

UtilitySpec UtilitySpec::linear(int owner, std::vector<int> members,
                                const std::map<int, double>& c, double b) {
    check_members(owner, members);
    UtilitySpec s;
    s.family = UtilityFamily::linear;
    s.owner = owner;
    s.own_index = index_of(members, owner);
    s.members = std::move(members);
    s.c = align(c, s.members, owner, /*skip_owner=*/false, "linear coefficients c");
    for (std::size_t k = 0; k < s.members.size(); ++k) {
        if (s.c[k] < 0.0) {
            throw ValidationError("linear coefficient c[" + std::to_string(s.members[k]) +
                                  "] of user " + std::to_string(owner) + " must be ≥ 0");
        }
    }
    if (b < 0.0) {
        throw ValidationError("linear cost b of user " + std::to_string(owner) +
                              " must be ≥ 0; got " + std::to_string(b));
    }
    s.b = b;
    return s;
}

UtilitySpec UtilitySpec::quadratic(int owner, std::vector<int> members,
                                   const std::map<int, double>& p,
                                   const std::map<int, double>& q) {
    check_members(owner, members);
    UtilitySpec s;
    s.family = UtilityFamily::quadratic;
    s.owner = owner;
    s.own_index = index_of(members, owner);
    s.members = std::move(members);
    s.p = align(p, s.members, owner, /*skip_owner=*/false, "quadratic coefficients p");
    s.q = align(q, s.members, owner, /*skip_owner=*/false, "quadratic coefficients q");
    for (std::size_t k = 0; k < s.members.size(); ++k) {
        if (s.q[k] < 0.0) {
            throw ValidationError("quadratic curvature q[" + std::to_string(s.members[k]) +
                                  "] of user " + std::to_string(owner) + " must be ≥ 0");
        }
    }
    return s;
}

double evaluate_utility(const UtilitySpec& spec, const ActionBox& box,
                        const std::vector<double>& a) {
    check_dimension(spec, a);
    if (!box.contains(a[spec.own_index])) return kNegInf;

    switch (spec.family) {
        case UtilityFamily::power: {
            // Domain is the nonnegative orthant; tiny negative float noise is
            // clamped, anything beyond is out of domain.
            for (double v : a) {
                if (v < -kBoxTol) return kNegInf;
            }
            double u = std::pow(std::max(a[spec.own_index], 0.0), spec.alpha);
            for (std::size_t k = 0; k < a.size(); ++k) {
                if (static_cast<int>(k) == spec.own_index) continue;
                u -= std::pow(std::max(a[k], 0.0), spec.beta[k]);
            }
            return u;
        }
        case UtilityFamily::linear: {
            double u = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k) u += spec.c[k] * a[k];
            return u - spec.b * a[spec.own_index];
        }
        case UtilityFamily::quadratic: {
            double u = 0.0;
            for (std::size_t k = 0; k < a.size(); ++k) {
                u += spec.p[k] * a[k] - spec.q[k] * a[k] * a[k];
            }
            return u;
        }
    }
    return kNegInf;  // unreachable
}

std::vector<double> utility_gradient(const UtilitySpec& spec, const std::vector<double>& a) {
    check_dimension(spec, a);
    std::vector<double> g(a.size(), 0.0);
    switch (spec.family) {
        case UtilityFamily::power: {
            for (std::size_t k = 0; k < a.size(); ++k) {
                if (a[k] <= 0.0) {
                    throw NotDifferentiableAt(
                        "power-family utility of user " + std::to_string(spec.owner) +
                        " is not differentiable at a[" + std::to_string(spec.members[k]) +
                        "] = " + std::to_string(a[k]) + " (needs strictly positive entries)");
                }
            }
            for (std::size_t k = 0; k < a.size(); ++k) {
                if (static_cast<int>(k) == spec.own_index) {
                    g[k] = spec.alpha * std::pow(a[k], spec.alpha - 1.0);
                } else {
                    g[k] = -spec.beta[k] * std::pow(a[k], spec.beta[k] - 1.0);
                }
            }
            return g;
        }
        case UtilityFamily::linear: {
            for (std::size_t k = 0; k < a.size(); ++k) g[k] = spec.c[k];
            g[spec.own_index] -= spec.b;
            return g;
        }
        case UtilityFamily::quadratic: {
            for (std::size_t k = 0; k < a.size(); ++k) g[k] = spec.p[k] - 2.0 * spec.q[k] * a[k];
            return g;
        }
    }
    return g;  // unreachable
}

std::vector<double> utility_gradient_clamped(const UtilitySpec& spec,
                                             const std::vector<double>& a, double floor_at) {
    if (spec.family != UtilityFamily::power) return utility_gradient(spec, a);
    std::vector<double> floored = a;
    for (double& v : floored) v = std::max(v, floor_at);
    std::vector<double> g = utility_gradient(spec, floored);
    for (double& v : g) v = std::clamp(v, -1e12, 1e12);
    return g;
}

double aggregate_utility(const UtilitySpec& spec, const ActionBox& box,
                         const std::vector<double>& a, double tax) {
    const double u = evaluate_utility(spec, box, a);
    if (is_neg_inf(u)) return kNegInf;
    return u - tax;
}

ConcavityCheck check_concavity(const UtilitySpec& spec, const ActionBox& box,
                               int sample_count, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t dim = spec.members.size();
    // Sampling region: the own coordinate ranges over the box, neighbors over
    // a representative compact window of their domain.
    const bool nonneg = spec.family == UtilityFamily::power;
    const double span = 2.0 * std::max({1.0, std::abs(box.lo), std::abs(box.hi)});

    std::vector<double> x(dim), y(dim), mid(dim);
    ConcavityCheck result;
    for (int s = 0; s < sample_count; ++s) {
        for (std::size_t k = 0; k < dim; ++k) {
            if (static_cast<int>(k) == spec.own_index) {
                x[k] = rng.uniform(box.lo, box.hi);
                y[k] = rng.uniform(box.lo, box.hi);
            } else if (nonneg) {
                x[k] = rng.uniform(0.0, span);
                y[k] = rng.uniform(0.0, span);
            } else {
                x[k] = rng.uniform(-span, span);
                y[k] = rng.uniform(-span, span);
            }
            mid[k] = 0.5 * (x[k] + y[k]);
        }
        const double ux = evaluate_utility(spec, box, x);
        const double uy = evaluate_utility(spec, box, y);
        const double um = evaluate_utility(spec, box, mid);
        if (is_neg_inf(ux) || is_neg_inf(uy) || is_neg_inf(um)) continue;
        const double violation = 0.5 * (ux + uy) - um;
        result.worst_violation = std::max(result.worst_violation, violation);
    }
    result.concave = result.worst_violation <= 1e-9;
    return result;
}

}  // namespace lgm
