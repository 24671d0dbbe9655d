#include "lgm/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "lgm/errors.hpp"

namespace lgm {

using nlohmann::json;

namespace {

double finite_number(const json& value, const std::string& where) {
    if (!value.is_number()) throw ParseError(where + " must be a number");
    const double v = value.get<double>();
    if (!std::isfinite(v)) throw ParseError(where + " must be finite");
    return v;
}

// Reads an id-keyed object into slot order along r_set; the key set must be
// exactly {to_string(j) : j in r_set}.
std::vector<double> aligned_values(const json& object, const std::vector<int>& r_set,
                                   const std::string& where) {
    if (!object.is_object()) throw ParseError(where + " must be an object keyed by good id");
    if (object.size() != r_set.size()) {
        throw ParseError(where + " must name exactly the goods the user affects (" +
                         std::to_string(r_set.size()) + " entries, got " +
                         std::to_string(object.size()) + ")");
    }
    std::vector<double> values(r_set.size());
    for (std::size_t k = 0; k < r_set.size(); ++k) {
        const std::string key = std::to_string(r_set[k]);
        if (!object.contains(key)) throw ParseError(where + " is missing good " + key);
        values[k] = finite_number(object.at(key), where + "[" + key + "]");
    }
    return values;
}

json slot_table(const std::vector<std::vector<double>>& per_user_values,
                const NetworkTopology& topology) {
    json rows = json::array();
    for (int i = 0; i < topology.n; ++i) {
        for (std::size_t k = 0; k < topology.r_sets[i].size(); ++k) {
            rows.push_back(
                {{"i", i}, {"j", topology.r_sets[i][k]}, {"value", per_user_values[i][k]}});
        }
    }
    return rows;
}

std::string csv_number(double v) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", v);
    return buffer;
}

}  // namespace

MessageProfile parse_profile(const std::string& text, const NetworkTopology& topology,
                             const std::string& origin) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!root.is_object() || !root.contains("messages") || !root["messages"].is_array()) {
        throw ParseError(origin + ": profile must be an object with a \"messages\" array");
    }
    const json& messages = root["messages"];
    if (messages.size() != static_cast<std::size_t>(topology.n)) {
        throw ParseError(origin + ": expected " + std::to_string(topology.n) +
                         " messages, got " + std::to_string(messages.size()));
    }
    MessageProfile profile = zero_profile(topology);
    std::vector<bool> seen(static_cast<std::size_t>(topology.n), false);
    for (const json& entry : messages) {
        if (!entry.is_object() || !entry.contains("user") ||
            !entry["user"].is_number_integer()) {
            throw ParseError(origin + ": each message needs an integer \"user\"");
        }
        const int user = entry["user"].get<int>();
        if (user < 0 || user >= topology.n) {
            throw ParseError(origin + ": user id " + std::to_string(user) + " out of range");
        }
        if (seen[static_cast<std::size_t>(user)]) {
            throw ParseError(origin + ": duplicate message for user " + std::to_string(user));
        }
        seen[static_cast<std::size_t>(user)] = true;
        const std::string where = origin + ": user " + std::to_string(user);
        if (!entry.contains("actions") || !entry.contains("prices")) {
            throw ParseError(where + " needs \"actions\" and \"prices\"");
        }
        profile[user].actions =
            aligned_values(entry["actions"], topology.r_sets[user], where + " actions");
        profile[user].prices =
            aligned_values(entry["prices"], topology.r_sets[user], where + " prices");
    }
    validate_profile(profile, topology);
    return profile;
}

MessageProfile load_profile(const std::string& path, const NetworkTopology& topology) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open profile file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_profile(buffer.str(), topology, path);
}

json profile_to_json(const MessageProfile& profile, const NetworkTopology& topology) {
    json messages = json::array();
    for (int i = 0; i < topology.n; ++i) {
        json actions = json::object(), prices = json::object();
        for (std::size_t k = 0; k < topology.r_sets[i].size(); ++k) {
            const std::string key = std::to_string(topology.r_sets[i][k]);
            actions[key] = profile[i].actions[k];
            prices[key] = profile[i].prices[k];
        }
        messages.push_back({{"user", i}, {"actions", actions}, {"prices", prices}});
    }
    return {{"messages", messages}};
}

void save_profile(const MessageProfile& profile, const NetworkTopology& topology,
                  const std::string& path) {
    write_json(profile_to_json(profile, topology), path);
}

json allocation_to_json(const Allocation& allocation, const NetworkTopology& topology) {
    return {{"actions", allocation.actions},
            {"taxes", allocation.taxes},
            {"prices", slot_table(allocation.prices, topology)}};
}

json kkt_to_json(const KKTReport& kkt) {
    return {{"multipliers", kkt.multipliers},
            {"stationarity_residuals", kkt.stationarity_residuals},
            {"complementarity_residuals", kkt.complementarity_residuals},
            {"active_bound", kkt.active_bound},
            {"max_residual", kkt.max_residual}};
}

json centralized_to_json(const CentralizedSolution& solution, bool converged) {
    return {{"actions", solution.actions},
            {"objective", solution.objective},
            {"converged", converged},
            {"iterations", solution.iterations},
            {"kkt", kkt_to_json(solution.kkt)}};
}

json prices_to_json(const PersonalizedPrices& prices, const NetworkTopology& topology) {
    return slot_table(prices.l, topology);
}

json equilibrium_conditions_to_json(const EquilibriumConditions& report) {
    return {{"averaging_exact", report.averaging_exact},
            {"max_price_diff", report.max_price_diff},
            {"complementarity_zero", report.complementarity_zero},
            {"prices_nonnegative", report.prices_nonnegative},
            {"ok", report.ok}};
}

json ne_report_to_json(const NEReport& report) {
    return {{"is_equilibrium", report.is_equilibrium},
            {"worst_gain", report.worst_gain},
            {"per_user_gains", report.per_user_gains},
            {"payoffs", report.payoffs},
            {"deviations_tested", report.deviations_tested},
            {"gain_tol", report.gain_tol}};
}

json audit_to_json(const AuditReport& report, const NetworkTopology& topology) {
    return {{"budget_residual", report.budget_residual},
            {"budget_scale", report.budget_scale},
            {"ir_margins", report.ir_margins},
            {"mech_feasible", report.mech_feasible},
            {"mechanism_welfare", report.mechanism_welfare},
            {"optimality_gap", report.optimality_gap},
            {"kkt_max_residual", report.kkt_max_residual},
            {"centralized_converged", report.centralized_converged},
            {"allocation", allocation_to_json(report.allocation, topology)},
            {"centralized",
             centralized_to_json(report.centralized, report.centralized_converged)},
            {"nash_verification", ne_report_to_json(report.ne_report)}};
}

json trajectory_to_json(const Trajectory& trajectory, const NetworkTopology& topology) {
    json doc = {{"sweeps", trajectory.sweeps},
                {"converged", trajectory.converged},
                {"converged_at", trajectory.converged_at},
                {"final_delta", trajectory.final_delta},
                {"deltas", trajectory.deltas},
                {"recorded_iterations", trajectory.recorded_iterations},
                {"payoffs", trajectory.payoffs},
                {"verify_ran", trajectory.verify_ran}};
    if (trajectory.verify_ran) {
        doc["nash_verification"] = ne_report_to_json(trajectory.final_report);
    }
    if (!trajectory.iterates.empty()) {
        doc["final_profile"] = profile_to_json(trajectory.iterates.back(), topology);
    }
    return doc;
}

std::string trajectory_csv(const Trajectory& trajectory) {
    std::string out = "iteration,user,payoff,delta\n";
    for (std::size_t r = 0; r < trajectory.recorded_iterations.size(); ++r) {
        const int stamp = trajectory.recorded_iterations[r];
        const double delta =
            stamp > 0 && static_cast<std::size_t>(stamp) <= trajectory.deltas.size()
                ? trajectory.deltas[static_cast<std::size_t>(stamp) - 1]
                : 0.0;
        for (std::size_t u = 0; u < trajectory.payoffs[r].size(); ++u) {
            out += std::to_string(stamp) + "," + std::to_string(u) + "," +
                   csv_number(trajectory.payoffs[r][u]) + "," + csv_number(delta) + "\n";
        }
    }
    return out;
}

void write_json(const json& value, const std::string& path) {
    write_text(value.dump(2) + "\n", path);
}

void write_text(const std::string& text, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write file " + path);
    out << text;
    if (!out.good()) throw Error("failed while writing " + path);
}

}  // namespace lgm
