#pragma once

#include <string>

#include <json.hpp>

#include "lgm/audit.hpp"
#include "lgm/centralized.hpp"
#include "lgm/dynamics.hpp"
#include "lgm/mechanism.hpp"
#include "lgm/ne.hpp"
#include "lgm/network.hpp"

// JSON serialization of profiles and reports. Numbers are emitted in the
// shortest form that round-trips to the same double; non-finite values have no
// JSON number representation and come out as null.

namespace lgm {

// Message profiles. Format:
//   {"messages": [{"user": i,
//                  "actions": {"<good id>": value, ...},
//                  "prices":  {"<good id>": value, ...}}, ...]}
// Every user appears exactly once and the key sets must equal R_i.
MessageProfile parse_profile(const std::string& text, const NetworkTopology& topology,
                             const std::string& origin = "<string>");
MessageProfile load_profile(const std::string& path, const NetworkTopology& topology);
nlohmann::json profile_to_json(const MessageProfile& profile,
                               const NetworkTopology& topology);
void save_profile(const MessageProfile& profile, const NetworkTopology& topology,
                  const std::string& path);

nlohmann::json allocation_to_json(const Allocation& allocation,
                                  const NetworkTopology& topology);
nlohmann::json kkt_to_json(const KKTReport& kkt);
nlohmann::json centralized_to_json(const CentralizedSolution& solution, bool converged);
nlohmann::json prices_to_json(const PersonalizedPrices& prices,
                              const NetworkTopology& topology);
nlohmann::json equilibrium_conditions_to_json(const EquilibriumConditions& report);
nlohmann::json ne_report_to_json(const NEReport& report);
nlohmann::json audit_to_json(const AuditReport& report, const NetworkTopology& topology);
nlohmann::json trajectory_to_json(const Trajectory& trajectory,
                                  const NetworkTopology& topology);

// Long-form table of the recorded iterates:
// header "iteration,user,payoff,delta", one row per (stored sweep, user).
std::string trajectory_csv(const Trajectory& trajectory);

void write_json(const nlohmann::json& value, const std::string& path);
void write_text(const std::string& text, const std::string& path);

}  // namespace lgm
