#include "lgm/scenario.hpp"

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "lgm/errors.hpp"
#include "lgm/rng.hpp"

namespace lgm {

using nlohmann::json;

namespace {

// ---- parse helpers: structure errors carry the offending field path -------

const json& require(const json& obj, const char* key, const std::string& path) {
    if (!obj.is_object()) throw ParseError(path + ": expected an object");
    const auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(path + ": missing field \"" + key + "\"");
    return *it;
}

double to_double(const json& v, const std::string& path) {
    if (!v.is_number()) throw ParseError(path + ": expected a number");
    return v.get<double>();
}

std::int64_t to_int(const json& v, const std::string& path) {
    if (!v.is_number_integer()) throw ParseError(path + ": expected an integer");
    return v.get<std::int64_t>();
}

std::string to_string_field(const json& v, const std::string& path) {
    if (!v.is_string()) throw ParseError(path + ": expected a string");
    return v.get<std::string>();
}

std::map<int, double> to_coeff_map(const json& v, const std::string& path) {
    if (!v.is_object()) throw ParseError(path + ": expected an object keyed by user id");
    std::map<int, double> out;
    for (const auto& [key, value] : v.items()) {
        int id = 0;
        try {
            std::size_t used = 0;
            id = std::stoi(key, &used);
            if (used != key.size()) throw std::invalid_argument(key);
        } catch (const std::exception&) {
            throw ParseError(path + ": key \"" + key + "\" is not a user id");
        }
        out[id] = to_double(value, path + "." + key);
    }
    return out;
}

std::vector<std::vector<int>> to_adjacency(const json& v, const std::string& path) {
    if (!v.is_array()) throw ParseError(path + ": expected an array of rows");
    std::vector<std::vector<int>> m;
    for (std::size_t i = 0; i < v.size(); ++i) {
        const json& row = v[i];
        const std::string row_path = path + "[" + std::to_string(i) + "]";
        if (!row.is_array()) throw ParseError(row_path + ": expected an array");
        std::vector<int> r;
        for (std::size_t j = 0; j < row.size(); ++j) {
            r.push_back(static_cast<int>(
                to_int(row[j], row_path + "[" + std::to_string(j) + "]")));
        }
        m.push_back(std::move(r));
    }
    return m;
}

UtilityParams parse_utility(const json& u, const std::string& path) {
    const std::string family = to_string_field(require(u, "family", path), path + ".family");
    if (family == "power") {
        return UtilityParams::power(
            to_double(require(u, "alpha", path), path + ".alpha"),
            to_coeff_map(require(u, "beta", path), path + ".beta"));
    }
    if (family == "linear") {
        return UtilityParams::linear(to_coeff_map(require(u, "c", path), path + ".c"),
                                     to_double(require(u, "b", path), path + ".b"));
    }
    if (family == "quadratic") {
        return UtilityParams::quadratic(to_coeff_map(require(u, "p", path), path + ".p"),
                                        to_coeff_map(require(u, "q", path), path + ".q"));
    }
    throw ParseError(path + ".family: unknown utility family \"" + family + "\"");
}

json utility_to_json(const UtilitySpec& spec) {
    json u;
    auto map_of = [&](const std::vector<double>& aligned, bool skip_owner) {
        json m = json::object();
        for (std::size_t k = 0; k < spec.members.size(); ++k) {
            if (skip_owner && static_cast<int>(k) == spec.own_index) continue;
            m[std::to_string(spec.members[k])] = aligned[k];
        }
        return m;
    };
    switch (spec.family) {
        case UtilityFamily::power:
            u["family"] = "power";
            u["alpha"] = spec.alpha;
            u["beta"] = map_of(spec.beta, true);
            break;
        case UtilityFamily::linear:
            u["family"] = "linear";
            u["c"] = map_of(spec.c, false);
            u["b"] = spec.b;
            break;
        case UtilityFamily::quadratic:
            u["family"] = "quadratic";
            u["p"] = map_of(spec.p, false);
            u["q"] = map_of(spec.q, false);
            break;
    }
    return u;
}

}  // namespace

UtilityParams UtilityParams::power(double alpha, std::map<int, double> beta) {
    UtilityParams p;
    p.family = UtilityFamily::power;
    p.alpha = alpha;
    p.beta = std::move(beta);
    return p;
}

UtilityParams UtilityParams::linear(std::map<int, double> c, double b) {
    UtilityParams p;
    p.family = UtilityFamily::linear;
    p.c = std::move(c);
    p.b = b;
    return p;
}

UtilityParams UtilityParams::quadratic(std::map<int, double> pp, std::map<int, double> q) {
    UtilityParams p;
    p.family = UtilityFamily::quadratic;
    p.p = std::move(pp);
    p.q = std::move(q);
    return p;
}

Scenario make_scenario(std::string name, const std::vector<std::vector<int>>& adjacency,
                       std::vector<ActionBox> boxes, const std::vector<UtilityParams>& params,
                       IndexPolicy policy, SolverConfig solver, std::uint64_t seed) {
    Scenario s;
    s.name = std::move(name);
    s.seed = seed;
    s.index_policy = policy;
    try {
        s.topology = build_topology(adjacency);
    } catch (const CycleTooSmall& e) {
        throw ValidationError("good " + std::to_string(e.good) + " is provided by only " +
                              std::to_string(e.size) + " user(s); every column support "
                              "needs at least 3 members");
    } catch (const MissingSelfLoop& e) {
        throw ValidationError("user " + std::to_string(e.user) +
                              " must affect itself (adjacency diagonal is 0)");
    }
    s.table = assign_cyclic_indices(s.topology, policy);
    const int n = s.topology.n;
    if (static_cast<int>(boxes.size()) != n || static_cast<int>(params.size()) != n) {
        throw ValidationError("scenario must define a box and a utility for each of the " +
                              std::to_string(n) + " users");
    }
    s.boxes = std::move(boxes);
    for (int i = 0; i < n; ++i) validate_box(s.boxes[i], i);

    s.utilities.reserve(n);
    for (int i = 0; i < n; ++i) {
        const UtilityParams& p = params[i];
        switch (p.family) {
            case UtilityFamily::power:
                s.utilities.push_back(
                    UtilitySpec::power(i, s.topology.r_sets[i], p.alpha, p.beta));
                break;
            case UtilityFamily::linear:
                s.utilities.push_back(UtilitySpec::linear(i, s.topology.r_sets[i], p.c, p.b));
                break;
            case UtilityFamily::quadratic:
                s.utilities.push_back(
                    UtilitySpec::quadratic(i, s.topology.r_sets[i], p.p, p.q));
                break;
        }
    }

    // The power family is only defined on the nonnegative orthant, so every
    // action set it can see must sit there (combined with the 0 ∈ A_i rule
    // this pins lo = 0 for the referenced users).
    for (int i = 0; i < n; ++i) {
        if (s.utilities[i].family != UtilityFamily::power) continue;
        for (int j : s.topology.r_sets[i]) {
            if (s.boxes[j].lo < 0.0) {
                throw ValidationError(
                    "power-family utility of user " + std::to_string(i) +
                    " requires a nonnegative action set for user " + std::to_string(j) +
                    "; got lo = " + std::to_string(s.boxes[j].lo));
            }
        }
    }

    s.solver = solver;
    if (!(s.solver.tol > 0.0) || s.solver.max_iter <= 0 || !(s.solver.step > 0.0)) {
        throw ValidationError("solver config must have positive step, tol and max_iter");
    }

    for (int i = 0; i < n; ++i) {
        const ConcavityCheck check =
            check_concavity(s.utilities[i], s.boxes[i], 200, Rng::derive(s.seed, i));
        if (!check.concave) {
            throw NonConcaveUtility("utility of user " + std::to_string(i) +
                                    " failed the sampled concavity check (violation " +
                                    std::to_string(check.worst_violation) + ")");
        }
    }
    return s;
}

Scenario parse_scenario(const std::string& json_text, const std::string& origin) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ParseError(origin + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError(origin + ": top level must be an object");

    std::string name;
    if (doc.contains("name")) name = to_string_field(doc["name"], "name");
    std::uint64_t seed = 0;
    if (doc.contains("seed")) seed = static_cast<std::uint64_t>(to_int(doc["seed"], "seed"));

    IndexPolicy policy;
    if (doc.contains("index_policy")) {
        const json& ip = doc["index_policy"];
        const std::string kind = to_string_field(require(ip, "kind", "index_policy"),
                                                 "index_policy.kind");
        if (kind == "ascending") {
            policy.kind = IndexPolicyKind::ascending;
        } else if (kind == "shuffled") {
            policy.kind = IndexPolicyKind::shuffled;
            if (ip.contains("seed")) {
                policy.seed = static_cast<std::uint64_t>(to_int(ip["seed"], "index_policy.seed"));
            }
        } else {
            throw ParseError("index_policy.kind: expected \"ascending\" or \"shuffled\"");
        }
    }

    const json& adj_field = require(doc, "adjacency", "scenario");
    std::vector<std::vector<int>> adjacency;
    if (adj_field.is_string()) {
        // Topology by reference: a JSON file holding the matrix, relative to
        // the scenario file's directory.
        namespace fs = std::filesystem;
        fs::path p = adj_field.get<std::string>();
        if (p.is_relative() && origin != "<string>") p = fs::path(origin).parent_path() / p;
        std::ifstream in(p);
        if (!in) throw ParseError("adjacency: cannot open referenced file " + p.string());
        json adoc;
        try {
            adoc = json::parse(in);
        } catch (const json::parse_error& e) {
            throw ParseError(p.string() + ": " + e.what());
        }
        adjacency = to_adjacency(adoc, "adjacency(file)");
    } else {
        adjacency = to_adjacency(adj_field, "adjacency");
    }

    const json& users = require(doc, "users", "scenario");
    if (!users.is_array()) throw ParseError("users: expected an array");
    std::vector<ActionBox> boxes;
    std::vector<UtilityParams> params;
    for (std::size_t i = 0; i < users.size(); ++i) {
        const std::string path = "users[" + std::to_string(i) + "]";
        const json& user = users[i];
        const json& box = require(user, "box", path);
        boxes.push_back(ActionBox{to_double(require(box, "lo", path + ".box"), path + ".box.lo"),
                                  to_double(require(box, "hi", path + ".box"), path + ".box.hi")});
        params.push_back(parse_utility(require(user, "utility", path), path + ".utility"));
    }

    SolverConfig solver;
    if (doc.contains("solver")) {
        const json& sv = doc["solver"];
        if (!sv.is_object()) throw ParseError("solver: expected an object");
        if (sv.contains("step")) solver.step = to_double(sv["step"], "solver.step");
        if (sv.contains("max_iter")) {
            solver.max_iter = static_cast<int>(to_int(sv["max_iter"], "solver.max_iter"));
        }
        if (sv.contains("tol")) solver.tol = to_double(sv["tol"], "solver.tol");
    }

    return make_scenario(std::move(name), adjacency, std::move(boxes), params, policy, solver,
                         seed);
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file " + path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_scenario(buffer.str(), path);
}

std::string scenario_to_text(const Scenario& scenario) {
    json doc;
    doc["name"] = scenario.name;
    doc["seed"] = scenario.seed;
    json policy;
    policy["kind"] =
        scenario.index_policy.kind == IndexPolicyKind::ascending ? "ascending" : "shuffled";
    if (scenario.index_policy.kind == IndexPolicyKind::shuffled) {
        policy["seed"] = scenario.index_policy.seed;
    }
    doc["index_policy"] = policy;
    doc["adjacency"] = scenario.topology.g;
    json users = json::array();
    for (int i = 0; i < scenario.n(); ++i) {
        json user;
        user["box"] = {{"lo", scenario.boxes[i].lo}, {"hi", scenario.boxes[i].hi}};
        user["utility"] = utility_to_json(scenario.utilities[i]);
        users.push_back(user);
    }
    doc["users"] = users;
    doc["solver"] = {{"step", scenario.solver.step},
                     {"max_iter", scenario.solver.max_iter},
                     {"tol", scenario.solver.tol}};
    return doc.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw Error("cannot write scenario file " + path);
    out << scenario_to_text(scenario);
}

}  // namespace lgm
