#include "lgm/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <map>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "lgm/audit.hpp"
#include "lgm/centralized.hpp"
#include "lgm/dynamics.hpp"
#include "lgm/errors.hpp"
#include "lgm/gen.hpp"
#include "lgm/io.hpp"
#include "lgm/mechanism.hpp"
#include "lgm/ne.hpp"
#include "lgm/scenario.hpp"

namespace lgm {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string error_name(const std::exception& e) {
    if (dynamic_cast<const ParseError*>(&e)) return "ParseError";
    if (dynamic_cast<const NotConverged*>(&e)) return "NotConverged";
    if (dynamic_cast<const InnerNotConverged*>(&e)) return "InnerNotConverged";
    if (dynamic_cast<const KKTNotSatisfied*>(&e)) return "KKTNotSatisfied";
    if (dynamic_cast<const InconsistentColumn*>(&e)) return "InconsistentColumn";
    if (dynamic_cast<const NonConcaveUtility*>(&e)) return "NonConcaveUtility";
    if (dynamic_cast<const NotDifferentiableAt*>(&e)) return "NotDifferentiableAt";
    if (dynamic_cast<const DimensionMismatch*>(&e)) return "DimensionMismatch";
    if (dynamic_cast<const NotInCycle*>(&e)) return "NotInCycle";
    if (dynamic_cast<const CycleTooSmall*>(&e)) return "CycleTooSmall";
    if (dynamic_cast<const MissingSelfLoop*>(&e)) return "MissingSelfLoop";
    if (dynamic_cast<const NonSquare*>(&e)) return "NonSquare";
    if (dynamic_cast<const ValidationError*>(&e)) return "ValidationError";
    if (dynamic_cast<const Error*>(&e)) return "Error";
    return "InternalError";
}

std::string out_file(const std::string& out_dir, const std::string& name) {
    fs::create_directories(out_dir);
    return (fs::path(out_dir) / name).string();
}

void emit(const std::string& path) { std::printf("%s\n", path.c_str()); }

struct Options {
    std::string scenario_path;
    std::string profile_path;
    std::string out_dir = ".";
    std::uint64_t seed = 0;
    double tol = -1.0;  // < 0 means "keep the command's default"
    int deviations = 1000;
    bool strict = false;

    // gen
    int n = 6;
    double density = 0.4;
    UtilityFamily family = UtilityFamily::power;
    IndexPolicyKind policy = IndexPolicyKind::ascending;

    // dynamics
    Schedule schedule = Schedule::round_robin;
    double damping = 0.5;
    int max_iter = 200;
    int record_stride = 1;
};

VerifyConfig verify_config_from(const Options& opt) {
    VerifyConfig config;
    config.random_deviations = opt.deviations;
    config.seed = opt.seed;
    if (opt.tol > 0.0) config.gain_tol = opt.tol;
    return config;
}

int cmd_solve(const Options& opt) {
    const Scenario scenario = load_scenario(opt.scenario_path);
    SolverConfig solver = scenario.solver;
    if (opt.tol > 0.0) solver.tol = opt.tol;
    CentralizedSolution solution;
    bool converged = true;
    try {
        solution = solve_centralized(scenario, solver);
    } catch (const NotConverged& e) {
        solution = e.best;
        converged = false;
    }
    const json report = {{"command", "solve"},
                         {"scenario", scenario.name},
                         {"centralized", centralized_to_json(solution, converged)}};
    const std::string path = out_file(opt.out_dir, "report.json");
    write_json(report, path);
    emit(path);
    return converged ? 0 : 1;
}

int cmd_construct_ne(const Options& opt) {
    const Scenario scenario = load_scenario(opt.scenario_path);
    const CentralizedSolution solution = solve_centralized(scenario);
    const PersonalizedPrices prices =
        personalized_prices_from_optimum(scenario, solution.actions);
    const MessageProfile profile = construct_ne(scenario, solution.actions, prices);
    const EquilibriumConditions conditions =
        check_equilibrium_conditions(scenario, profile, solution.actions, prices);
    const NEReport ne = verify_ne(scenario, profile, verify_config_from(opt));

    const std::string profile_path = out_file(opt.out_dir, "ne_profile.json");
    save_profile(profile, scenario.topology, profile_path);
    const json report = {{"command", "construct-ne"},
                         {"scenario", scenario.name},
                         {"centralized", centralized_to_json(solution, true)},
                         {"prices", prices_to_json(prices, scenario.topology)},
                         {"equilibrium_checks", equilibrium_conditions_to_json(conditions)},
                         {"nash_verification", ne_report_to_json(ne)},
                         {"profile_file", profile_path}};
    const std::string path = out_file(opt.out_dir, "report.json");
    write_json(report, path);
    emit(path);
    emit(profile_path);
    return conditions.ok && ne.is_equilibrium ? 0 : 1;
}

int cmd_verify(const Options& opt) {
    const Scenario scenario = load_scenario(opt.scenario_path);
    const MessageProfile profile = load_profile(opt.profile_path, scenario.topology);
    const NEReport ne = verify_ne(scenario, profile, verify_config_from(opt));
    const json report = {{"command", "verify"},
                         {"scenario", scenario.name},
                         {"nash_verification", ne_report_to_json(ne)}};
    const std::string path = out_file(opt.out_dir, "report.json");
    write_json(report, path);
    emit(path);
    return ne.is_equilibrium ? 0 : 1;
}

int cmd_dynamics(const Options& opt) {
    const Scenario scenario = load_scenario(opt.scenario_path);
    const MessageProfile init = opt.profile_path.empty()
                                    ? zero_profile(scenario.topology)
                                    : load_profile(opt.profile_path, scenario.topology);
    DynamicsConfig config;
    config.schedule = opt.schedule;
    config.damping = opt.damping;
    config.max_iter = opt.max_iter;
    config.record_stride = opt.record_stride;
    config.seed = opt.seed;
    if (opt.tol > 0.0) config.tol = opt.tol;
    config.verify.seed = opt.seed;
    config.verify.random_deviations = opt.deviations;
    const Trajectory trajectory = run_dynamics(scenario, init, config);

    const std::string csv_path = out_file(opt.out_dir, "trajectory.csv");
    write_text(trajectory_csv(trajectory), csv_path);
    const json report = {{"command", "dynamics"},
                         {"scenario", scenario.name},
                         {"dynamics", trajectory_to_json(trajectory, scenario.topology)},
                         {"trajectory_file", csv_path}};
    const std::string path = out_file(opt.out_dir, "report.json");
    write_json(report, path);
    emit(path);
    emit(csv_path);
    return 0;
}

int cmd_audit(const Options& opt) {
    const Scenario scenario = load_scenario(opt.scenario_path);
    const MessageProfile profile = load_profile(opt.profile_path, scenario.topology);
    const AuditReport audit = full_audit(scenario, profile, verify_config_from(opt));
    const json report = {{"command", "audit"},
                         {"scenario", scenario.name},
                         {"audit", audit_to_json(audit, scenario.topology)}};
    const std::string path = out_file(opt.out_dir, "report.json");
    write_json(report, path);
    emit(path);
    if (!opt.strict) return 0;
    bool ok = audit.centralized_converged && audit.mech_feasible &&
              audit.ne_report.is_equilibrium &&
              audit.budget_residual <= 1e-9 * audit.budget_scale &&
              audit.optimality_gap <= 1e-6;
    for (double margin : audit.ir_margins) ok = ok && margin >= -1e-9;
    return ok ? 0 : 1;
}

int cmd_gen(const Options& opt) {
    GenConfig config;
    config.n = opt.n;
    config.density = opt.density;
    config.family = opt.family;
    config.seed = opt.seed;
    config.policy.kind = opt.policy;
    config.policy.seed = opt.seed;
    const Scenario scenario = generate_scenario(config);
    const std::string name = "scenario_" +
                             std::string(opt.family == UtilityFamily::power     ? "power"
                                         : opt.family == UtilityFamily::linear ? "linear"
                                                                               : "quadratic") +
                             "_n" + std::to_string(opt.n) + "_seed" +
                             std::to_string(opt.seed) + ".json";
    const std::string path = out_file(opt.out_dir, name);
    save_scenario(scenario, path);
    emit(path);
    return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
    CLI::App app{"Decentralized provisioning mechanism: solver, equilibrium tools, audits"};
    app.require_subcommand(1);
    Options opt;

    const std::map<std::string, UtilityFamily> family_names{
        {"power", UtilityFamily::power},
        {"linear", UtilityFamily::linear},
        {"quadratic", UtilityFamily::quadratic}};
    const std::map<std::string, IndexPolicyKind> policy_names{
        {"ascending", IndexPolicyKind::ascending}, {"shuffled", IndexPolicyKind::shuffled}};
    const std::map<std::string, Schedule> schedule_names{
        {"round_robin", Schedule::round_robin},
        {"random_order", Schedule::random_order},
        {"simultaneous", Schedule::simultaneous}};

    const auto add_common = [&](CLI::App* cmd, bool with_scenario) {
        if (with_scenario) {
            cmd->add_option("--scenario", opt.scenario_path, "Scenario JSON file")
                ->required()
                ->check(CLI::ExistingFile);
        }
        cmd->add_option("--out", opt.out_dir, "Output directory (created if missing)");
        cmd->add_option("--seed", opt.seed, "Seed for any randomized step");
    };

    CLI::App* solve = app.add_subcommand("solve", "Solve the centralized problem");
    add_common(solve, true);
    solve->add_option("--tol", opt.tol, "Override the solver tolerance");

    CLI::App* construct =
        app.add_subcommand("construct-ne", "Build the equilibrium profile from the optimum");
    add_common(construct, true);
    construct->add_option("--tol", opt.tol, "Equilibrium gain tolerance");
    construct->add_option("--deviations", opt.deviations, "Sampled deviations per user");

    CLI::App* verify = app.add_subcommand("verify", "Check a profile for the Nash property");
    add_common(verify, true);
    verify->add_option("--profile", opt.profile_path, "Message profile JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    verify->add_option("--tol", opt.tol, "Equilibrium gain tolerance");
    verify->add_option("--deviations", opt.deviations, "Sampled deviations per user");

    CLI::App* dynamics = app.add_subcommand("dynamics", "Run best-response dynamics");
    add_common(dynamics, true);
    dynamics->add_option("--profile", opt.profile_path,
                         "Starting profile (defaults to the all-zero profile)")
        ->check(CLI::ExistingFile);
    dynamics->add_option("--tol", opt.tol, "Per-sweep message-change tolerance");
    dynamics->add_option("--deviations", opt.deviations,
                         "Sampled deviations per user in the final check");
    dynamics->add_option("--schedule", opt.schedule, "Update schedule")
        ->transform(CLI::CheckedTransformer(schedule_names, CLI::ignore_case));
    dynamics->add_option("--damping", opt.damping, "Update damping in (0, 1]");
    dynamics->add_option("--max-iter", opt.max_iter, "Sweep budget");
    dynamics->add_option("--record-stride", opt.record_stride,
                         "Keep every k-th iterate (0 = endpoints only)");

    CLI::App* audit = app.add_subcommand("audit", "Full diagnostic of a profile");
    add_common(audit, true);
    audit->add_option("--profile", opt.profile_path, "Message profile JSON file")
        ->required()
        ->check(CLI::ExistingFile);
    audit->add_option("--tol", opt.tol, "Equilibrium gain tolerance");
    audit->add_option("--deviations", opt.deviations, "Sampled deviations per user");
    audit->add_flag("--strict", opt.strict,
                    "Exit nonzero unless all audited properties hold");

    CLI::App* gen = app.add_subcommand("gen", "Generate a random scenario file");
    add_common(gen, false);
    gen->add_option("--n", opt.n, "Number of users")->check(CLI::Range(3, 10000));
    gen->add_option("--density", opt.density, "Edge probability")
        ->check(CLI::Range(0.0, 1.0));
    gen->add_option("--family", opt.family, "Utility family")
        ->transform(CLI::CheckedTransformer(family_names, CLI::ignore_case));
    gen->add_option("--policy", opt.policy, "Cyclic index policy")
        ->transform(CLI::CheckedTransformer(policy_names, CLI::ignore_case));

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("lgm");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (app.got_subcommand(solve)) return cmd_solve(opt);
        if (app.got_subcommand(construct)) return cmd_construct_ne(opt);
        if (app.got_subcommand(verify)) return cmd_verify(opt);
        if (app.got_subcommand(dynamics)) return cmd_dynamics(opt);
        if (app.got_subcommand(audit)) return cmd_audit(opt);
        if (app.got_subcommand(gen)) return cmd_gen(opt);
    } catch (const std::exception& e) {
        const json failure = {{"error", {{"type", error_name(e)}, {"message", e.what()}}}};
        std::fprintf(stderr, "%s\n", failure.dump().c_str());
        return 2;
    }
    return 2;  // unreachable with require_subcommand(1)
}

}  // namespace lgm
