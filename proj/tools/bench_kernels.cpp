#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <vector>

#include <CLI11.hpp>

#include "lgm/gen.hpp"
#include "lgm/mechanism.hpp"
#include "lgm/network.hpp"
#include "lgm/rng.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

using Clock = std::chrono::steady_clock;

double time_ms(const std::function<void()>& body) {
    const auto start = Clock::now();
    body();
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

}  // namespace

int main(int argc, char** argv) {
    int n = 1200;
    double density = 0.05;
    int reps = 5;
    std::uint64_t seed = 0;
    CLI::App app{"Outcome-kernel benchmark: parallel vs. serial reference"};
    app.add_option("--n", n, "Number of users")->check(CLI::Range(3, 200000));
    app.add_option("--density", density, "Edge probability")->check(CLI::Range(0.0, 1.0));
    app.add_option("--reps", reps, "Timed repetitions")->check(CLI::Range(1, 1000));
    app.add_option("--seed", seed, "Instance seed");
    CLI11_PARSE(app, argc, argv);

    const auto adjacency = lgm::generate_adjacency(n, density, seed);
    const lgm::NetworkTopology topology = lgm::build_topology(adjacency);
    const lgm::CyclicIndexTable table = lgm::assign_cyclic_indices(topology);

    lgm::MessageProfile profile = lgm::zero_profile(topology);
    lgm::Rng rng(lgm::Rng::derive(seed, 99));
    std::size_t message_doubles = 0;
    for (auto& message : profile) {
        for (double& a : message.actions) a = rng.uniform(-2.0, 2.0);
        for (double& p : message.prices) p = rng.uniform(0.0, 2.0);
        message_doubles += message.actions.size() + message.prices.size();
    }

#ifdef _OPENMP
    std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP: not enabled in this build\n");
#endif
    std::printf("instance: n=%d, density=%.3f, %zu proposal doubles\n\n", n, density,
                message_doubles);

    // Warm-up and agreement check first: the parallel kernel must reproduce
    // the serial reference bit for bit (identical per-user arithmetic).
    lgm::Allocation parallel_out = lgm::compute_outcome(profile, topology, table);
    lgm::Allocation serial_out = lgm::compute_outcome_serial(profile, topology, table);
    bool identical = parallel_out.actions == serial_out.actions &&
                     parallel_out.taxes == serial_out.taxes &&
                     parallel_out.prices == serial_out.prices;
    if (!identical) {
        std::printf("FAIL: parallel and serial outcomes differ\n");
        return 1;
    }

    std::vector<double> t_parallel(reps), t_serial(reps);
    for (int r = 0; r < reps; ++r) {
        t_parallel[r] =
            time_ms([&] { parallel_out = lgm::compute_outcome(profile, topology, table); });
        t_serial[r] = time_ms(
            [&] { serial_out = lgm::compute_outcome_serial(profile, topology, table); });
    }
    const auto best = [](const std::vector<double>& t) {
        return *std::min_element(t.begin(), t.end());
    };
    const auto mean = [](const std::vector<double>& t) {
        double s = 0.0;
        for (double v : t) s += v;
        return s / static_cast<double>(t.size());
    };

    std::printf("%-10s %12s %12s\n", "kernel", "best (ms)", "mean (ms)");
    std::printf("%-10s %12.3f %12.3f\n", "parallel", best(t_parallel), mean(t_parallel));
    std::printf("%-10s %12.3f %12.3f\n", "serial", best(t_serial), mean(t_serial));
    std::printf("\nspeedup (serial best / parallel best): %.2fx\n",
                best(t_serial) / best(t_parallel));
    std::printf("agreement: bit-identical\n");
    return 0;
}
