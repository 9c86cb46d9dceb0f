// Serial-vs-OpenMP throughput comparison for the data-parallel kernels, with
// an equality check on every pair (the parallel kernels must be bit-identical
// to their serial references).

#include <chrono>
#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "randprod/conditions.hpp"
#include "randprod/engine.hpp"
#include "randprod/kernels.hpp"
#include "randprod/scenarios.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void report(const char* name, double serial_s, double parallel_s, bool equal) {
    std::printf("%-28s serial %8.3fs   parallel %8.3fs   speedup %5.2fx   %s\n", name, serial_s,
                parallel_s, serial_s / parallel_s, equal ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"randprod kernel benchmark"};
    std::int64_t samples = 400000;
    int trials = 16;
    int dim = 20;
    app.add_option("--samples", samples, "sphere samples");
    app.add_option("--trials", trials, "order-sensitivity trials");
    app.add_option("--dim", dim, "space dimension");
    CLI11_PARSE(app, argc, argv);

#ifdef _OPENMP
    std::printf("OpenMP enabled, max threads %d\n", omp_get_max_threads());
#else
    std::printf("OpenMP disabled, parallel kernels run serially\n");
#endif

    using namespace randprod;
    bool all_equal = true;

    {
        const Scenario s = make_scenario("von_neumann_2proj", {.dim = dim, .seed = 3});
        const Mat& t = s.ops.front().matrix;

        auto t0 = std::chrono::steady_clock::now();
        const SphereMax a = sphere_sample_max_serial(t, s.space, samples, 11);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const SphereMax b = sphere_sample_max(t, s.space, samples, 11);
        const double tp = seconds_since(t0);
        const bool equal = a.value == b.value && a.arg_index == b.arg_index && a.arg == b.arg;
        all_equal = all_equal && equal;
        report("sphere_sample_max", ts, tp, equal);
    }

    {
        const NormSpec space = NormSpec::lp(dim, 3.0);
        const Scenario s = make_scenario("von_neumann_2proj", {.dim = dim, .seed = 3});
        const Mat& t = s.ops.front().matrix;

        auto t0 = std::chrono::steady_clock::now();
        const AscentBest a = pnorm_ascent_max_serial(t, space, 64, 11);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const AscentBest b = pnorm_ascent_max(t, space, 64, 11);
        const double tp = seconds_since(t0);
        const bool equal = a.value == b.value && a.start == b.start && a.x == b.x;
        all_equal = all_equal && equal;
        report("pnorm_ascent_max", ts, tp, equal);
    }

    {
        const Scenario s = make_scenario("random_projections", {.dim = dim, .seed = 5});
        StopCriteria stop;
        stop.max_iters = 4000;

        auto t0 = std::chrono::steady_clock::now();
        const OrderSensitivityReport a =
            order_sensitivity(s.ops, s.default_x0, trials, 21, stop, Exec::serial);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const OrderSensitivityReport b =
            order_sensitivity(s.ops, s.default_x0, trials, 21, stop, Exec::parallel);
        const double tp = seconds_since(t0);
        const bool equal = a.limits == b.limits && a.diameter == b.diameter;
        all_equal = all_equal && equal;
        report("order_sensitivity", ts, tp, equal);
    }

    {
        const Scenario s = make_scenario("example1");

        auto t0 = std::chrono::steady_clock::now();
        const FalsifierReport a = semigroup_w_falsifier(s.ops, 4, 30, 7, Exec::serial);
        const double ts = seconds_since(t0);
        t0 = std::chrono::steady_clock::now();
        const FalsifierReport b = semigroup_w_falsifier(s.ops, 4, 30, 7, Exec::parallel);
        const double tp = seconds_since(t0);
        const bool equal = a.best_word == b.best_word && a.norm_gap == b.norm_gap &&
                           a.displacement == b.displacement && a.best_x == b.best_x;
        all_equal = all_equal && equal;
        report("semigroup_w_falsifier", ts, tp, equal);
    }

    return all_equal ? 0 : 1;
}
