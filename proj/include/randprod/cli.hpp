#ifndef RANDPROD_CLI_HPP
#define RANDPROD_CLI_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "randprod/engine.hpp"
#include "randprod/scenarios.hpp"

namespace randprod {

struct X0Spec {
    bool random = false;
    std::optional<std::uint64_t> random_seed;  // "random(N)"; otherwise the run seed
    Vec literal;

    bool operator==(const X0Spec&) const = default;
};

struct FalsifyParams {
    int max_word_len = 4;
    std::int64_t budget = 200;

    bool operator==(const FalsifyParams&) const = default;
};

// Fully validated run configuration with defaults applied. See README for the
// JSON schema.
struct RunConfig {
    std::string mode;      // run | check | falsify | catalog | certificate
    std::string scenario;  // builtin name or operator-file path
    ScenarioParams params;
    SchedulePolicy schedule;
    X0Spec x0;
    StopCriteria stop;
    int snapshot_stride = 100;
    std::string output;  // empty: RANDPROD_OUTPUT_DIR or "."
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool exact = false;
    FalsifyParams falsify;

    bool operator==(const RunConfig&) const = default;
};

RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& config);

// Executes one mode. 0 on success, 1 on validation or I/O errors, 2 when a
// run-mode audit invariant is violated.
int run_cli(const RunConfig& config);

// Operator file payload ({"space": {...}, "operators": [...], "x0": [...]}).
struct OperatorFile {
    NormSpec space;
    std::vector<std::string> names;
    std::vector<Mat> matrices;
    std::vector<RatMat> rational_matrices;  // populated when every entry is exact
    bool rational_ok = false;
    std::optional<Vec> x0;
};

OperatorFile load_operator_file(const std::string& path);

std::string format_double(double x);  // fixed %.17g used by every writer

}  // namespace randprod

#endif
