#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "randprod/cli.hpp"

namespace {

// Shared per-subcommand options; flags override the config file.
struct CommonOpts {
    std::string config_path;
    std::string scenario;
    std::string output;
    std::string schedule;
    std::string x0;
    std::int64_t max_iters = -1;
    double cauchy_tol = -1.0;
    std::uint64_t seed = 0;
    bool seed_set = false;
    bool exact = false;
    int max_word_len = -1;
    std::int64_t budget = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("-c,--config", opts.config_path,
                    "JSON config file; '-' reads standard input");
    cmd->add_option("-s,--scenario", opts.scenario, "builtin scenario name or operator file");
    cmd->add_option("-o,--output", opts.output, "output directory");
    cmd->add_option("--schedule", opts.schedule,
                    "schedule: round_robin | seeded_uniform | scripted:1,2,...");
    cmd->add_option("--x0", opts.x0, "start vector '0,1' or random / random(N)");
    cmd->add_option("--max-iters", opts.max_iters, "iteration budget");
    cmd->add_option("--tol", opts.cauchy_tol, "Cauchy increment tolerance");
    cmd->add_option_function<std::uint64_t>(
        "--seed", [&opts](const std::uint64_t& v) { opts.seed = v; opts.seed_set = true; },
        "run seed (schedules, start vectors, searches)");
    cmd->add_flag("--exact", opts.exact, "exact rational arithmetic (l1/l_inf scenarios)");
    cmd->add_option("--max-word-len", opts.max_word_len, "falsifier word length cap");
    cmd->add_option("--budget", opts.budget, "falsifier word budget");
}

std::string read_config_text(const std::string& path) {
    if (path == "-") {
        std::stringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json schedule_from_flag(const std::string& text) {
    if (text == "round_robin" || text == "seeded_uniform")
        return {{"policy", text}};
    if (text.rfind("scripted:", 0) == 0) {
        std::vector<int> script;
        std::stringstream ss(text.substr(9));
        std::string item;
        while (std::getline(ss, item, ',')) script.push_back(std::stoi(item));
        return {{"policy", "scripted"}, {"script", script}};
    }
    throw std::runtime_error("unrecognized --schedule '" + text + "'");
}

nlohmann::json x0_from_flag(const std::string& text) {
    if (text == "random" || text.rfind("random(", 0) == 0) return text;
    std::vector<double> coords;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) coords.push_back(std::stod(item));
    return coords;
}

int run_mode(const std::string& mode, const CommonOpts& opts) {
    nlohmann::json root;
    if (!opts.config_path.empty()) {
        root = nlohmann::json::parse(read_config_text(opts.config_path));
        if (root.contains("mode") && root["mode"].get<std::string>() != mode)
            throw std::runtime_error("config mode '" + root["mode"].get<std::string>() +
                                     "' does not match the '" + mode + "' subcommand");
    }
    root["mode"] = mode;
    if (!opts.scenario.empty()) root["scenario"] = opts.scenario;
    if (!opts.output.empty()) root["output"] = opts.output;
    if (!opts.schedule.empty()) root["schedule"] = schedule_from_flag(opts.schedule);
    if (!opts.x0.empty()) root["x0"] = x0_from_flag(opts.x0);
    if (opts.max_iters > 0) root["stop"]["max_iters"] = opts.max_iters;
    if (opts.cauchy_tol > 0.0) root["stop"]["cauchy_tol"] = opts.cauchy_tol;
    if (opts.seed_set) root["seed"] = opts.seed;
    if (opts.exact) root["exact"] = true;
    if (opts.max_word_len > 0) root["falsify"]["max_word_len"] = opts.max_word_len;
    if (opts.budget > 0) root["falsify"]["budget"] = opts.budget;

    const randprod::RunConfig cfg = randprod::parse_config(root.dump());
    return randprod::run_cli(cfg);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"random products of linear contractions on finite-dimensional l_p spaces"};
    app.require_subcommand(1);

    const char* modes[] = {"run", "check", "falsify", "catalog", "certificate"};
    const char* descriptions[] = {
        "iterate a product schedule and emit trace.csv + summary.json",
        "contraction / norm-rigidity / support-invariance verdicts per operator",
        "hunt counterexamples to the semigroup norm-rigidity condition",
        "list the builtin scenario catalog",
        "exact certificate: no contraction projection commutes with both "
        "example1 generators"};

    CommonOpts opts[5];
    for (int i = 0; i < 5; ++i) add_common(app.add_subcommand(modes[i], descriptions[i]), opts[i]);

    CLI11_PARSE(app, argc, argv);

    try {
        for (int i = 0; i < 5; ++i)
            if (app.get_subcommand(static_cast<std::size_t>(i))->parsed())
                return run_mode(modes[i], opts[i]);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
