#include "randprod/cli.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "randprod/conditions.hpp"
#include "randprod/rng.hpp"

namespace randprod {

namespace {

using nlohmann::json;

constexpr std::uint64_t kScheduleStream = 1;
constexpr std::uint64_t kX0Stream = 0xF00D;

void collect_unknown_keys(const json& obj, const std::vector<std::string>& allowed,
                          const std::string& prefix, std::vector<std::string>& unknown) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool ok = false;
        for (const std::string& k : allowed)
            if (it.key() == k) { ok = true; break; }
        if (!ok) unknown.push_back(prefix.empty() ? it.key() : prefix + "." + it.key());
    }
}

double parse_exponent(const json& v, const std::string& where) {
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "inf" || s == "Inf" || s == "infinity") return NormSpec::inf;
        throw std::invalid_argument(where + ": exponent must be a number >= 1 or \"inf\"");
    }
    if (!v.is_number()) throw std::invalid_argument(where + ": exponent must be a number or \"inf\"");
    const double p = v.get<double>();
    if (!(p >= 1.0)) throw std::invalid_argument(where + ": exponent must satisfy p >= 1");
    return p;
}

json exponent_to_json(double p) {
    if (p == NormSpec::inf) return json("inf");
    return json(p);
}

int builtin_default_dim(const std::string& name, const ScenarioParams& params) {
    if (params.dim) return *params.dim;
    if (name == "example1" || name == "rotation") return 2;
    if (name == "von_neumann_2proj") return 20;
    if (name == "random_projections") return 10;
    if (name == "diagonal_l1" || name == "diagonal_linf") return 6;
    if (name == "diagonal_l2") return 8;
    if (name == "diagonal_lp3") return 5;
    return -1;
}

SchedulePolicy parse_schedule(const json& obj, std::vector<std::string>& unknown) {
    collect_unknown_keys(obj, {"policy", "script", "scripted", "fallback", "transition"},
                         "schedule", unknown);
    SchedulePolicy policy;
    bool kind_set = false;

    if (obj.contains("scripted")) {
        if (!obj["scripted"].is_array())
            throw std::invalid_argument("schedule.scripted must be an index array");
        policy.kind = SchedulePolicy::Kind::scripted;
        policy.script = obj["scripted"].get<std::vector<int>>();
        policy.fallback = SchedulePolicy::Fallback::round_robin;
        kind_set = true;
    }
    if (obj.contains("policy")) {
        const std::string name = obj["policy"].get<std::string>();
        if (name == "seeded_uniform") policy.kind = SchedulePolicy::Kind::seeded_uniform;
        else if (name == "round_robin") policy.kind = SchedulePolicy::Kind::round_robin;
        else if (name == "markov") policy.kind = SchedulePolicy::Kind::markov;
        else if (name == "scripted") {
            policy.kind = SchedulePolicy::Kind::scripted;
            policy.fallback = SchedulePolicy::Fallback::round_robin;
        } else
            throw std::invalid_argument("schedule.policy: unknown policy '" + name + "'");
        kind_set = true;
    }
    if (!kind_set) throw std::invalid_argument("schedule: missing policy");

    if (obj.contains("script")) {
        if (policy.kind != SchedulePolicy::Kind::scripted)
            throw std::invalid_argument("schedule.script requires the scripted policy");
        policy.script = obj["script"].get<std::vector<int>>();
    }
    if (obj.contains("fallback")) {
        const std::string f = obj["fallback"].get<std::string>();
        if (f == "none") policy.fallback = SchedulePolicy::Fallback::none;
        else if (f == "round_robin") policy.fallback = SchedulePolicy::Fallback::round_robin;
        else if (f == "seeded_uniform") policy.fallback = SchedulePolicy::Fallback::seeded_uniform;
        else throw std::invalid_argument("schedule.fallback: unknown fallback '" + f + "'");
    }
    if (obj.contains("transition")) {
        if (policy.kind != SchedulePolicy::Kind::markov)
            throw std::invalid_argument("schedule.transition requires the markov policy");
        policy.transition = obj["transition"].get<std::vector<std::vector<double>>>();
    }
    if (policy.kind == SchedulePolicy::Kind::markov && policy.transition.empty())
        throw std::invalid_argument("schedule: markov policy needs a transition matrix");
    if (policy.kind == SchedulePolicy::Kind::scripted && policy.script.empty())
        throw std::invalid_argument("schedule: scripted policy needs a nonempty script");
    return policy;
}

bool schedule_is_stochastic(const SchedulePolicy& p) {
    switch (p.kind) {
        case SchedulePolicy::Kind::seeded_uniform:
        case SchedulePolicy::Kind::markov:
            return true;
        case SchedulePolicy::Kind::scripted:
            return p.fallback == SchedulePolicy::Fallback::seeded_uniform;
        case SchedulePolicy::Kind::round_robin:
            return false;
    }
    return false;
}

X0Spec parse_x0(const json& v) {
    X0Spec spec;
    if (v.is_array()) {
        spec.literal = v.get<Vec>();
        for (double x : spec.literal)
            if (!std::isfinite(x)) throw std::invalid_argument("x0: non-finite coordinate");
        return spec;
    }
    if (v.is_string()) {
        const std::string s = v.get<std::string>();
        if (s == "random") {
            spec.random = true;
            return spec;
        }
        if (s.rfind("random(", 0) == 0 && s.back() == ')') {
            spec.random = true;
            spec.random_seed = std::stoull(s.substr(7, s.size() - 8));
            return spec;
        }
    }
    throw std::invalid_argument("x0: expected a coordinate array, \"random\" or \"random(N)\"");
}

}  // namespace

RunConfig parse_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw std::invalid_argument("config: top level must be an object");

    std::vector<std::string> unknown;
    collect_unknown_keys(root,
                         {"mode", "scenario", "scenario_params", "schedule", "x0", "stop",
                          "snapshot_stride", "output", "seed", "exact", "falsify"},
                         "", unknown);

    RunConfig cfg;
    if (!root.contains("mode")) throw std::invalid_argument("config: missing mode");
    cfg.mode = root["mode"].get<std::string>();
    if (cfg.mode != "run" && cfg.mode != "check" && cfg.mode != "falsify" &&
        cfg.mode != "catalog" && cfg.mode != "certificate")
        throw std::invalid_argument("config: unknown mode '" + cfg.mode + "'");

    if (root.contains("scenario")) cfg.scenario = root["scenario"].get<std::string>();

    if (root.contains("scenario_params")) {
        const json& sp = root["scenario_params"];
        collect_unknown_keys(sp, {"dim", "n", "p", "seed"}, "scenario_params", unknown);
        if (sp.contains("dim")) cfg.params.dim = sp["dim"].get<int>();
        if (sp.contains("n")) cfg.params.n = sp["n"].get<int>();
        if (sp.contains("p")) cfg.params.p = parse_exponent(sp["p"], "scenario_params.p");
        if (sp.contains("seed")) cfg.params.seed = sp["seed"].get<std::uint64_t>();
    }

    if (root.contains("schedule")) cfg.schedule = parse_schedule(root["schedule"], unknown);

    if (root.contains("x0")) cfg.x0 = parse_x0(root["x0"]);

    if (root.contains("stop")) {
        const json& st = root["stop"];
        collect_unknown_keys(st, {"max_iters", "cauchy_tol", "cauchy_window", "stagnation_tol"},
                             "stop", unknown);
        if (st.contains("max_iters")) cfg.stop.max_iters = st["max_iters"].get<std::int64_t>();
        if (st.contains("cauchy_tol")) cfg.stop.cauchy_tol = st["cauchy_tol"].get<double>();
        if (st.contains("cauchy_window")) cfg.stop.cauchy_window = st["cauchy_window"].get<int>();
        if (st.contains("stagnation_tol"))
            cfg.stop.stagnation_tol = st["stagnation_tol"].get<double>();
    }

    if (root.contains("snapshot_stride")) cfg.snapshot_stride = root["snapshot_stride"].get<int>();
    if (root.contains("output")) cfg.output = root["output"].get<std::string>();
    if (root.contains("seed")) {
        cfg.seed = root["seed"].get<std::uint64_t>();
        cfg.seed_set = true;
    }
    if (root.contains("exact")) cfg.exact = root["exact"].get<bool>();
    if (root.contains("falsify")) {
        const json& f = root["falsify"];
        collect_unknown_keys(f, {"max_word_len", "budget"}, "falsify", unknown);
        if (f.contains("max_word_len")) cfg.falsify.max_word_len = f["max_word_len"].get<int>();
        if (f.contains("budget")) cfg.falsify.budget = f["budget"].get<std::int64_t>();
    }

    if (!unknown.empty()) {
        std::string msg = "config: unknown keys:";
        for (const std::string& k : unknown) msg += " " + k;
        throw std::invalid_argument(msg);
    }

    // semantic validation
    if (cfg.stop.max_iters < 1) throw std::invalid_argument("stop.max_iters must be >= 1");
    if (!(cfg.stop.cauchy_tol > 0.0)) throw std::invalid_argument("stop.cauchy_tol must be > 0");
    if (cfg.stop.cauchy_window < 1) throw std::invalid_argument("stop.cauchy_window must be >= 1");
    if (cfg.stop.stagnation_tol < 0.0)
        throw std::invalid_argument("stop.stagnation_tol must be >= 0");
    if (cfg.snapshot_stride < 1) throw std::invalid_argument("snapshot_stride must be >= 1");
    if (cfg.falsify.max_word_len < 1)
        throw std::invalid_argument("falsify.max_word_len must be >= 1");
    if (cfg.falsify.budget < 1) throw std::invalid_argument("falsify.budget must be >= 1");

    const bool needs_scenario =
        cfg.mode == "run" || cfg.mode == "check" || cfg.mode == "falsify";
    if (needs_scenario) {
        if (cfg.scenario.empty()) throw std::invalid_argument("config: missing scenario");
        if (!is_builtin_scenario(cfg.scenario) && !std::filesystem::exists(cfg.scenario))
            throw std::invalid_argument("config: unknown scenario '" + cfg.scenario + "'");
    }
    if (cfg.mode == "certificate" && !cfg.scenario.empty() && cfg.scenario != "example1")
        throw std::invalid_argument("config: the impossibility certificate is example1-specific");

    if (!cfg.x0.literal.empty() && is_builtin_scenario(cfg.scenario)) {
        const int dim = builtin_default_dim(cfg.scenario, cfg.params);
        if (dim > 0 && static_cast<int>(cfg.x0.literal.size()) != dim)
            throw std::invalid_argument("config: x0 dimension does not match the scenario");
    }

    const bool stochastic = (cfg.mode == "run" && schedule_is_stochastic(cfg.schedule)) ||
                            (cfg.x0.random && !cfg.x0.random_seed) || cfg.mode == "falsify";
    if (stochastic && !cfg.seed_set)
        throw std::invalid_argument("config: a stochastic policy was chosen but no seed is set");

    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    json root;
    root["mode"] = cfg.mode;
    if (!cfg.scenario.empty()) root["scenario"] = cfg.scenario;

    if (cfg.params.dim || cfg.params.n || cfg.params.p || cfg.params.seed) {
        json sp;
        if (cfg.params.dim) sp["dim"] = *cfg.params.dim;
        if (cfg.params.n) sp["n"] = *cfg.params.n;
        if (cfg.params.p) sp["p"] = exponent_to_json(*cfg.params.p);
        if (cfg.params.seed) sp["seed"] = *cfg.params.seed;
        root["scenario_params"] = sp;
    }

    json sched;
    switch (cfg.schedule.kind) {
        case SchedulePolicy::Kind::seeded_uniform: sched["policy"] = "seeded_uniform"; break;
        case SchedulePolicy::Kind::round_robin: sched["policy"] = "round_robin"; break;
        case SchedulePolicy::Kind::markov:
            sched["policy"] = "markov";
            sched["transition"] = cfg.schedule.transition;
            break;
        case SchedulePolicy::Kind::scripted:
            sched["policy"] = "scripted";
            sched["script"] = cfg.schedule.script;
            switch (cfg.schedule.fallback) {
                case SchedulePolicy::Fallback::none: sched["fallback"] = "none"; break;
                case SchedulePolicy::Fallback::round_robin: sched["fallback"] = "round_robin"; break;
                case SchedulePolicy::Fallback::seeded_uniform:
                    sched["fallback"] = "seeded_uniform";
                    break;
            }
            break;
    }
    root["schedule"] = sched;

    if (cfg.x0.random) {
        root["x0"] = cfg.x0.random_seed
                         ? "random(" + std::to_string(*cfg.x0.random_seed) + ")"
                         : std::string("random");
    } else if (!cfg.x0.literal.empty()) {
        root["x0"] = cfg.x0.literal;
    }

    root["stop"] = {{"max_iters", cfg.stop.max_iters},
                    {"cauchy_tol", cfg.stop.cauchy_tol},
                    {"cauchy_window", cfg.stop.cauchy_window},
                    {"stagnation_tol", cfg.stop.stagnation_tol}};
    root["snapshot_stride"] = cfg.snapshot_stride;
    if (!cfg.output.empty()) root["output"] = cfg.output;
    if (cfg.seed_set) root["seed"] = cfg.seed;
    if (cfg.exact) root["exact"] = true;
    root["falsify"] = {{"max_word_len", cfg.falsify.max_word_len},
                       {"budget", cfg.falsify.budget}};
    return root.dump(2) + "\n";
}

std::string format_double(double x) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

OperatorFile load_operator_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open operator file '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();

    json root;
    try {
        root = json::parse(ss.str());
    } catch (const json::exception& e) {
        throw std::invalid_argument("operator file: not valid JSON: " + std::string(e.what()));
    }

    std::vector<std::string> unknown;
    collect_unknown_keys(root, {"space", "operators", "x0"}, "", unknown);
    if (!root.contains("space") || !root.contains("operators"))
        throw std::invalid_argument("operator file: needs \"space\" and \"operators\"");
    collect_unknown_keys(root["space"], {"dim", "p"}, "space", unknown);
    if (!unknown.empty()) {
        std::string msg = "operator file: unknown keys:";
        for (const std::string& k : unknown) msg += " " + k;
        throw std::invalid_argument(msg);
    }

    OperatorFile file;
    const int dim = root["space"].at("dim").get<int>();
    const double p = parse_exponent(root["space"].at("p"), "space.p");
    file.space = NormSpec::make(dim, p);
    file.rational_ok = true;

    for (const json& op : root["operators"]) {
        std::vector<std::string> opk;
        collect_unknown_keys(op, {"name", "matrix"}, "operators[]", opk);
        if (!opk.empty())
            throw std::invalid_argument("operator file: unknown key " + opk.front());
        file.names.push_back(op.contains("name")
                                 ? op["name"].get<std::string>()
                                 : "T" + std::to_string(file.names.size() + 1));
        const json& rows = op.at("matrix");
        if (static_cast<int>(rows.size()) != dim)
            throw std::invalid_argument("operator file: matrix row count != dim");
        Mat m(dim);
        RatMat rm(dim);
        for (int i = 0; i < dim; ++i) {
            if (static_cast<int>(rows[i].size()) != dim)
                throw std::invalid_argument("operator file: matrix column count != dim");
            for (int j = 0; j < dim; ++j) {
                const json& cell = rows[i][j];
                if (cell.is_string()) {
                    const Rational r = Rational::parse(cell.get<std::string>());
                    rm(i, j) = r;
                    m(i, j) = r.value();
                } else if (cell.is_number_integer()) {
                    rm(i, j) = Rational(cell.get<long long>());
                    m(i, j) = static_cast<double>(cell.get<long long>());
                } else if (cell.is_number()) {
                    m(i, j) = cell.get<double>();
                    file.rational_ok = false;
                } else {
                    throw std::invalid_argument("operator file: matrix entries must be numbers "
                                                "or rational strings");
                }
            }
        }
        file.matrices.push_back(std::move(m));
        file.rational_matrices.push_back(std::move(rm));
    }
    if (file.matrices.empty()) throw std::invalid_argument("operator file: no operators");

    if (root.contains("x0")) {
        Vec x0 = root["x0"].get<Vec>();
        if (static_cast<int>(x0.size()) != dim)
            throw std::invalid_argument("operator file: x0 dimension != dim");
        file.x0 = std::move(x0);
    }
    return file;
}

namespace {

struct ResolvedScenario {
    std::string label;
    Scenario scenario;
    std::vector<std::string> op_names;
    bool exact_available = false;
    std::vector<RatMat> exact_ops;
    RatVec exact_x0;
};

ResolvedScenario resolve_scenario(const RunConfig& cfg) {
    ResolvedScenario out;
    out.label = cfg.scenario;
    if (is_builtin_scenario(cfg.scenario)) {
        out.scenario = make_scenario(cfg.scenario, cfg.params);
        for (std::size_t i = 0; i < out.scenario.ops.size(); ++i)
            out.op_names.push_back("T" + std::to_string(i + 1));
        if (cfg.scenario == "example1") {
            const Example1Exact e = example1_exact();
            out.exact_ops = e.ops;
            out.exact_x0 = e.default_x0;
            out.exact_available = true;
        }
        return out;
    }
    const OperatorFile file = load_operator_file(cfg.scenario);
    out.scenario.name = cfg.scenario;
    out.op_names = file.names;
    out.scenario.space = file.space;
    for (const Mat& m : file.matrices)
        out.scenario.ops.push_back(LinearOperator::make(m, file.space));
    out.scenario.default_x0 = file.x0.value_or(Vec(file.space.dim, 0.0));
    if (file.rational_ok && (file.space.p == 1.0 || file.space.is_inf())) {
        out.exact_available = true;
        out.exact_ops = file.rational_matrices;
        if (file.x0) {
            for (double x : *file.x0) {
                if (x != std::floor(x))
                    throw std::invalid_argument("exact mode: x0 must have integer coordinates "
                                                "in operator files");
                out.exact_x0.push_back(Rational(static_cast<long long>(x)));
            }
        } else {
            out.exact_x0.assign(file.space.dim, Rational(0));
        }
    }
    return out;
}

Vec resolve_x0(const RunConfig& cfg, const ResolvedScenario& rs) {
    if (cfg.x0.random) {
        const std::uint64_t s = cfg.x0.random_seed.value_or(derive_stream(cfg.seed, kX0Stream));
        std::mt19937_64 eng = make_engine(s, 0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        Vec v(rs.scenario.space.dim);
        for (double& x : v) x = gauss(eng);
        return v;
    }
    if (!cfg.x0.literal.empty()) {
        if (static_cast<int>(cfg.x0.literal.size()) != rs.scenario.space.dim)
            throw std::invalid_argument("x0 dimension does not match the scenario space");
        return cfg.x0.literal;
    }
    return rs.scenario.default_x0;
}

SchedulePolicy runtime_schedule(const RunConfig& cfg) {
    SchedulePolicy p = cfg.schedule;
    p.seed = derive_stream(cfg.seed, kScheduleStream);
    return p;
}

std::string resolve_output_dir(const RunConfig& cfg) {
    if (!cfg.output.empty()) return cfg.output;
    if (const char* env = std::getenv("RANDPROD_OUTPUT_DIR"); env && *env) return env;
    return ".";
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    if (!out) throw std::runtime_error("write failed for '" + path.string() + "'");
}

json verdict_to_json(const WVerdict& v) {
    json out;
    switch (v.status) {
        case WStatus::holds: out["status"] = "holds"; break;
        case WStatus::fails: out["status"] = "fails"; break;
        case WStatus::inconclusive: out["status"] = "inconclusive"; break;
    }
    switch (v.method) {
        case WMethod::algebraic_p2: out["method"] = "algebraic_p2"; break;
        case WMethod::sign_enumeration: out["method"] = "sign_enumeration"; break;
        case WMethod::numeric_search: out["method"] = "numeric_search"; break;
    }
    out["gap"] = v.gap;
    if (v.witness) out["witness"] = *v.witness;
    return out;
}

int mode_run_exact(const RunConfig& cfg, const ResolvedScenario& rs, const std::string& outdir) {
    if (!rs.exact_available)
        throw std::invalid_argument("exact mode needs rational operators on an l1 or l_inf space");
    const ExactNorm which = rs.scenario.space.is_inf() ? ExactNorm::linf : ExactNorm::l1;

    RatVec x0 = rs.exact_x0;
    if (!cfg.x0.literal.empty()) {
        x0.clear();
        for (double c : cfg.x0.literal) {
            if (c != std::floor(c))
                throw std::invalid_argument("exact mode: x0 coordinates must be integers");
            x0.push_back(Rational(static_cast<long long>(c)));
        }
    } else if (cfg.x0.random) {
        throw std::invalid_argument("exact mode: random x0 is not supported");
    }

    ScheduleStream stream({runtime_schedule(cfg), static_cast<int>(rs.exact_ops.size())});
    std::vector<int> indices;
    indices.reserve(static_cast<std::size_t>(std::min<std::int64_t>(cfg.stop.max_iters, 1 << 20)));
    for (std::int64_t n = 0; n < cfg.stop.max_iters; ++n) {
        const int idx = stream.next();
        if (idx == 0) break;
        indices.push_back(idx);
    }
    const bool exhausted = static_cast<std::int64_t>(indices.size()) < cfg.stop.max_iters;

    const ExactTrace trace =
        exact_iterate(rs.exact_ops, which, indices, x0, cfg.stop.cauchy_window);

    std::string csv = "n,r_n,norm,increment\n";
    for (const ExactTraceStep& s : trace.steps)
        csv += std::to_string(s.n) + "," + std::to_string(s.r) + "," + s.norm.to_string() + "," +
               s.increment.to_string() + "\n";
    write_file(std::filesystem::path(outdir) / "trace.csv", csv);

    const Rational audit = exact_monotonicity_audit(trace);
    bool in_fixed = true;
    for (const RatMat& op : rs.exact_ops) {
        const RatVec res = rat_sub(rat_apply(op, trace.final_x), trace.final_x);
        if (!rat_norm(res, which).is_zero()) in_fixed = false;
    }
    const Vec limit_d = rat_to_double(trace.final_x);
    const double dist = common_fixed_space(rs.scenario.ops).distance(limit_d);

    json summary;
    summary["scenario"] = rs.label;
    summary["seed"] = cfg.seed;
    summary["stop_reason"] = trace.converged ? "converged" : "budget";
    summary["iters"] = trace.steps.size();
    json limit = json::array();
    for (const Rational& c : trace.final_x) limit.push_back(c.to_string());
    summary["limit"] = limit;
    summary["monotonicity_max_violation"] = audit.to_string();
    summary["limit_in_fixed_set"] = in_fixed;
    summary["distance_to_fixed_set"] = dist;
    if (exhausted)
        std::cerr << "warning: scripted schedule exhausted before the iteration budget\n";

    const std::string text = summary.dump(2) + "\n";
    write_file(std::filesystem::path(outdir) / "summary.json", text);
    std::cout << text;
    return audit > Rational(0) ? 2 : 0;
}

int mode_run(const RunConfig& cfg, const std::string& outdir) {
    const ResolvedScenario rs = resolve_scenario(cfg);
    if (cfg.exact) return mode_run_exact(cfg, rs, outdir);

    const Vec x0 = resolve_x0(cfg, rs);
    const WordSchedule schedule{runtime_schedule(cfg), static_cast<int>(rs.scenario.ops.size())};
    const Trace trace = iterate(rs.scenario.ops, schedule, x0, cfg.stop, cfg.snapshot_stride);

    std::string csv = "n,r_n,norm,increment\n";
    for (const TraceStep& s : trace.steps)
        csv += std::to_string(s.n) + "," + std::to_string(s.r) + "," + format_double(s.norm) +
               "," + format_double(s.increment) + "\n";
    write_file(std::filesystem::path(outdir) / "trace.csv", csv);

    const double audit = monotonicity_audit(trace);
    const LimitReport limit_report = classify_limit(trace.final_x, rs.scenario.ops, 1e-8);

    json summary;
    summary["scenario"] = rs.label;
    summary["seed"] = cfg.seed;
    summary["stop_reason"] = to_string(trace.stop_reason);
    summary["iters"] = trace.steps.size();
    summary["limit"] = trace.final_x;
    summary["monotonicity_max_violation"] = audit;
    summary["limit_in_fixed_set"] = limit_report.in_common_fixed_set;
    summary["distance_to_fixed_set"] = limit_report.distance;
    if (trace.schedule_exhausted)
        std::cerr << "warning: scripted schedule exhausted before convergence\n";

    const std::string text = summary.dump(2) + "\n";
    write_file(std::filesystem::path(outdir) / "summary.json", text);
    std::cout << text;
    return audit > 1e-12 ? 2 : 0;
}

int mode_check(const RunConfig& cfg, const std::string& outdir) {
    const ResolvedScenario rs = resolve_scenario(cfg);
    const Scenario& sc = rs.scenario;

    json report;
    report["scenario"] = rs.label;
    report["space"] = {{"dim", sc.space.dim}, {"p", exponent_to_json(sc.space.p)}};

    bool all_contractions = true;
    for (const LinearOperator& t : sc.ops)
        all_contractions = all_contractions && is_contraction(t).kind == ContractionKind::yes;

    std::vector<Vec> fixed_basis;
    if (all_contractions) {
        const Subspace y = common_fixed_space(sc.ops);
        fixed_basis = y.basis;
        report["common_fixed_dim"] = y.dim();
    }

    json ops = json::array();
    for (std::size_t i = 0; i < sc.ops.size(); ++i) {
        const LinearOperator& t = sc.ops[i];
        json entry;
        entry["name"] = i < rs.op_names.size() ? rs.op_names[i] : "T" + std::to_string(i + 1);

        const ContractionVerdict cv = is_contraction(t);
        json cj;
        cj["verdict"] = cv.kind == ContractionKind::yes
                            ? "yes"
                            : (cv.kind == ContractionKind::no ? "no" : "unknown");
        cj["lower"] = cv.bracket.lower;
        cj["upper"] = cv.bracket.upper;
        if (cv.witness) cj["witness"] = *cv.witness;
        entry["contraction"] = cj;

        if (cv.kind == ContractionKind::yes) {
            entry["w_prime"] = verdict_to_json(check_w_prime(t));
            entry["adjoint_w_prime"] = verdict_to_json(check_w_prime(adjoint(t)));
            json inv = json::array();
            for (std::size_t yi = 0; yi < fixed_basis.size(); ++yi) {
                const SupportInvarianceReport r =
                    adjoint_support_invariance(t, fixed_basis[yi]);
                inv.push_back({{"y_index", yi},
                               {"face_preserved", r.face_preserved},
                               {"pointwise_fixed", r.pointwise_fixed}});
            }
            entry["support_invariance"] = inv;
        } else {
            entry["w_prime"] = {{"status", "skipped_not_contraction"}};
            entry["adjoint_w_prime"] = {{"status", "skipped_not_contraction"}};
        }
        ops.push_back(entry);
    }
    report["operators"] = ops;

    const std::string text = report.dump(2) + "\n";
    write_file(std::filesystem::path(outdir) / "check.json", text);
    std::cout << text;
    return 0;
}

int mode_falsify(const RunConfig& cfg, const std::string& outdir) {
    const ResolvedScenario rs = resolve_scenario(cfg);
    const FalsifierReport r = semigroup_w_falsifier(rs.scenario.ops, cfg.falsify.max_word_len,
                                                    cfg.falsify.budget, cfg.seed);
    json out;
    out["scenario"] = rs.label;
    out["seed"] = cfg.seed;
    out["max_word_len"] = cfg.falsify.max_word_len;
    out["budget"] = cfg.falsify.budget;
    out["best_word"] = r.best_word;
    out["best_x"] = r.best_x;
    out["norm_gap"] = r.norm_gap;
    out["displacement"] = r.displacement;
    out["verdict_hint"] = r.verdict_hint == FalsifierHint::candidate_violation
                              ? "candidate_violation"
                              : "no_violation_found";

    const std::string text = out.dump(2) + "\n";
    write_file(std::filesystem::path(outdir) / "falsify.json", text);
    std::cout << text;
    return 0;
}

int mode_certificate(const std::string& outdir) {
    const ImpossibilityCertificate cert = example1_no_commuting_projection();
    json out;
    json constraints = json::array();
    for (const auto& c : cert.constraints)
        constraints.push_back({{"generator", c.generator}, {"beta", c.beta.to_string()}});
    out["constraints"] = constraints;
    out["contraction_bound"] = cert.contraction_bound.to_string();
    out["consistent"] = cert.consistent;
    out["explanation"] = cert.explanation;

    const std::string text = out.dump(2) + "\n";
    write_file(std::filesystem::path(outdir) / "certificate.json", text);
    std::cout << text;
    return 0;
}

int mode_catalog(const std::string& outdir) {
    json out = json::array();
    for (const Scenario& s : catalog()) {
        json e;
        e["name"] = s.name;
        e["dim"] = s.space.dim;
        e["p"] = exponent_to_json(s.space.p);
        e["n_ops"] = s.ops.size();
        if (s.expected.fixed_space_dim) e["fixed_space_dim"] = *s.expected.fixed_space_dim;
        e["hilbert_projection_family"] = s.expected.hilbert_projection_family;
        out.push_back(e);
    }
    const std::string text = out.dump(2) + "\n";
    write_file(std::filesystem::path(outdir) / "catalog.json", text);
    std::cout << text;
    return 0;
}

}  // namespace

int run_cli(const RunConfig& cfg) {
    try {
        const std::string outdir = resolve_output_dir(cfg);
        if (cfg.mode == "run") return mode_run(cfg, outdir);
        if (cfg.mode == "check") return mode_check(cfg, outdir);
        if (cfg.mode == "falsify") return mode_falsify(cfg, outdir);
        if (cfg.mode == "certificate") return mode_certificate(outdir);
        if (cfg.mode == "catalog") return mode_catalog(outdir);
        std::cerr << "error: unknown mode '" << cfg.mode << "'\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace randprod
