#include "randprod/engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "randprod/rng.hpp"

namespace randprod {

SchedulePolicy SchedulePolicy::uniform(std::uint64_t seed) {
    SchedulePolicy p;
    p.kind = Kind::seeded_uniform;
    p.seed = seed;
    return p;
}

SchedulePolicy SchedulePolicy::round_robin() {
    SchedulePolicy p;
    p.kind = Kind::round_robin;
    return p;
}

SchedulePolicy SchedulePolicy::markov(std::vector<std::vector<double>> transition,
                                      std::uint64_t seed) {
    SchedulePolicy p;
    p.kind = Kind::markov;
    p.transition = std::move(transition);
    p.seed = seed;
    return p;
}

SchedulePolicy SchedulePolicy::scripted(std::vector<int> script, Fallback fallback) {
    SchedulePolicy p;
    p.kind = Kind::scripted;
    p.script = std::move(script);
    p.fallback = fallback;
    return p;
}

bool markov_irreducible(const std::vector<std::vector<double>>& transition) {
    const int n = static_cast<int>(transition.size());
    for (int src = 0; src < n; ++src) {
        std::vector<bool> seen(n, false);
        std::vector<int> stack{src};
        seen[src] = true;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int v = 0; v < n; ++v)
                if (!seen[v] && transition[u][v] > 0.0) {
                    seen[v] = true;
                    stack.push_back(v);
                }
        }
        if (std::count(seen.begin(), seen.end(), true) != n) return false;
    }
    return true;
}

namespace {

void validate_schedule(const WordSchedule& schedule) {
    const int n = schedule.n_generators;
    if (n < 1) throw std::invalid_argument("ScheduleStream: n_generators < 1");
    const SchedulePolicy& p = schedule.policy;
    if (p.kind == SchedulePolicy::Kind::markov) {
        if (static_cast<int>(p.transition.size()) != n)
            throw std::invalid_argument("ScheduleStream: transition matrix size != n_generators");
        for (const auto& row : p.transition) {
            if (static_cast<int>(row.size()) != n)
                throw std::invalid_argument("ScheduleStream: ragged transition matrix");
            double sum = 0.0;
            for (double x : row) {
                if (x < 0.0) throw std::invalid_argument("ScheduleStream: negative transition");
                sum += x;
            }
            if (std::fabs(sum - 1.0) > 1e-9)
                throw std::invalid_argument("ScheduleStream: transition rows must sum to 1");
        }
    }
    if (p.kind == SchedulePolicy::Kind::scripted)
        for (int idx : p.script)
            if (idx < 1 || idx > n)
                throw std::invalid_argument("ScheduleStream: scripted index out of range");
}

}  // namespace

ScheduleStream::ScheduleStream(const WordSchedule& schedule) : schedule_(schedule) {
    validate_schedule(schedule_);
    if (schedule_.policy.kind == SchedulePolicy::Kind::markov) {
        markov_rng_ = make_engine(schedule_.policy.seed, 0);
        std::uniform_int_distribution<int> init(0, schedule_.n_generators - 1);
        markov_state_ = init(markov_rng_);
    }
}

int ScheduleStream::next() {
    const int n = schedule_.n_generators;
    const SchedulePolicy& p = schedule_.policy;
    const std::int64_t k = counter_++;

    switch (p.kind) {
        case SchedulePolicy::Kind::seeded_uniform:
            return 1 + static_cast<int>(derive_stream(p.seed, static_cast<std::uint64_t>(k)) %
                                        static_cast<std::uint64_t>(n));
        case SchedulePolicy::Kind::round_robin:
            return 1 + static_cast<int>(k % n);
        case SchedulePolicy::Kind::markov: {
            const int emitted = markov_state_ + 1;
            std::uniform_real_distribution<double> u(0.0, 1.0);
            const double draw = u(markov_rng_);
            double acc = 0.0;
            int next_state = n - 1;
            for (int j = 0; j < n; ++j) {
                acc += p.transition[markov_state_][j];
                if (draw < acc) {
                    next_state = j;
                    break;
                }
            }
            markov_state_ = next_state;
            return emitted;
        }
        case SchedulePolicy::Kind::scripted: {
            if (k < static_cast<std::int64_t>(p.script.size()))
                return p.script[static_cast<std::size_t>(k)];
            const std::int64_t tail = k - static_cast<std::int64_t>(p.script.size());
            switch (p.fallback) {
                case SchedulePolicy::Fallback::none:
                    return 0;
                case SchedulePolicy::Fallback::round_robin:
                    return 1 + static_cast<int>(tail % n);
                case SchedulePolicy::Fallback::seeded_uniform:
                    return 1 +
                           static_cast<int>(derive_stream(p.seed, static_cast<std::uint64_t>(tail)) %
                                            static_cast<std::uint64_t>(n));
            }
            return 0;
        }
    }
    return 0;
}

std::string to_string(StopReason r) {
    switch (r) {
        case StopReason::converged: return "converged";
        case StopReason::budget: return "budget";
        case StopReason::stagnated: return "stagnated";
    }
    return "unknown";
}

namespace {

void validate_ops(std::span<const LinearOperator> ops) {
    if (ops.empty()) throw std::invalid_argument("iterate: empty operator list");
    const NormSpec s = ops.front().space;
    for (const LinearOperator& t : ops) {
        if (!(t.space == s))
            throw std::invalid_argument("iterate: operators live on different spaces");
        if (is_contraction(t).kind != ContractionKind::yes)
            throw std::invalid_argument("iterate: operator is not a certified contraction");
    }
}

}  // namespace

Trace iterate(std::span<const LinearOperator> ops, const WordSchedule& schedule, const Vec& x0,
              const StopCriteria& stop, int snapshot_stride) {
    validate_ops(ops);
    const NormSpec s = ops.front().space;
    check_vector(x0, s);
    if (schedule.n_generators != static_cast<int>(ops.size()))
        throw std::invalid_argument("iterate: schedule.n_generators != number of operators");
    if (stop.max_iters < 1 || stop.cauchy_tol <= 0.0 || stop.cauchy_window < 1)
        throw std::invalid_argument("iterate: malformed stop criteria");
    if (snapshot_stride < 1) throw std::invalid_argument("iterate: snapshot_stride < 1");

    ScheduleStream stream(schedule);

    Trace trace;
    trace.snapshot_stride = snapshot_stride;
    trace.x0_norm = norm(x0, s);
    trace.snapshots.emplace_back(0, x0);
    trace.stop_reason = StopReason::budget;

    Vec x = x0;
    int below = 0;

    for (std::int64_t n = 1; n <= stop.max_iters; ++n) {
        const int idx = stream.next();
        if (idx == 0) {
            trace.schedule_exhausted = true;
            trace.stop_reason = StopReason::budget;
            break;
        }
        Vec x_next = matvec(ops[idx - 1].matrix, x);
        const double inc = norm(vec_sub(x_next, x), s);
        const double nrm = norm(x_next, s);
        trace.steps.push_back({n, idx, nrm, inc});
        x = std::move(x_next);
        if (n % snapshot_stride == 0) trace.snapshots.emplace_back(n, x);

        if (inc < stop.cauchy_tol) {
            if (++below >= stop.cauchy_window) {
                trace.stop_reason = StopReason::converged;
                trace.limit_estimate = x;
                break;
            }
        } else {
            below = 0;
        }

        if (stop.stagnation_tol > 0.0 && n >= stop.cauchy_window) {
            const std::size_t w = static_cast<std::size_t>(stop.cauchy_window);
            const double drop = trace.steps[trace.steps.size() - w].norm - nrm;
            if (drop < stop.stagnation_tol && inc >= stop.cauchy_tol) {
                trace.stop_reason = StopReason::stagnated;
                break;
            }
        }
    }

    if (!trace.steps.empty()) {
        const std::int64_t last = trace.steps.back().n;
        if (trace.snapshots.back().first != last) trace.snapshots.emplace_back(last, x);
    }
    trace.final_x = std::move(x);
    return trace;
}

LimitReport classify_limit(const Vec& z, std::span<const LinearOperator> ops, double tol) {
    if (ops.empty()) throw std::invalid_argument("classify_limit: empty operator list");
    const NormSpec s = ops.front().space;
    check_vector(z, s);

    LimitReport report;
    report.residuals.reserve(ops.size());
    const double scale = std::max(1.0, norm(z, s));
    bool all = true;
    for (const LinearOperator& t : ops) {
        const double r = norm(vec_sub(matvec(t.matrix, z), z), s);
        report.residuals.push_back(r);
        if (r > tol * scale) all = false;
    }
    report.in_common_fixed_set = all;
    report.distance = common_fixed_space(ops).distance(z);
    return report;
}

double monotonicity_audit(const Trace& trace) {
    double worst = 0.0;
    double prev = trace.x0_norm;
    for (const TraceStep& step : trace.steps) {
        worst = std::max(worst, step.norm - prev);
        prev = step.norm;
    }
    return worst;
}

SubsequenceReport subsequence_lemma_check(const Trace& trace, const Vec& z,
                                          std::span<const LinearOperator> ops, double tol) {
    if (trace.snapshot_stride != 1 ||
        trace.snapshots.size() != trace.steps.size() + 1)
        throw std::invalid_argument(
            "subsequence_lemma_check: trace must retain full-history snapshots (stride 1)");
    const NormSpec s = ops.empty() ? NormSpec::l2(static_cast<int>(z.size()))
                                   : ops.front().space;

    SubsequenceReport report;
    report.z_is_common_fixed = !ops.empty() && classify_limit(z, ops, tol).in_common_fixed_set;

    double prev = -1.0;
    double max_inc = 0.0;
    for (const auto& [n, x] : trace.snapshots) {
        const double d = norm(vec_sub(x, z), s);
        if (prev >= 0.0) max_inc = std::max(max_inc, d - prev);
        prev = d;
    }
    report.max_increase = max_inc;
    report.distance_monotone = max_inc <= 1e-12;
    return report;
}

OrderSensitivityReport order_sensitivity(std::span<const LinearOperator> ops, const Vec& x0,
                                         int n_schedules, std::uint64_t seed,
                                         const StopCriteria& stop, Exec exec) {
    validate_ops(ops);
    if (n_schedules < 1) throw std::invalid_argument("order_sensitivity: n_schedules < 1");
    const NormSpec s = ops.front().space;
    check_vector(x0, s);

    OrderSensitivityReport report;
    report.limits.resize(n_schedules);
    report.converged.assign(n_schedules, false);

    std::vector<Vec> limits(n_schedules);
    std::vector<char> ok(n_schedules, 0);
    for_each_index(n_schedules, exec, [&](std::int64_t trial) {
        WordSchedule schedule{SchedulePolicy::uniform(derive_stream(seed, trial)),
                              static_cast<int>(ops.size())};
        const Trace trace = iterate(ops, schedule, x0, stop);
        limits[trial] = trace.final_x;
        ok[trial] = trace.stop_reason == StopReason::converged ? 1 : 0;
    });

    for (int i = 0; i < n_schedules; ++i) {
        report.limits[i] = std::move(limits[i]);
        report.converged[i] = ok[i] != 0;
    }
    double diameter = 0.0;
    for (int i = 0; i < n_schedules; ++i)
        for (int j = i + 1; j < n_schedules; ++j)
            diameter = std::max(diameter, norm(vec_sub(report.limits[i], report.limits[j]), s));
    report.diameter = diameter;
    return report;
}

}  // namespace randprod
