#ifndef RANDPROD_ENGINE_HPP
#define RANDPROD_ENGINE_HPP

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "randprod/kernels.hpp"
#include "randprod/linop.hpp"

namespace randprod {

// Index map r : N -> {1..n_generators}. seeded_uniform and round_robin hit
// every index infinitely often by construction; an irreducible markov chain
// does too. A scripted prefix is finite, so fairness is inherited from the
// fallback; with no fallback the stream simply ends and the engine stops
// with a warning.
struct SchedulePolicy {
    enum class Kind { seeded_uniform, round_robin, markov, scripted };
    enum class Fallback { none, round_robin, seeded_uniform };

    Kind kind = Kind::seeded_uniform;
    std::uint64_t seed = 0;
    std::vector<std::vector<double>> transition;  // markov
    std::vector<int> script;                      // scripted, 1-based
    Fallback fallback = Fallback::none;

    static SchedulePolicy uniform(std::uint64_t seed);
    static SchedulePolicy round_robin();
    static SchedulePolicy markov(std::vector<std::vector<double>> transition, std::uint64_t seed);
    static SchedulePolicy scripted(std::vector<int> script, Fallback fallback = Fallback::none);

    bool operator==(const SchedulePolicy&) const = default;
};

struct WordSchedule {
    SchedulePolicy policy;
    int n_generators = 0;
};

// Deterministic stream of 1-based generator indices; 0 signals exhaustion
// (finite scripted schedule without fallback).
class ScheduleStream {
public:
    ScheduleStream(const WordSchedule& schedule);
    int next();

private:
    WordSchedule schedule_;
    std::int64_t counter_ = 0;
    int markov_state_ = -1;
    std::mt19937_64 markov_rng_;
};

// True iff every index can reach every other through positive transition
// entries (so the chain visits every generator infinitely often).
bool markov_irreducible(const std::vector<std::vector<double>>& transition);

struct StopCriteria {
    std::int64_t max_iters = 100000;
    double cauchy_tol = 1e-10;
    int cauchy_window = 50;
    double stagnation_tol = 0.0;  // 0 disables the stagnation stop

    bool operator==(const StopCriteria&) const = default;
};

enum class StopReason { converged, budget, stagnated };
std::string to_string(StopReason r);

struct TraceStep {
    std::int64_t n = 0;
    int r = 0;          // generator index applied at step n
    double norm = 0.0;  // ||S_n x|| in the space norm
    double increment = 0.0;
};

struct Trace {
    double x0_norm = 0.0;
    std::vector<TraceStep> steps;
    int snapshot_stride = 100;
    std::vector<std::pair<std::int64_t, Vec>> snapshots;  // always includes n = 0
    Vec final_x;
    std::optional<Vec> limit_estimate;  // set when converged
    StopReason stop_reason = StopReason::budget;
    bool schedule_exhausted = false;
};

// x <- T_{r(n)} x. Requires certified contractions on a shared space.
Trace iterate(std::span<const LinearOperator> ops, const WordSchedule& schedule, const Vec& x0,
              const StopCriteria& stop, int snapshot_stride = 100);

struct LimitReport {
    bool in_common_fixed_set = false;
    double distance = 0.0;          // Euclidean distance to the common fixed subspace
    std::vector<double> residuals;  // ||T_j z - z|| per operator, space norm
};

LimitReport classify_limit(const Vec& z, std::span<const LinearOperator> ops, double tol = 1e-8);

// max_n (||S_n x|| - ||S_{n-1} x||); <= 1e-12 for any trace produced by
// iterate with certified contractions.
double monotonicity_audit(const Trace& trace);

struct SubsequenceReport {
    bool z_is_common_fixed = false;
    bool distance_monotone = false;
    double max_increase = 0.0;
};

// Checks that n -> ||S_n x - z|| is nonincreasing. Requires full-history
// snapshots (stride 1).
SubsequenceReport subsequence_lemma_check(const Trace& trace, const Vec& z,
                                          std::span<const LinearOperator> ops, double tol = 1e-8);

struct OrderSensitivityReport {
    std::vector<Vec> limits;
    std::vector<bool> converged;
    double diameter = 0.0;  // max pairwise distance between limits, space norm
};

// Runs the iteration under n_schedules independent fair seeded schedules.
OrderSensitivityReport order_sensitivity(std::span<const LinearOperator> ops, const Vec& x0,
                                         int n_schedules, std::uint64_t seed,
                                         const StopCriteria& stop, Exec exec = Exec::parallel);

}  // namespace randprod

#endif
