#ifndef RANDPROD_CONDITIONS_HPP
#define RANDPROD_CONDITIONS_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "randprod/kernels.hpp"
#include "randprod/linop.hpp"
#include "randprod/space.hpp"

namespace randprod {

enum class WStatus { holds, fails, inconclusive };
enum class WMethod { algebraic_p2, sign_enumeration, numeric_search };

// Outcome of a norm-rigidity check: does ||Tx|| = ||x|| force Tx = x?
// A `fails` verdict always carries a unit witness x with
// | ||Tx|| - ||x|| | <= 1e-10 and gap = ||x - Tx|| well above tolerance.
struct WVerdict {
    WStatus status = WStatus::inconclusive;
    std::optional<Vec> witness;
    double gap = 0.0;
    WMethod method = WMethod::numeric_search;
};

// Routes:
//   p = 2        eigenspace of T^T T for eigenvalue 1 versus ker(T - I)
//   p in {1,inf} exact polyhedral face analysis of the unit sphere
//                (capped at dim <= 14 for p = 1, where the support/sign
//                enumeration is exponential)
//   otherwise    seeded numeric search, falsification-only
WVerdict check_w_prime(const LinearOperator& t, double tol = 1e-10);

// The sequence-based condition. In finite dimensions it coincides with the
// pointwise condition checked above (see the note in conditions.cpp), so this
// delegates and keeps the method provenance.
WVerdict check_w(const LinearOperator& t, double tol = 1e-10);

enum class FalsifierHint { no_violation_found, candidate_violation };

// Best-effort counterexample search against the semigroup condition: words up
// to max_word_len (budget-capped) and unit vectors maximizing the
// displacement ||x - Wx|| while the norm gap ||x|| - ||Wx|| stays small.
// `no_violation_found` is evidence, not proof.
struct FalsifierReport {
    std::vector<int> best_word;  // 1-based generator indices, first applied first
    Vec best_x;
    double norm_gap = 0.0;
    double displacement = 0.0;
    FalsifierHint verdict_hint = FalsifierHint::no_violation_found;
};

FalsifierReport semigroup_w_falsifier(std::span<const LinearOperator> ops, int max_word_len,
                                      std::int64_t budget, std::uint64_t seed,
                                      Exec exec = Exec::parallel);

// For a fixed point y of a contraction T: does T^* map the support set J(y)
// into itself (face_preserved), and does it fix every tested member
// (pointwise_fixed)? Tested members are the canonical base functional plus
// all vertices of polyhedral faces. `sample` is the adjoint image of the
// first moved functional, or of the base when none moved.
struct SupportInvarianceReport {
    bool face_preserved = false;
    bool pointwise_fixed = false;
    Functional sample;
};

SupportInvarianceReport adjoint_support_invariance(const LinearOperator& t, const Vec& y,
                                                   double tol = 1e-9);

namespace detail {

// Shared search core: maximize displacement subject to a shrinking norm gap,
// with algebraic seeds where the exponent admits them. Exposed for the
// serial-vs-parallel tests.
struct DispCandidate {
    Vec x;
    double gap = 0.0;
    double disp = 0.0;
    bool found = false;
};

DispCandidate displacement_search(const Mat& w, const NormSpec& s, std::uint64_t seed,
                                  std::uint64_t stream_base, Exec exec);

}  // namespace detail

}  // namespace randprod

#endif
