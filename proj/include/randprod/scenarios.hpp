#ifndef RANDPROD_SCENARIOS_HPP
#define RANDPROD_SCENARIOS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "randprod/exact.hpp"
#include "randprod/linop.hpp"

namespace randprod {

struct Expectation {
    std::optional<int> fixed_space_dim;
    std::optional<bool> w_prime_all_holds;          // every generator
    std::optional<bool> adjoint_w_prime_all_holds;  // every adjoint
    bool hilbert_projection_family = false;         // schedule-independent limit
};

struct Scenario {
    std::string name;
    NormSpec space;
    std::vector<LinearOperator> ops;
    Vec default_x0;
    Expectation expected;
};

struct ScenarioParams {
    std::optional<int> dim;
    std::optional<int> n;  // number of generators / projections
    std::optional<double> p;
    std::optional<std::uint64_t> seed;

    bool operator==(const ScenarioParams&) const = default;
};

// Built-in catalog with default parameters:
//   example1           l1^2, the two rank-one contractions onto the e1 axis
//   von_neumann_2proj  two orthogonal projections on l2 with a forced
//                      nontrivial intersection, alternation baseline
//   random_projections N orthogonal projections on l2 sharing a subspace
//   diagonal_l1/l2/linf/lp3  diagonal contractions (l_inf and l_p entries are
//                      kept strictly inside (0,1); see the scenario docs)
//   rotation           the 90-degree plane rotation, an isometry with no
//                      fixed vectors
std::vector<Scenario> catalog();

Scenario make_scenario(const std::string& name, const ScenarioParams& params = {});
bool is_builtin_scenario(const std::string& name);

std::vector<std::string> scenario_names();

// Exact-rational build of the example1 generators.
struct Example1Exact {
    std::vector<RatMat> ops;
    RatVec default_x0;
};
Example1Exact example1_exact();

// Every linear projection of l1^2 onto span{e1} has the form
// Q(a, b) = (a + beta b, 0): idempotence pins the e1 coefficient to 1 and the
// l1 contraction property forces |beta| <= 1. Commuting with each generator
// pins beta to that generator's mixing coefficient, and the two pins
// disagree, so no commuting contraction projection exists. All arithmetic is
// exact.
struct ImpossibilityCertificate {
    struct Constraint {
        std::string generator;
        Rational beta;
    };
    std::vector<Constraint> constraints;
    Rational contraction_bound;  // |beta| <= this
    bool consistent = true;
    std::string explanation;
};

ImpossibilityCertificate example1_no_commuting_projection();

// The schedule-independent limit for the Hilbert projection families: the
// orthogonal projection of x0 onto the common fixed subspace. Absent for
// every other scenario, never a guess.
std::optional<Vec> expected_limit_oracle(const Scenario& s, const Vec& x0);

}  // namespace randprod

#endif
