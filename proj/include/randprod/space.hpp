#ifndef RANDPROD_SPACE_HPP
#define RANDPROD_SPACE_HPP

#include <limits>
#include <string>
#include <vector>

#include "randprod/linalg.hpp"

namespace randprod {

// A finite-dimensional real l_p space. p = infinity is encoded as the IEEE
// infinity value and tested through is_inf().
struct NormSpec {
    int dim = 0;
    double p = 2.0;

    static constexpr double inf = std::numeric_limits<double>::infinity();

    static NormSpec l1(int dim) { return make(dim, 1.0); }
    static NormSpec l2(int dim) { return make(dim, 2.0); }
    static NormSpec linf(int dim) { return make(dim, inf); }
    static NormSpec lp(int dim, double p) { return make(dim, p); }
    static NormSpec make(int dim, double p);

    bool is_inf() const { return p == inf; }
    double conjugate() const;   // the dual exponent q with 1/p + 1/q = 1
    NormSpec dual() const { return {dim, conjugate()}; }

    bool operator==(const NormSpec&) const = default;
};

std::string exponent_to_string(double p);

// A dual-space element, stored in coordinates. dual_p is the exponent of the
// l_q space the functional lives in.
struct Functional {
    Vec coords;
    double dual_p = 2.0;
};

Functional make_functional(Vec coords, const NormSpec& primal);

void check_vector(const Vec& v, const NormSpec& s);

double norm(const Vec& v, const NormSpec& s);
double dual_norm(const Functional& f, const NormSpec& primal);
double pair(const Functional& f, const Vec& v);

// Scales v to unit norm in s. Throws for the zero vector.
Vec normalize(const Vec& v, const NormSpec& s);

// Gradient of the l_p norm at y (a norm-one dual vector that pairs with y to
// ||y||). For p = 1 and p = infinity a subgradient is returned.
Vec norm_gradient(const Vec& y, const NormSpec& s);

// The support set J(x) = { f : ||f||_q = 1, f(x) = ||x|| }, held exactly.
//
//   singleton : 1 < p < inf (smooth norm, unique supporting functional)
//   box       : p = 1; coordinates on supp(x) are pinned to sign(x_i), the
//               rest range freely over [-1, 1]
//   simplex   : p = inf; convex combinations sum_{i in M} t_i sign(x_i) e_i
//               over the argmax set M
enum class FaceKind { singleton, box, simplex };

struct SupportFace {
    FaceKind kind = FaceKind::singleton;
    NormSpec space;
    Functional base;                 // canonical representative
    std::vector<int> free_indices;   // box only
    std::vector<int> support;        // simplex only
    std::vector<double> sign;        // per-coordinate pinned sign, 0 if free/off-support

    int dimension() const;
    std::vector<Functional> vertices() const;
    bool contains(const Functional& f, double tol) const;
};

SupportFace support_face(const Vec& v, const NormSpec& s);
bool face_contains(const SupportFace& face, const Functional& f, double tol);

}  // namespace randprod

#endif
