#ifndef RANDPROD_LINOP_HPP
#define RANDPROD_LINOP_HPP

#include <optional>
#include <span>
#include <vector>

#include "randprod/linalg.hpp"
#include "randprod/space.hpp"

namespace randprod {

// Certified interval for an induced operator norm. Exact (collapsed) for
// p in {1, 2, inf}; for other exponents the lower bound comes from ascent
// and the upper bound from interpolation between the exact p=1 and p=inf
// values, so the interval stays honest rather than tight.
struct NormBracket {
    double lower = 0.0;
    double upper = 0.0;
};

// Dense linear operator on an l_p space. The norm bracket and a witness for
// its lower bound are computed at construction, so values are immutable and
// freely shareable across threads.
struct LinearOperator {
    Mat matrix;
    NormSpec space;
    NormBracket norm_bracket;
    Vec norm_witness;  // unit vector with ||T w|| ~= norm_bracket.lower

    static LinearOperator make(Mat matrix, NormSpec space);
};

Vec apply(const LinearOperator& t, const Vec& v);

// Transpose acting on the dual space; pair(adjoint(T) f, v) = pair(f, T v).
LinearOperator adjoint(const LinearOperator& t);

NormBracket operator_norm(const LinearOperator& t);

enum class ContractionKind { yes, no, unknown };

struct ContractionVerdict {
    ContractionKind kind = ContractionKind::unknown;
    std::optional<Vec> witness;  // unit vector with ||T w|| > 1 + tol, for `no`
    NormBracket bracket;
};

ContractionVerdict is_contraction(const LinearOperator& t, double tol = 1e-9);

// A linear subspace described by a Euclidean-orthonormal basis.
struct Subspace {
    std::vector<Vec> basis;

    int dim() const { return static_cast<int>(basis.size()); }
    Vec project(const Vec& x) const;
    double distance(const Vec& x) const;  // Euclidean distance to the subspace
    Mat projector(int ambient_dim) const;
};

// Basis of ker(T - I); singular values below tol * ||T - I|| count as zero.
Subspace fixed_space(const LinearOperator& t, double tol = 1e-10);

// Basis of the intersection of all ker(T_j - I).
Subspace common_fixed_space(std::span<const LinearOperator> ops, double tol = 1e-10);

}  // namespace randprod

#endif
