#include "randprod/linop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "randprod/kernels.hpp"

namespace randprod {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

struct NormComputation {
    NormBracket bracket;
    Vec witness;
};

NormComputation norm_l1(const Mat& m) {
    int arg = 0;
    double best = 0.0;
    for (int j = 0; j < m.n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m.n; ++i) s += std::fabs(m(i, j));
        if (s > best) { best = s; arg = j; }
    }
    Vec w(m.n, 0.0);
    w[arg] = 1.0;
    return {{best, best}, std::move(w)};
}

NormComputation norm_linf(const Mat& m) {
    int arg = 0;
    double best = 0.0;
    for (int i = 0; i < m.n; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.n; ++j) s += std::fabs(m(i, j));
        if (s > best) { best = s; arg = i; }
    }
    Vec w(m.n);
    for (int j = 0; j < m.n; ++j) {
        const double s = sgn(m(arg, j));
        w[j] = (s == 0.0) ? 1.0 : s;
    }
    return {{best, best}, std::move(w)};
}

// Largest singular value. Power iterations on B = T^T T supply the witness
// and a Rayleigh-quotient lower bound; the a-priori upper bound
// min(||T||_F^2, ||T||_1 ||T||_inf, Gershgorin(B)) is then tightened by
// bisection with a Cholesky positive-semidefiniteness test of u I - B.
NormComputation norm_l2(const Mat& m) {
    const int n = m.n;
    const Mat b = gram(m);

    double lam_hi = std::min({frobenius(m) * frobenius(m),
                              max_abs_col_sum(m) * max_abs_row_sum(m),
                              sym_eig_upper_bound(b)});
    if (lam_hi <= 0.0) return {{0.0, 0.0}, Vec(n, 0.0)};

    Vec witness;
    double lam_lo = 0.0;
    for (int start = 0; start < 3; ++start) {
        Vec x(n, 0.0);
        if (start == 0) {
            x.assign(n, 1.0);
        } else if (start == 1) {
            int arg = 0;
            for (int i = 1; i < n; ++i)
                if (b(i, i) > b(arg, arg)) arg = i;
            x[arg] = 1.0;
        } else {
            for (int i = 0; i < n; ++i) x[i] = (i % 2 == 0) ? 1.0 : -0.5;
        }
        double nx = norm2(x);
        if (nx == 0.0) continue;
        for (double& c : x) c /= nx;

        double rayleigh = 0.0;
        for (int iter = 0; iter < 400 + 40 * n; ++iter) {
            Vec y = matvec(b, x);
            const double r = dot(x, y);
            const double ny = norm2(y);
            if (ny == 0.0) { rayleigh = 0.0; break; }
            for (double& c : y) c /= ny;
            x = std::move(y);
            if (std::fabs(r - rayleigh) <= 1e-16 * std::max(1.0, r) && iter > 8) {
                rayleigh = r;
                break;
            }
            rayleigh = r;
        }
        const Vec tx = matvec(m, x);
        const double evaluated = dot(tx, tx);  // honest lower bound for unit x
        if (evaluated > lam_lo) {
            lam_lo = evaluated;
            witness = x;
        }
    }
    if (witness.empty()) witness = Vec(n, 0.0);

    double lo = std::min(lam_lo, lam_hi), hi = std::max(lam_lo, lam_hi);
    for (int iter = 0; iter < 300 && hi - lo > 1e-13 * std::max(hi, 1e-30); ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (shifted_psd(b, mid))
            hi = mid;
        else
            lo = mid;
    }

    NormBracket out;
    out.lower = std::max(std::sqrt(std::max(lo, 0.0)), std::sqrt(std::max(lam_lo, 0.0)));
    out.upper = std::sqrt(hi) * (1.0 + 4e-16) + 1e-15;
    out.upper = std::max(out.upper, out.lower);
    return {out, std::move(witness)};
}

// 1 < p < inf, p != 2: multi-start ascent for the lower bound, interpolation
// ||T||_p <= ||T||_1^(1/p) ||T||_inf^(1-1/p) for the upper bound.
NormComputation norm_lp(const Mat& m, const NormSpec& s) {
    const AscentBest best = pnorm_ascent_max(m, s, 20, 0xC0FFEEULL);
    const double l1 = max_abs_col_sum(m);
    const double linf = max_abs_row_sum(m);
    double upper = 0.0;
    if (l1 > 0.0 && linf > 0.0)
        upper = std::pow(l1, 1.0 / s.p) * std::pow(linf, 1.0 - 1.0 / s.p);
    upper = std::max(upper, best.value);
    return {{best.value, upper}, best.x};
}

NormComputation compute_norm(const Mat& m, const NormSpec& s) {
    if (s.p == 1.0) return norm_l1(m);
    if (s.is_inf()) return norm_linf(m);
    if (s.p == 2.0) return norm_l2(m);
    return norm_lp(m, s);
}

}  // namespace

LinearOperator LinearOperator::make(Mat matrix, NormSpec space) {
    if (matrix.n != space.dim)
        throw std::invalid_argument("LinearOperator: matrix dimension does not match the space");
    if (matrix.a.size() != static_cast<std::size_t>(matrix.n) * matrix.n)
        throw std::invalid_argument("LinearOperator: malformed matrix storage");
    for (double x : matrix.a)
        if (!std::isfinite(x)) throw std::invalid_argument("LinearOperator: non-finite entry");

    LinearOperator t;
    t.matrix = std::move(matrix);
    t.space = space;
    NormComputation nc = compute_norm(t.matrix, space);
    t.norm_bracket = nc.bracket;
    t.norm_witness = std::move(nc.witness);
    return t;
}

Vec apply(const LinearOperator& t, const Vec& v) {
    check_vector(v, t.space);
    return matvec(t.matrix, v);
}

LinearOperator adjoint(const LinearOperator& t) {
    return LinearOperator::make(transpose(t.matrix), t.space.dual());
}

NormBracket operator_norm(const LinearOperator& t) { return t.norm_bracket; }

ContractionVerdict is_contraction(const LinearOperator& t, double tol) {
    ContractionVerdict v;
    v.bracket = t.norm_bracket;
    if (t.norm_bracket.upper <= 1.0 + tol) {
        v.kind = ContractionKind::yes;
        return v;
    }
    if (t.norm_bracket.lower > 1.0 + tol) {
        Vec w = t.norm_witness;
        const double nw = norm(w, t.space);
        if (nw > 0.0) {
            for (double& c : w) c /= nw;
            if (norm(matvec(t.matrix, w), t.space) > 1.0 + tol) {
                v.kind = ContractionKind::no;
                v.witness = std::move(w);
                return v;
            }
        }
    }
    v.kind = ContractionKind::unknown;
    return v;
}

Vec Subspace::project(const Vec& x) const {
    Vec out(x.size(), 0.0);
    for (const Vec& b : basis) {
        const double c = dot(b, x);
        for (std::size_t i = 0; i < x.size(); ++i) out[i] += c * b[i];
    }
    return out;
}

double Subspace::distance(const Vec& x) const { return norm2(vec_sub(x, project(x))); }

Mat Subspace::projector(int ambient_dim) const {
    Mat p(ambient_dim);
    for (const Vec& b : basis)
        for (int i = 0; i < ambient_dim; ++i)
            for (int j = 0; j < ambient_dim; ++j) p(i, j) += b[i] * b[j];
    return p;
}

namespace {

// Kernel of the stacked matrix [T_1 - I; ...; T_N - I]: right singular
// vectors whose singular value falls below tol * sigma_max.
Subspace stacked_kernel(const std::vector<double>& stacked, int rows, int cols, double tol) {
    const RightSVD svd = jacobi_svd_right(stacked, rows, cols);
    const double sigma_max = svd.sigma.front();

    Subspace out;
    if (sigma_max == 0.0) {
        for (int i = 0; i < cols; ++i) {
            Vec e(cols, 0.0);
            e[i] = 1.0;
            out.basis.push_back(std::move(e));
        }
        return out;
    }
    const double thresh = tol * sigma_max;
    for (int j = cols - 1; j >= 0; --j) {
        if (svd.sigma[j] > thresh) break;
        Vec v(cols);
        for (int i = 0; i < cols; ++i) v[i] = svd.v(i, j);
        out.basis.push_back(std::move(v));
    }
    return out;
}

}  // namespace

Subspace fixed_space(const LinearOperator& t, double tol) {
    const Mat d = sub(t.matrix, Mat::identity(t.matrix.n));
    return stacked_kernel(d.a, d.n, d.n, tol);
}

Subspace common_fixed_space(std::span<const LinearOperator> ops, double tol) {
    if (ops.empty()) throw std::invalid_argument("common_fixed_space: empty operator list");
    const NormSpec& s = ops.front().space;
    for (const LinearOperator& t : ops)
        if (!(t.space == s))
            throw std::invalid_argument("common_fixed_space: operators live on different spaces");

    const int d = s.dim;
    std::vector<double> stacked;
    stacked.reserve(static_cast<std::size_t>(d) * d * ops.size());
    for (const LinearOperator& t : ops) {
        const Mat block = sub(t.matrix, Mat::identity(d));
        stacked.insert(stacked.end(), block.a.begin(), block.a.end());
    }
    return stacked_kernel(stacked, d * static_cast<int>(ops.size()), d, tol);
}

}  // namespace randprod
