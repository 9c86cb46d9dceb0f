#ifndef RANDPROD_LINALG_HPP
#define RANDPROD_LINALG_HPP

#include <cstddef>
#include <vector>

namespace randprod {

using Vec = std::vector<double>;

// Dense square matrix, row-major storage.
struct Mat {
    int n = 0;
    std::vector<double> a;

    Mat() = default;
    explicit Mat(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_, 0.0) {}
    Mat(int n_, std::vector<double> entries) : n(n_), a(std::move(entries)) {}

    static Mat identity(int n);

    double& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    double operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }

    bool operator==(const Mat&) const = default;
};

Vec matvec(const Mat& m, const Vec& v);
Mat matmul(const Mat& lhs, const Mat& rhs);
Mat transpose(const Mat& m);
Mat sub(const Mat& lhs, const Mat& rhs);
Mat gram(const Mat& m);  // transpose(m) * m

double frobenius(const Mat& m);
double max_abs_col_sum(const Mat& m);
double max_abs_row_sum(const Mat& m);

// Upper bound on the largest eigenvalue of a symmetric matrix
// (max absolute row sum, Gershgorin).
double sym_eig_upper_bound(const Mat& m);

// Full eigendecomposition of a symmetric matrix via cyclic Jacobi rotations.
// Eigenvalues are returned in descending order; `vectors` holds the matching
// orthonormal eigenvectors as columns.
struct EigenSym {
    std::vector<double> values;
    Mat vectors;
};
EigenSym jacobi_eigh(const Mat& m);
Vec eig_column(const EigenSym& e, int j);

// Right singular structure of a dense rows x cols matrix (row-major storage)
// via one-sided Jacobi, which resolves singular values near zero to full
// precision where the Gram-matrix route would square them away. sigma is
// descending; v holds matching orthonormal right singular vectors as columns.
struct RightSVD {
    std::vector<double> sigma;
    Mat v;
};
RightSVD jacobi_svd_right(const std::vector<double>& a, int rows, int cols);

// True iff `shift * I - m` admits a (semi-definite tolerant) Cholesky
// factorization, i.e. all eigenvalues of the symmetric `m` are <= shift
// up to roundoff.
bool shifted_psd(const Mat& m, double shift);

// Euclidean helpers.
double dot(const Vec& x, const Vec& y);
double norm2(const Vec& x);
Vec vec_sub(const Vec& x, const Vec& y);
Vec vec_add(const Vec& x, const Vec& y);
Vec vec_scale(double alpha, const Vec& x);

// Modified Gram-Schmidt with re-orthogonalization; vectors whose residual
// falls below drop_tol (relative to their input length) are dropped.
std::vector<Vec> gram_schmidt(const std::vector<Vec>& vs, double drop_tol = 1e-10);

}  // namespace randprod

#endif
