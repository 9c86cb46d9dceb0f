#include "randprod/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace randprod {

Mat Mat::identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

Vec matvec(const Mat& m, const Vec& v) {
    if (static_cast<int>(v.size()) != m.n) throw std::invalid_argument("matvec: dimension mismatch");
    Vec out(m.n, 0.0);
    for (int i = 0; i < m.n; ++i) {
        double s = 0.0;
        const double* row = m.a.data() + static_cast<std::size_t>(i) * m.n;
        for (int j = 0; j < m.n; ++j) s += row[j] * v[j];
        out[i] = s;
    }
    return out;
}

Mat matmul(const Mat& lhs, const Mat& rhs) {
    if (lhs.n != rhs.n) throw std::invalid_argument("matmul: dimension mismatch");
    const int n = lhs.n;
    Mat out(n);
    for (int i = 0; i < n; ++i) {
        for (int k = 0; k < n; ++k) {
            const double lik = lhs(i, k);
            if (lik == 0.0) continue;
            for (int j = 0; j < n; ++j) out(i, j) += lik * rhs(k, j);
        }
    }
    return out;
}

Mat transpose(const Mat& m) {
    Mat out(m.n);
    for (int i = 0; i < m.n; ++i)
        for (int j = 0; j < m.n; ++j) out(j, i) = m(i, j);
    return out;
}

Mat sub(const Mat& lhs, const Mat& rhs) {
    if (lhs.n != rhs.n) throw std::invalid_argument("sub: dimension mismatch");
    Mat out(lhs.n);
    for (std::size_t k = 0; k < lhs.a.size(); ++k) out.a[k] = lhs.a[k] - rhs.a[k];
    return out;
}

Mat gram(const Mat& m) {
    const int n = m.n;
    Mat out(n);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double s = 0.0;
            for (int k = 0; k < n; ++k) s += m(k, i) * m(k, j);
            out(i, j) = s;
            out(j, i) = s;
        }
    }
    return out;
}

double frobenius(const Mat& m) {
    double s = 0.0;
    for (double x : m.a) s += x * x;
    return std::sqrt(s);
}

double max_abs_col_sum(const Mat& m) {
    double best = 0.0;
    for (int j = 0; j < m.n; ++j) {
        double s = 0.0;
        for (int i = 0; i < m.n; ++i) s += std::fabs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

double max_abs_row_sum(const Mat& m) {
    double best = 0.0;
    for (int i = 0; i < m.n; ++i) {
        double s = 0.0;
        for (int j = 0; j < m.n; ++j) s += std::fabs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

double sym_eig_upper_bound(const Mat& m) { return max_abs_row_sum(m); }

EigenSym jacobi_eigh(const Mat& m) {
    const int n = m.n;
    Mat a(n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) a(i, j) = 0.5 * (m(i, j) + m(j, i));
    Mat v = Mat::identity(n);

    const double scale = std::max(frobenius(a), 1e-300);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += a(i, j) * a(i, j);
        if (std::sqrt(off) <= 1e-15 * scale) break;

        for (int p = 0; p < n - 1; ++p) {
            for (int q = p + 1; q < n; ++q) {
                const double apq = a(p, q);
                if (std::fabs(apq) <= 1e-18 * scale) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(1.0 + theta * theta));
                const double c = 1.0 / std::sqrt(1.0 + t * t);
                const double s = t * c;

                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akq = a(k, q);
                    a(k, p) = c * akp - s * akq;
                    a(k, q) = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), aqk = a(q, k);
                    a(p, k) = c * apk - s * aqk;
                    a(q, k) = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    const double vkp = v(k, p), vkq = v(k, q);
                    v(k, p) = c * vkp - s * vkq;
                    v(k, q) = s * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return a(i, i) > a(j, j); });

    EigenSym out;
    out.values.resize(n);
    out.vectors = Mat(n);
    for (int j = 0; j < n; ++j) {
        out.values[j] = a(order[j], order[j]);
        for (int i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
    }
    return out;
}

Vec eig_column(const EigenSym& e, int j) {
    Vec out(e.vectors.n);
    for (int i = 0; i < e.vectors.n; ++i) out[i] = e.vectors(i, j);
    return out;
}

RightSVD jacobi_svd_right(const std::vector<double>& a, int rows, int cols) {
    if (static_cast<std::size_t>(rows) * cols != a.size())
        throw std::invalid_argument("jacobi_svd_right: malformed storage");

    // column-major working copy
    std::vector<double> w(a.size());
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            w[static_cast<std::size_t>(j) * rows + i] = a[static_cast<std::size_t>(i) * cols + j];
    Mat v = Mat::identity(cols);

    auto col = [&](int j) { return w.data() + static_cast<std::size_t>(j) * rows; };

    for (int sweep = 0; sweep < 100; ++sweep) {
        bool rotated = false;
        for (int i = 0; i < cols - 1; ++i) {
            for (int j = i + 1; j < cols; ++j) {
                double aii = 0.0, ajj = 0.0, aij = 0.0;
                const double *ci = col(i), *cj = col(j);
                for (int k = 0; k < rows; ++k) {
                    aii += ci[k] * ci[k];
                    ajj += cj[k] * cj[k];
                    aij += ci[k] * cj[k];
                }
                if (std::fabs(aij) <= 1e-16 * std::sqrt(aii * ajj) || aij == 0.0) continue;
                rotated = true;
                const double zeta = (ajj - aii) / (2.0 * aij);
                const double t = (zeta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(zeta) + std::sqrt(1.0 + zeta * zeta));
                const double cs = 1.0 / std::sqrt(1.0 + t * t);
                const double sn = cs * t;
                double *wi = col(i), *wj = col(j);
                for (int k = 0; k < rows; ++k) {
                    const double x = wi[k], y = wj[k];
                    wi[k] = cs * x - sn * y;
                    wj[k] = sn * x + cs * y;
                }
                for (int k = 0; k < cols; ++k) {
                    const double x = v(k, i), y = v(k, j);
                    v(k, i) = cs * x - sn * y;
                    v(k, j) = sn * x + cs * y;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(cols);
    for (int j = 0; j < cols; ++j) {
        double s = 0.0;
        const double* cj = col(j);
        for (int k = 0; k < rows; ++k) s += cj[k] * cj[k];
        sigma[j] = std::sqrt(s);
    }

    std::vector<int> order(cols);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return sigma[i] > sigma[j]; });

    RightSVD out;
    out.sigma.resize(cols);
    out.v = Mat(cols);
    for (int j = 0; j < cols; ++j) {
        out.sigma[j] = sigma[order[j]];
        for (int i = 0; i < cols; ++i) out.v(i, j) = v(i, order[j]);
    }
    return out;
}

bool shifted_psd(const Mat& m, double shift) {
    const int n = m.n;
    Mat c(n);
    double scale = std::fabs(shift);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            c(i, j) = (i == j ? shift : 0.0) - 0.5 * (m(i, j) + m(j, i));
            scale = std::max(scale, std::fabs(c(i, j)));
        }
    const double pivot_tol = 64.0 * n * 2.220446049250313e-16 * std::max(scale, 1e-300);

    // In-place Cholesky tolerant of exact semi-definiteness.
    for (int k = 0; k < n; ++k) {
        double d = c(k, k);
        for (int j = 0; j < k; ++j) d -= c(k, j) * c(k, j);
        if (d < -pivot_tol) return false;
        if (d <= pivot_tol) {
            // Zero pivot: the rest of the column must vanish too.
            for (int i = k + 1; i < n; ++i) {
                double s = c(i, k);
                for (int j = 0; j < k; ++j) s -= c(i, j) * c(k, j);
                if (std::fabs(s) > std::sqrt(pivot_tol * std::max(scale, 1.0))) return false;
                c(i, k) = 0.0;
            }
            c(k, k) = 0.0;
            continue;
        }
        const double l = std::sqrt(d);
        c(k, k) = l;
        for (int i = k + 1; i < n; ++i) {
            double s = c(i, k);
            for (int j = 0; j < k; ++j) s -= c(i, j) * c(k, j);
            c(i, k) = s / l;
        }
    }
    return true;
}

double dot(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("dot: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * y[i];
    return s;
}

double norm2(const Vec& x) { return std::sqrt(dot(x, x)); }

Vec vec_sub(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("vec_sub: dimension mismatch");
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
    return out;
}

Vec vec_add(const Vec& x, const Vec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("vec_add: dimension mismatch");
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
    return out;
}

Vec vec_scale(double alpha, const Vec& x) {
    Vec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = alpha * x[i];
    return out;
}

std::vector<Vec> gram_schmidt(const std::vector<Vec>& vs, double drop_tol) {
    std::vector<Vec> basis;
    for (const Vec& v : vs) {
        const double original = norm2(v);
        if (original == 0.0) continue;
        Vec w = v;
        for (int pass = 0; pass < 2; ++pass)
            for (const Vec& b : basis) w = vec_sub(w, vec_scale(dot(b, w), b));
        const double r = norm2(w);
        if (r <= drop_tol * original) continue;
        basis.push_back(vec_scale(1.0 / r, w));
    }
    return basis;
}

}  // namespace randprod
