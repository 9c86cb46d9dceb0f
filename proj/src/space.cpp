#include "randprod/space.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace randprod {

namespace {

double sgn(double x) { return (x > 0.0) - (x < 0.0); }

}  // namespace

NormSpec NormSpec::make(int dim, double p) {
    if (dim < 1) throw std::invalid_argument("NormSpec: dim must be positive");
    if (!(p >= 1.0)) throw std::invalid_argument("NormSpec: exponent must satisfy p >= 1");
    return {dim, p};
}

double NormSpec::conjugate() const {
    if (p == 1.0) return inf;
    if (is_inf()) return 1.0;
    return p / (p - 1.0);
}

std::string exponent_to_string(double p) {
    if (p == NormSpec::inf) return "inf";
    std::ostringstream os;
    os << p;
    return os.str();
}

Functional make_functional(Vec coords, const NormSpec& primal) {
    return Functional{std::move(coords), primal.conjugate()};
}

void check_vector(const Vec& v, const NormSpec& s) {
    if (static_cast<int>(v.size()) != s.dim)
        throw std::invalid_argument("vector dimension does not match the space");
    for (double x : v)
        if (!std::isfinite(x)) throw std::invalid_argument("vector has a non-finite coordinate");
}

double norm(const Vec& v, const NormSpec& s) {
    check_vector(v, s);
    if (s.is_inf()) {
        double m = 0.0;
        for (double x : v) m = std::max(m, std::fabs(x));
        return m;
    }
    if (s.p == 1.0) {
        double acc = 0.0;
        for (double x : v) acc += std::fabs(x);
        return acc;
    }
    if (s.p == 2.0) {
        double acc = 0.0;
        for (double x : v) acc += x * x;
        return std::sqrt(acc);
    }
    double m = 0.0;
    for (double x : v) m = std::max(m, std::fabs(x));
    if (m == 0.0) return 0.0;
    double acc = 0.0;
    for (double x : v) acc += std::pow(std::fabs(x) / m, s.p);
    return m * std::pow(acc, 1.0 / s.p);
}

double dual_norm(const Functional& f, const NormSpec& primal) {
    return norm(f.coords, primal.dual());
}

double pair(const Functional& f, const Vec& v) {
    if (f.coords.size() != v.size())
        throw std::invalid_argument("pair: dimension mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) s += f.coords[i] * v[i];
    return s;
}

Vec normalize(const Vec& v, const NormSpec& s) {
    const double n = norm(v, s);
    if (n == 0.0) throw std::invalid_argument("normalize: zero vector");
    Vec out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] / n;
    return out;
}

Vec norm_gradient(const Vec& y, const NormSpec& s) {
    check_vector(y, s);
    Vec g(y.size(), 0.0);
    if (s.p == 1.0) {
        for (std::size_t i = 0; i < y.size(); ++i) g[i] = sgn(y[i]);
        return g;
    }
    if (s.is_inf()) {
        double m = 0.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < y.size(); ++i)
            if (std::fabs(y[i]) > m) { m = std::fabs(y[i]); arg = i; }
        if (m > 0.0) g[arg] = sgn(y[arg]);
        return g;
    }
    const double n = norm(y, s);
    if (n == 0.0) return g;
    for (std::size_t i = 0; i < y.size(); ++i)
        g[i] = sgn(y[i]) * std::pow(std::fabs(y[i]) / n, s.p - 1.0);
    return g;
}

int SupportFace::dimension() const {
    switch (kind) {
        case FaceKind::singleton: return 0;
        case FaceKind::box: return static_cast<int>(free_indices.size());
        case FaceKind::simplex: return static_cast<int>(support.size()) - 1;
    }
    return 0;
}

std::vector<Functional> SupportFace::vertices() const {
    std::vector<Functional> out;
    if (kind == FaceKind::singleton) {
        out.push_back(base);
        return out;
    }
    if (kind == FaceKind::simplex) {
        for (int i : support) {
            Vec c(space.dim, 0.0);
            c[i] = sign[i];
            out.push_back(Functional{std::move(c), base.dual_p});
        }
        return out;
    }
    const int k = static_cast<int>(free_indices.size());
    if (k > 20) throw std::length_error("SupportFace::vertices: too many free coordinates");
    const std::uint64_t count = 1ULL << k;
    out.reserve(count);
    for (std::uint64_t mask = 0; mask < count; ++mask) {
        Vec c = base.coords;
        for (int b = 0; b < k; ++b) c[free_indices[b]] = (mask >> b) & 1 ? 1.0 : -1.0;
        out.push_back(Functional{std::move(c), base.dual_p});
    }
    return out;
}

bool SupportFace::contains(const Functional& f, double tol) const {
    if (static_cast<int>(f.coords.size()) != space.dim) return false;
    switch (kind) {
        case FaceKind::singleton: {
            for (int i = 0; i < space.dim; ++i)
                if (std::fabs(f.coords[i] - base.coords[i]) > tol) return false;
            return true;
        }
        case FaceKind::box: {
            std::vector<bool> is_free(space.dim, false);
            for (int i : free_indices) is_free[i] = true;
            for (int i = 0; i < space.dim; ++i) {
                if (is_free[i]) {
                    if (std::fabs(f.coords[i]) > 1.0 + tol) return false;
                } else if (std::fabs(f.coords[i] - sign[i]) > tol) {
                    return false;
                }
            }
            return true;
        }
        case FaceKind::simplex: {
            std::vector<bool> in_support(space.dim, false);
            for (int i : support) in_support[i] = true;
            double total = 0.0;
            for (int i = 0; i < space.dim; ++i) {
                if (!in_support[i]) {
                    if (std::fabs(f.coords[i]) > tol) return false;
                    continue;
                }
                const double t = f.coords[i] * sign[i];
                if (t < -tol) return false;
                total += t;
            }
            return std::fabs(total - 1.0) <= tol;
        }
    }
    return false;
}

SupportFace support_face(const Vec& v, const NormSpec& s) {
    check_vector(v, s);
    const double n = norm(v, s);
    if (n == 0.0) throw std::domain_error("support_face: undefined for the zero vector");

    SupportFace face;
    face.space = s;
    face.sign.assign(s.dim, 0.0);

    if (s.p == 1.0) {
        face.kind = FaceKind::box;
        Vec base(s.dim, 0.0);
        for (int i = 0; i < s.dim; ++i) {
            if (v[i] == 0.0) {
                face.free_indices.push_back(i);
            } else {
                face.sign[i] = sgn(v[i]);
                base[i] = face.sign[i];
            }
        }
        face.base = Functional{std::move(base), s.conjugate()};
        return face;
    }

    if (s.is_inf()) {
        face.kind = FaceKind::simplex;
        double m = 0.0;
        for (double x : v) m = std::max(m, std::fabs(x));
        for (int i = 0; i < s.dim; ++i)
            if (std::fabs(v[i]) == m) {
                face.support.push_back(i);
                face.sign[i] = sgn(v[i]);
            }
        Vec base(s.dim, 0.0);
        const double w = 1.0 / static_cast<double>(face.support.size());
        for (int i : face.support) base[i] = face.sign[i] * w;
        face.base = Functional{std::move(base), s.conjugate()};
        return face;
    }

    face.kind = FaceKind::singleton;
    Vec base(s.dim, 0.0);
    for (int i = 0; i < s.dim; ++i) {
        face.sign[i] = sgn(v[i]);
        base[i] = sgn(v[i]) * std::pow(std::fabs(v[i]) / n, s.p - 1.0);
    }
    face.base = Functional{std::move(base), s.conjugate()};
    return face;
}

bool face_contains(const SupportFace& face, const Functional& f, double tol) {
    if (f.coords.size() != static_cast<std::size_t>(face.space.dim))
        throw std::invalid_argument("face_contains: dimension mismatch");
    return face.contains(f, tol);
}

}  // namespace randprod
