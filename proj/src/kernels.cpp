#include "randprod/kernels.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "randprod/rng.hpp"

namespace randprod {

namespace {

// Counter-based Box-Muller draw: no engine state to initialize, so the cost
// per sample stays flat even when millions of streams are opened.
double unit_interval(std::uint64_t bits) {
    return (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
}

}  // namespace

Vec gaussian_stream_vec(int dim, std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t state = derive_stream(seed, stream);
    Vec v(dim);
    for (int i = 0; i < dim; i += 2) {
        const double u1 = unit_interval(state = splitmix64(state));
        const double u2 = unit_interval(state = splitmix64(state));
        const double r = std::sqrt(-2.0 * std::log(u1));
        v[i] = r * std::cos(6.283185307179586477 * u2);
        if (i + 1 < dim) v[i + 1] = r * std::sin(6.283185307179586477 * u2);
    }
    return v;
}

Vec random_unit(const NormSpec& s, std::uint64_t seed, std::uint64_t stream) {
    Vec v = gaussian_stream_vec(s.dim, seed, stream);
    double m = norm(v, s);
    for (std::uint64_t bump = 1; m == 0.0; ++bump) {
        v = gaussian_stream_vec(s.dim, seed ^ (bump << 32), stream);
        m = norm(v, s);
    }
    for (int i = 0; i < s.dim; ++i) v[i] /= m;
    return v;
}

namespace {

SphereMax sphere_max_impl(const Mat& t, const NormSpec& s, std::int64_t n_samples,
                          std::uint64_t seed, Exec exec) {
    if (n_samples < 1) throw std::invalid_argument("sphere_sample_max: need at least one sample");
    struct Best {
        double value = -1.0;
        std::int64_t index = -1;
    };

    Best global;
    if (exec == Exec::parallel) {
#pragma omp parallel
        {
            Best local;
#pragma omp for schedule(static) nowait
            for (std::int64_t i = 0; i < n_samples; ++i) {
                const Vec x = random_unit(s, seed, static_cast<std::uint64_t>(i));
                const double val = norm(matvec(t, x), s);
                if (val > local.value || (val == local.value && i < local.index))
                    local = {val, i};
            }
#pragma omp critical
            {
                if (local.value > global.value ||
                    (local.value == global.value && local.index < global.index))
                    global = local;
            }
        }
    } else {
        for (std::int64_t i = 0; i < n_samples; ++i) {
            const Vec x = random_unit(s, seed, static_cast<std::uint64_t>(i));
            const double val = norm(matvec(t, x), s);
            if (val > global.value || (val == global.value && i < global.index))
                global = {val, i};
        }
    }

    SphereMax out;
    out.value = global.value;
    out.arg_index = global.index;
    out.arg = random_unit(s, seed, static_cast<std::uint64_t>(global.index));
    return out;
}

// One Boyd power-iteration ascent of ||Tx||_p from a given start.
double boyd_ascent(const Mat& t, const Mat& tt, const NormSpec& s, Vec& x) {
    const NormSpec dual = s.dual();
    double value = norm(matvec(t, x), s);
    for (int iter = 0; iter < 400; ++iter) {
        const Vec y = matvec(t, x);
        const double ny = norm(y, s);
        if (ny == 0.0) return 0.0;
        const Vec u = norm_gradient(y, s);
        const Vec z = matvec(tt, u);
        if (norm(z, dual) == 0.0) return ny;
        Vec next = norm_gradient(z, dual);
        const double nn = norm(next, s);
        if (nn == 0.0) return ny;
        for (double& c : next) c /= nn;
        const double nv = norm(matvec(t, next), s);
        if (nv <= value + 1e-15 * std::max(1.0, value)) {
            if (nv > value) { value = nv; x = next; }
            return value;
        }
        value = nv;
        x = std::move(next);
    }
    return value;
}

AscentBest pnorm_ascent_impl(const Mat& t, const NormSpec& s, int n_starts, std::uint64_t seed,
                             Exec exec) {
    if (n_starts < 1) throw std::invalid_argument("pnorm_ascent_max: need at least one start");
    const Mat tt = transpose(t);

    std::vector<AscentBest> results(n_starts);
    for_each_index(n_starts, exec, [&](std::int64_t i) {
        Vec x;
        if (i == 0) {
            x = Vec(s.dim, 1.0);
        } else if (i == 1) {
            int arg = 0;
            double best = -1.0;
            for (int j = 0; j < s.dim; ++j) {
                Vec col(s.dim);
                for (int k = 0; k < s.dim; ++k) col[k] = t(k, j);
                const double cn = norm(col, s);
                if (cn > best) { best = cn; arg = j; }
            }
            x = Vec(s.dim, 0.0);
            x[arg] = 1.0;
        } else {
            x = random_unit(s, seed, static_cast<std::uint64_t>(i));
        }
        const double nx = norm(x, s);
        for (double& c : x) c /= nx;
        const double value = boyd_ascent(t, tt, s, x);
        results[i] = {value, std::move(x), i};
    });

    AscentBest best = results[0];
    for (int i = 1; i < n_starts; ++i)
        if (results[i].value > best.value) best = results[i];
    return best;
}

}  // namespace

SphereMax sphere_sample_max(const Mat& t, const NormSpec& s, std::int64_t n_samples,
                            std::uint64_t seed, Exec exec) {
    return sphere_max_impl(t, s, n_samples, seed, exec);
}

SphereMax sphere_sample_max_serial(const Mat& t, const NormSpec& s, std::int64_t n_samples,
                                   std::uint64_t seed) {
    return sphere_max_impl(t, s, n_samples, seed, Exec::serial);
}

AscentBest pnorm_ascent_max(const Mat& t, const NormSpec& s, int n_starts, std::uint64_t seed,
                            Exec exec) {
    return pnorm_ascent_impl(t, s, n_starts, seed, exec);
}

AscentBest pnorm_ascent_max_serial(const Mat& t, const NormSpec& s, int n_starts,
                                   std::uint64_t seed) {
    return pnorm_ascent_impl(t, s, n_starts, seed, Exec::serial);
}

}  // namespace randprod
