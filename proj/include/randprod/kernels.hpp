#ifndef RANDPROD_KERNELS_HPP
#define RANDPROD_KERNELS_HPP

#include <cstdint>
#include <vector>

#include "randprod/linalg.hpp"
#include "randprod/space.hpp"

namespace randprod {

// Data-parallel kernels. Every kernel ships in two variants: an OpenMP one
// and a serial reference used by the tests and the bench tool. Per-item
// randomness derives from (seed, item index) and results merge by index-wise
// reduction, so both variants produce bit-identical output.
enum class Exec { serial, parallel };

template <class Fn>
void for_each_index(std::int64_t count, Exec exec, Fn&& fn) {
    if (exec == Exec::parallel) {
#pragma omp parallel for schedule(dynamic, 16)
        for (std::int64_t i = 0; i < count; ++i) fn(i);
    } else {
        for (std::int64_t i = 0; i < count; ++i) fn(i);
    }
}

// Counter-based Gaussian draws: cheap per stream, bit-reproducible.
Vec gaussian_stream_vec(int dim, std::uint64_t seed, std::uint64_t stream);

// Draws a Gaussian direction from (seed, stream) and scales it to the unit
// sphere of s.
Vec random_unit(const NormSpec& s, std::uint64_t seed, std::uint64_t stream);

// max ||T x||_p over n random unit vectors.
struct SphereMax {
    double value = 0.0;
    std::int64_t arg_index = -1;
    Vec arg;
};
SphereMax sphere_sample_max(const Mat& t, const NormSpec& s, std::int64_t n_samples,
                            std::uint64_t seed, Exec exec = Exec::parallel);
SphereMax sphere_sample_max_serial(const Mat& t, const NormSpec& s, std::int64_t n_samples,
                                   std::uint64_t seed);

// Multi-start ascent of ||T x||_p on the unit p-sphere (1 < p < inf), the
// lower-bound search for general-exponent operator norms. Start 0 is the
// normalized all-ones vector, start 1 the heaviest coordinate direction,
// further starts are seeded random directions.
struct AscentBest {
    double value = 0.0;
    Vec x;
    std::int64_t start = -1;
};
AscentBest pnorm_ascent_max(const Mat& t, const NormSpec& s, int n_starts, std::uint64_t seed,
                            Exec exec = Exec::parallel);
AscentBest pnorm_ascent_max_serial(const Mat& t, const NormSpec& s, int n_starts,
                                   std::uint64_t seed);

}  // namespace randprod

#endif
