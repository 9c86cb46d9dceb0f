#ifndef RANDPROD_EXACT_HPP
#define RANDPROD_EXACT_HPP

#include <cstdint>
#include <string>
#include <vector>

namespace randprod {

// Exact rational scalar on int64 numerator/denominator, normalized with a
// positive denominator. Arithmetic runs through 128-bit intermediates and
// throws std::overflow_error instead of silently wrapping.
class Rational {
public:
    Rational() : num_(0), den_(1) {}
    Rational(long long n) : num_(n), den_(1) {}
    Rational(long long n, long long d);

    // Accepts "p/q", integers, and exact decimals such as "0.5" or "-1.25".
    static Rational parse(const std::string& text);

    long long num() const { return num_; }
    long long den() const { return den_; }
    double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
    bool is_zero() const { return num_ == 0; }
    std::string to_string() const;

    Rational operator-() const;
    Rational operator+(const Rational& o) const;
    Rational operator-(const Rational& o) const;
    Rational operator*(const Rational& o) const;
    Rational operator/(const Rational& o) const;
    Rational abs() const;

    bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }
    bool operator!=(const Rational& o) const { return !(*this == o); }
    bool operator<(const Rational& o) const;
    bool operator<=(const Rational& o) const { return *this < o || *this == o; }
    bool operator>(const Rational& o) const { return o < *this; }
    bool operator>=(const Rational& o) const { return o <= *this; }

private:
    long long num_;
    long long den_;
};

using RatVec = std::vector<Rational>;

struct RatMat {
    int n = 0;
    std::vector<Rational> a;

    RatMat() = default;
    explicit RatMat(int n_) : n(n_), a(static_cast<std::size_t>(n_) * n_) {}
    Rational& operator()(int i, int j) { return a[static_cast<std::size_t>(i) * n + j]; }
    const Rational& operator()(int i, int j) const { return a[static_cast<std::size_t>(i) * n + j]; }
};

RatVec rat_apply(const RatMat& m, const RatVec& v);
RatVec rat_sub(const RatVec& x, const RatVec& y);
RatMat rat_matmul(const RatMat& lhs, const RatMat& rhs);
bool rat_mat_equal(const RatMat& lhs, const RatMat& rhs);

// Exact l_1 / l_inf norms (the exponents whose norms stay rational).
enum class ExactNorm { l1, linf };
Rational rat_norm(const RatVec& v, ExactNorm which);

std::vector<double> rat_to_double(const RatVec& v);

struct ExactTraceStep {
    std::int64_t n = 0;
    int r = 0;
    Rational norm;
    Rational increment;
};

struct ExactTrace {
    Rational x0_norm;
    std::vector<ExactTraceStep> steps;
    RatVec final_x;
    bool converged = false;
};

// Product iteration in exact arithmetic; converged once `window` consecutive
// increments vanish identically.
ExactTrace exact_iterate(const std::vector<RatMat>& ops, ExactNorm which,
                         const std::vector<int>& indices, const RatVec& x0, int window = 4);

// Largest exact increase of the norm sequence (zero for genuine contractions).
Rational exact_monotonicity_audit(const ExactTrace& trace);

struct ExactOrderReport {
    std::vector<RatVec> limits;
    Rational diameter;  // max pairwise distance in the exact norm
    bool all_converged = false;
};

// Runs the exact iteration under n_schedules fair seeded schedules of length
// max_steps and measures how far apart the limits land.
ExactOrderReport exact_order_sensitivity(const std::vector<RatMat>& ops, ExactNorm which,
                                         const RatVec& x0, int n_schedules, std::uint64_t seed,
                                         int max_steps);

}  // namespace randprod

#endif
