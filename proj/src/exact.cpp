#include "randprod/exact.hpp"

#include <numeric>
#include <stdexcept>

#include "randprod/rng.hpp"

namespace randprod {

namespace {

using i128 = __int128;

long long checked_narrow(i128 v) {
    if (v > static_cast<i128>(INT64_MAX) || v < static_cast<i128>(INT64_MIN))
        throw std::overflow_error("Rational: 64-bit overflow");
    return static_cast<long long>(v);
}

i128 gcd128(i128 a, i128 b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
        const i128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

Rational make_reduced(i128 num, i128 den) {
    if (den == 0) throw std::invalid_argument("Rational: zero denominator");
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const i128 g = num == 0 ? den : gcd128(num, den);
    return Rational(checked_narrow(num / g), checked_narrow(den / g));
}

}  // namespace

Rational::Rational(long long n, long long d) : num_(0), den_(1) {
    if (d == 0) throw std::invalid_argument("Rational: zero denominator");
    i128 num = n, den = d;
    if (den < 0) {
        num = -num;
        den = -den;
    }
    const i128 g = num == 0 ? den : gcd128(num, den);
    num_ = checked_narrow(num / g);
    den_ = checked_narrow(den / g);
}

Rational Rational::parse(const std::string& text) {
    std::size_t b = text.find_first_not_of(" \t");
    std::size_t e = text.find_last_not_of(" \t");
    if (b == std::string::npos) throw std::invalid_argument("Rational::parse: empty string");
    const std::string s = text.substr(b, e - b + 1);

    auto parse_int = [](const std::string& part) -> long long {
        if (part.empty()) throw std::invalid_argument("Rational::parse: malformed number");
        std::size_t pos = 0;
        long long v = 0;
        try {
            v = std::stoll(part, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument("Rational::parse: malformed number '" + part + "'");
        }
        if (pos != part.size())
            throw std::invalid_argument("Rational::parse: malformed number '" + part + "'");
        return v;
    };

    const std::size_t slash = s.find('/');
    if (slash != std::string::npos) {
        const long long n = parse_int(s.substr(0, slash));
        const long long d = parse_int(s.substr(slash + 1));
        return Rational(n, d);
    }
    const std::size_t dot = s.find('.');
    if (dot != std::string::npos) {
        const std::string head = s.substr(0, dot);
        const std::string tail = s.substr(dot + 1);
        if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos)
            throw std::invalid_argument("Rational::parse: malformed decimal '" + s + "'");
        const bool negative = !head.empty() && head[0] == '-';
        const long long whole = head == "-" || head.empty() ? 0 : parse_int(head);
        i128 den = 1;
        for (std::size_t i = 0; i < tail.size(); ++i) {
            den *= 10;
            if (den > static_cast<i128>(INT64_MAX))
                throw std::overflow_error("Rational::parse: decimal too long");
        }
        const long long frac = tail.empty() ? 0 : parse_int(tail);
        i128 num = static_cast<i128>(whole < 0 ? -whole : whole) * den + frac;
        if (negative || whole < 0) num = -num;
        return make_reduced(num, den);
    }
    return Rational(parse_int(s));
}

std::string Rational::to_string() const {
    if (den_ == 1) return std::to_string(num_);
    return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::operator-() const { return make_reduced(-static_cast<i128>(num_), den_); }

Rational Rational::operator+(const Rational& o) const {
    return make_reduced(static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_,
                        static_cast<i128>(den_) * o.den_);
}

Rational Rational::operator-(const Rational& o) const { return *this + (-o); }

Rational Rational::operator*(const Rational& o) const {
    return make_reduced(static_cast<i128>(num_) * o.num_, static_cast<i128>(den_) * o.den_);
}

Rational Rational::operator/(const Rational& o) const {
    if (o.num_ == 0) throw std::invalid_argument("Rational: division by zero");
    return make_reduced(static_cast<i128>(num_) * o.den_, static_cast<i128>(den_) * o.num_);
}

Rational Rational::abs() const { return num_ < 0 ? -*this : *this; }

bool Rational::operator<(const Rational& o) const {
    return static_cast<i128>(num_) * o.den_ < static_cast<i128>(o.num_) * den_;
}

RatVec rat_apply(const RatMat& m, const RatVec& v) {
    if (static_cast<int>(v.size()) != m.n)
        throw std::invalid_argument("rat_apply: dimension mismatch");
    RatVec out(m.n);
    for (int i = 0; i < m.n; ++i) {
        Rational s;
        for (int j = 0; j < m.n; ++j) s = s + m(i, j) * v[j];
        out[i] = s;
    }
    return out;
}

RatVec rat_sub(const RatVec& x, const RatVec& y) {
    if (x.size() != y.size()) throw std::invalid_argument("rat_sub: dimension mismatch");
    RatVec out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
    return out;
}

RatMat rat_matmul(const RatMat& lhs, const RatMat& rhs) {
    if (lhs.n != rhs.n) throw std::invalid_argument("rat_matmul: dimension mismatch");
    RatMat out(lhs.n);
    for (int i = 0; i < lhs.n; ++i)
        for (int j = 0; j < lhs.n; ++j) {
            Rational s;
            for (int k = 0; k < lhs.n; ++k) s = s + lhs(i, k) * rhs(k, j);
            out(i, j) = s;
        }
    return out;
}

bool rat_mat_equal(const RatMat& lhs, const RatMat& rhs) {
    if (lhs.n != rhs.n) return false;
    for (std::size_t i = 0; i < lhs.a.size(); ++i)
        if (lhs.a[i] != rhs.a[i]) return false;
    return true;
}

Rational rat_norm(const RatVec& v, ExactNorm which) {
    Rational out;
    for (const Rational& x : v) {
        const Rational ax = x.abs();
        if (which == ExactNorm::l1)
            out = out + ax;
        else if (ax > out)
            out = ax;
    }
    return out;
}

std::vector<double> rat_to_double(const RatVec& v) {
    std::vector<double> out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i].value();
    return out;
}

ExactTrace exact_iterate(const std::vector<RatMat>& ops, ExactNorm which,
                         const std::vector<int>& indices, const RatVec& x0, int window) {
    if (ops.empty()) throw std::invalid_argument("exact_iterate: empty operator list");
    if (window < 1) throw std::invalid_argument("exact_iterate: window < 1");

    ExactTrace trace;
    trace.x0_norm = rat_norm(x0, which);
    RatVec x = x0;
    int zero_run = 0;
    std::int64_t n = 0;
    for (int idx : indices) {
        if (idx < 1 || idx > static_cast<int>(ops.size()))
            throw std::invalid_argument("exact_iterate: index out of range");
        ++n;
        RatVec next = rat_apply(ops[idx - 1], x);
        const Rational inc = rat_norm(rat_sub(next, x), which);
        trace.steps.push_back({n, idx, rat_norm(next, which), inc});
        x = std::move(next);
        if (inc.is_zero()) {
            if (++zero_run >= window) {
                trace.converged = true;
                break;
            }
        } else {
            zero_run = 0;
        }
    }
    trace.final_x = std::move(x);
    return trace;
}

Rational exact_monotonicity_audit(const ExactTrace& trace) {
    Rational worst;
    Rational prev = trace.x0_norm;
    for (const ExactTraceStep& step : trace.steps) {
        const Rational d = step.norm - prev;
        if (d > worst) worst = d;
        prev = step.norm;
    }
    return worst;
}

ExactOrderReport exact_order_sensitivity(const std::vector<RatMat>& ops, ExactNorm which,
                                         const RatVec& x0, int n_schedules, std::uint64_t seed,
                                         int max_steps) {
    if (n_schedules < 1) throw std::invalid_argument("exact_order_sensitivity: n_schedules < 1");
    ExactOrderReport report;
    report.all_converged = true;
    const int n_ops = static_cast<int>(ops.size());

    for (int trial = 0; trial < n_schedules; ++trial) {
        const std::uint64_t trial_seed = derive_stream(seed, static_cast<std::uint64_t>(trial));
        std::vector<int> indices(max_steps);
        for (int k = 0; k < max_steps; ++k)
            indices[k] = 1 + static_cast<int>(derive_stream(trial_seed, static_cast<std::uint64_t>(k)) %
                                              static_cast<std::uint64_t>(n_ops));
        ExactTrace trace = exact_iterate(ops, which, indices, x0);
        report.all_converged = report.all_converged && trace.converged;
        report.limits.push_back(std::move(trace.final_x));
    }

    Rational diameter;
    for (std::size_t i = 0; i < report.limits.size(); ++i)
        for (std::size_t j = i + 1; j < report.limits.size(); ++j) {
            const Rational d = rat_norm(rat_sub(report.limits[i], report.limits[j]), which);
            if (d > diameter) diameter = d;
        }
    report.diameter = diameter;
    return report;
}

}  // namespace randprod
