#include "selfnorm/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>

#include "selfnorm/errors.hpp"

namespace selfnorm {

double apply(Transform f, double x) {
    switch (f) {
        case Transform::Identity: return x;
        case Transform::Absolute: return std::fabs(x);
        case Transform::Square: return x * x;
    }
    return x;
}

namespace {

double lerp_on(std::span<const double> times, std::span<const double> values, double t) {
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.end()) return values.back();
    const std::size_t hi = static_cast<std::size_t>(it - times.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return values[lo] + w * (values[hi] - values[lo]);
}

void check_window(std::span<const double> times, double s, double t, const char* what) {
    if (times.empty()) throw DomainError(std::string(what) + ": empty path");
    if (!(s <= t)) throw DomainError(std::string(what) + ": needs s <= t");
    if (!(s >= times.front()) || !(t <= times.back()))
        throw DomainError(std::string(what) + ": window [" + std::to_string(s) + ", " +
                          std::to_string(t) + "] outside the path");
}

// Indices of knots strictly inside (s, t).
std::pair<std::size_t, std::size_t> interior_knots(std::span<const double> times, double s, double t) {
    const auto lo = std::upper_bound(times.begin(), times.end(), s);
    const auto hi = std::lower_bound(times.begin(), times.end(), t);
    return {static_cast<std::size_t>(lo - times.begin()), static_cast<std::size_t>(hi - times.begin())};
}

double segment_integral(double h, double v0, double v1, Transform f) {
    switch (f) {
        case Transform::Identity:
            return h * 0.5 * (v0 + v1);
        case Transform::Square:
            return h * (v0 * v0 + v0 * v1 + v1 * v1) / 3.0;
        case Transform::Absolute:
            if (v0 * v1 < 0.0) {
                const double tau = h * v0 / (v0 - v1);  // zero crossing offset from the left end
                return 0.5 * (std::fabs(v0) * tau + std::fabs(v1) * (h - tau));
            }
            return h * 0.5 * (std::fabs(v0) + std::fabs(v1));
    }
    return 0.0;
}

// Integral of e^u times the chord through (t0, v0), (t1, v1).
double exp_weighted_segment(double t0, double v0, double t1, double v1) {
    const double h = t1 - t0;
    if (h == 0.0) return 0.0;
    const double slope = (v1 - v0) / h;
    return std::exp(t1) * (v1 - slope) - std::exp(t0) * (v0 - slope);
}

}  // namespace

double path_extremum(std::span<const double> times, std::span<const double> values,
                     double s, double t, ExtremumMode mode) {
    check_window(times, s, t, "path_extremum");
    double best = lerp_on(times, values, s);
    const double at_t = lerp_on(times, values, t);
    best = (mode == ExtremumMode::Max) ? std::max(best, at_t) : std::min(best, at_t);
    const auto [lo, hi] = interior_knots(times, s, t);
    for (std::size_t k = lo; k < hi; ++k)
        best = (mode == ExtremumMode::Max) ? std::max(best, values[k]) : std::min(best, values[k]);
    return best;
}

double path_extremum(const EmbeddedPath& path, double s, double t, ExtremumMode mode) {
    return path_extremum(path.knot_times, path.knot_values, s, t, mode);
}

double path_extremum(const GridPath& path, double s, double t, ExtremumMode mode) {
    return path_extremum(path.times, path.values, s, t, mode);
}

double path_integral(std::span<const double> times, std::span<const double> values,
                     double s, double t, Transform f) {
    check_window(times, s, t, "path_integral");
    if (s == t) return 0.0;
    double total = 0.0;
    double prev_t = s;
    double prev_v = lerp_on(times, values, s);
    const auto [lo, hi] = interior_knots(times, s, t);
    for (std::size_t k = lo; k < hi; ++k) {
        total += segment_integral(times[k] - prev_t, prev_v, values[k], f);
        prev_t = times[k];
        prev_v = values[k];
    }
    total += segment_integral(t - prev_t, prev_v, lerp_on(times, values, t), f);
    return total;
}

double path_integral(const EmbeddedPath& path, double s, double t, Transform f) {
    return path_integral(path.knot_times, path.knot_values, s, t, f);
}

double path_integral(const GridPath& path, double s, double t, Transform f) {
    return path_integral(path.times, path.values, s, t, f);
}

double exp_weighted_path_integral(std::span<const double> times, std::span<const double> values,
                                  double s, double t) {
    check_window(times, s, t, "exp_weighted_path_integral");
    if (s == t) return 0.0;
    double total = 0.0;
    double prev_t = s;
    double prev_v = lerp_on(times, values, s);
    const auto [lo, hi] = interior_knots(times, s, t);
    for (std::size_t k = lo; k < hi; ++k) {
        total += exp_weighted_segment(prev_t, prev_v, times[k], values[k]);
        prev_t = times[k];
        prev_v = values[k];
    }
    total += exp_weighted_segment(prev_t, prev_v, t, lerp_on(times, values, t));
    return total;
}

double exp_weighted_path_integral(const GridPath& path, double s, double t) {
    return exp_weighted_path_integral(path.times, path.values, s, t);
}

double windowed_stat(std::span<const double> seq, std::uint64_t first, std::uint64_t last,
                     std::uint64_t norm_count, Transform f, WindowMode mode) {
    if (first < 1 || last < first)
        throw DomainError("windowed_stat: needs 1 <= first <= last");
    if (last > seq.size())
        throw CapacityError("windowed_stat: index " + std::to_string(last) +
                            " past the end of a sequence of length " + std::to_string(seq.size()));
    if (mode == WindowMode::Mean) {
        if (norm_count == 0) throw DomainError("windowed_stat: zero normalizer");
        double acc = 0.0;
        for (std::uint64_t i = first; i <= last; ++i) acc += apply(f, seq[i - 1]);
        return acc / static_cast<double>(norm_count);
    }
    double best = (mode == WindowMode::Max) ? -std::numeric_limits<double>::infinity()
                                            : std::numeric_limits<double>::infinity();
    for (std::uint64_t i = first; i <= last; ++i) {
        const double v = apply(f, seq[i - 1]);
        best = (mode == WindowMode::Max) ? std::max(best, v) : std::min(best, v);
    }
    return best;
}

namespace {

std::uint64_t window_index(std::uint64_t m, double r) {
    return static_cast<std::uint64_t>(std::floor(static_cast<double>(m) * std::exp(r)));
}

}  // namespace

double discrete_window_stat(std::span<const double> walk_values, const WindowSpec& window,
                            Transform f, WindowMode mode) {
    if (window.m == 0) throw DomainError("discrete_window_stat: needs m >= 1");
    if (!(window.s <= window.t)) throw DomainError("discrete_window_stat: needs s <= t");
    const std::uint64_t lo = window_index(window.m, window.s);
    const std::uint64_t hi = window_index(window.m, window.t);
    if (mode == WindowMode::Mean) {
        if (hi <= lo) throw DomainError("discrete_window_stat: empty mean window");
        return windowed_stat(walk_values, lo + 1, hi, hi - lo, f, mode);
    }
    return windowed_stat(walk_values, lo, hi, 0, f, mode);
}

double donsker_window_stat(std::span<const double> xs, std::uint64_t m, double t,
                           Transform f, WindowMode mode) {
    if (m == 0) throw DomainError("donsker_window_stat: needs m >= 1");
    if (!(t >= 0.0)) throw DomainError("donsker_window_stat: needs t >= 0");
    const std::uint64_t n_terms = window_index(m, t);
    if (n_terms > xs.size())
        throw CapacityError("donsker_window_stat: needs " + std::to_string(n_terms) +
                            " steps, got " + std::to_string(xs.size()));

    double sum_sq = 0.0;
    for (std::uint64_t i = 0; i < n_terms; ++i) sum_sq += xs[i] * xs[i];
    const double norm = std::sqrt(sum_sq);

    std::vector<double> scaled(n_terms);
    double partial = 0.0;
    for (std::uint64_t i = 0; i < n_terms; ++i) {
        partial += xs[i];
        scaled[i] = partial / norm;
    }

    if (mode == WindowMode::Mean) {
        // The mean over identity and absolute value drops the first partial
        // sum; the squared mean keeps it.  Either way the divisor is n_terms.
        const std::uint64_t first = (f == Transform::Square) ? 1 : 2;
        if (first > n_terms) return 0.0;
        return windowed_stat(scaled, first, n_terms, n_terms, f, mode);
    }
    return windowed_stat(scaled, 1, n_terms, 0, f, mode);
}

}  // namespace selfnorm
