#pragma once

#include <cstdint>
#include <span>

#include "selfnorm/walk.hpp"

namespace selfnorm {

enum class Transform { Identity, Absolute, Square };
enum class ExtremumMode { Max, Min };
enum class WindowMode { Mean, Max, Min };

double apply(Transform f, double x);

// Discrete index window derived from a continuous window [s, t]: the bounds
// are floor(m * e^s) and floor(m * e^t) over the raw walk indices.
struct WindowSpec {
    double s = 0.0;
    double t = 1.0;
    std::uint64_t m = 1;
};

// ===== continuous-path functionals (exact on piecewise-linear paths) =====

double path_extremum(std::span<const double> times, std::span<const double> values,
                     double s, double t, ExtremumMode mode);
double path_extremum(const EmbeddedPath& path, double s, double t, ExtremumMode mode);
double path_extremum(const GridPath& path, double s, double t, ExtremumMode mode);

// Integral of f(y(u)) over [s, t], computed segment by segment in closed form
// (the absolute-value case splits segments at their zero crossing).
double path_integral(std::span<const double> times, std::span<const double> values,
                     double s, double t, Transform f);
double path_integral(const EmbeddedPath& path, double s, double t, Transform f);
double path_integral(const GridPath& path, double s, double t, Transform f);

// Integral of e^u * y(u) over [s, t], exact per linear segment.
double exp_weighted_path_integral(std::span<const double> times, std::span<const double> values,
                                  double s, double t);
double exp_weighted_path_integral(const GridPath& path, double s, double t);

// ===== discrete window statistics over raw sequences =====

// Statistic of f(seq[i-1]) over 1-based indices first..last.  Mean divides by
// norm_count rather than the index count, so callers control the convention.
double windowed_stat(std::span<const double> seq, std::uint64_t first, std::uint64_t last,
                     std::uint64_t norm_count, Transform f, WindowMode mode);

// Window statistic of the self-normalized values: extrema run over the closed
// index range [floor(m e^s), floor(m e^t)], means over the half-open range
// (floor(m e^s), floor(m e^t)] divided by the index count.
double discrete_window_stat(std::span<const double> walk_values, const WindowSpec& window,
                            Transform f, WindowMode mode);

// Classical-scaling window statistic built from raw steps xs: partial sums up
// to N = floor(m e^t) are divided by the root sum of squares of all N steps.
// Means run over indices 1 < i <= N divided by N, except the squared version
// which includes i = 1; extrema run over 1 <= i <= N.
double donsker_window_stat(std::span<const double> xs, std::uint64_t m, double t,
                           Transform f, WindowMode mode);

}  // namespace selfnorm
