#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "selfnorm/distribution.hpp"
#include "selfnorm/rng.hpp"

namespace selfnorm {

// Running state of a self-normalized random walk: after j steps it holds the
// step count, the plain partial sum, and the partial sum of squares.
struct WalkState {
    std::uint64_t count = 0;
    double sum = 0.0;
    double sum_sq = 0.0;
};

// Absorb one step.  Requires x != 0 so sum_sq stays strictly increasing.
WalkState step(const WalkState& state, double x);

// The self-normalized value sum / sqrt(sum_sq).  Throws DomainError on an
// empty walk.  Always bounded by sqrt(count) in absolute value.
double walk_value(const WalkState& state);

// One-step update identity for the self-normalized value: the increment
// decomposes into a mean-reverting pull proportional to the current value and
// a fresh innovation.  Returns the defect
//
//   [walk_value(next) - walk_value(prev)]
//     - [ -walk_value(prev) * x^2 / (v' * (v + v')) + x / v' ]
//
// with v, v' the root sums of squares before and after the step.  Exact in
// real arithmetic; in doubles it only carries rounding noise.
double recursion_residual(const WalkState& prev, double x);

// Harmonic clock: sum of 1/j for j in (n, l].  Zero when l == n.
// Throws DomainError when l < n or n == 0.
double harmonic_time(std::uint64_t n, std::uint64_t l);

// Smallest l >= n with harmonic_time(n, l) >= t.  Requires t >= 0.
// Runs in O(n * e^t) time, so keep t moderate.
std::uint64_t index_for_time(std::uint64_t n, double t);

// Piecewise-linear path on the harmonic clock.  Knot k sits at
// harmonic_time(base_n, base_n + k) and carries the walk value at index
// base_n + k; consecutive knot gaps are 1/(base_n + k + 1).
struct EmbeddedPath {
    std::uint64_t base_n = 0;
    std::vector<double> knot_times;
    std::vector<double> knot_values;
};

// Generic sampled path on an arbitrary strictly increasing time grid.
struct GridPath {
    std::vector<double> times;
    std::vector<double> values;
};

// A generated walk: the embedded path from index base_n onward plus the raw
// self-normalized values from index 1, for window statistics over raw indices.
struct WalkResult {
    EmbeddedPath path;
    std::vector<double> walk_values;  // walk_values[i] is the value after step i+1
};

inline constexpr std::uint64_t kDefaultMaxSamples = 10'000'000;

// Deterministic core: folds the given steps.  The path starts at index n,
// so xs.size() >= n >= 1 is required.
WalkResult build_walk_from(std::span<const double> xs, std::uint64_t n);

// Draws just enough steps from the spec to cover harmonic time `horizon` past
// index n, then folds them.  Throws CapacityError before drawing anything if
// more than max_samples steps would be needed.
WalkResult build_walk(const DistributionSpec& spec, std::uint64_t n, double horizon,
                      RngStream& rng, std::uint64_t max_samples = kDefaultMaxSamples);

// Linear interpolation.  Knot values reproduce bit-exactly.  Throws
// DomainError outside the covered interval.
double eval_path(const EmbeddedPath& path, double t);
double eval_grid(const GridPath& path, double t);

// Maps an embedded path to Brownian scale: knot at harmonic time u moves to
// clock exp(u) with value sqrt(exp(u)) times the original.  The result
// approximates a Brownian motion on [1, exp(horizon)].
GridPath brownian_transform(const EmbeddedPath& path);

}  // namespace selfnorm
