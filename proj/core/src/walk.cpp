#include "selfnorm/walk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "selfnorm/errors.hpp"

namespace selfnorm {

WalkState step(const WalkState& state, double x) {
    if (x == 0.0) throw DomainError("walk step must be nonzero");
    if (!std::isfinite(x)) throw DomainError("walk step must be finite");
    return WalkState{state.count + 1, state.sum + x, state.sum_sq + x * x};
}

double walk_value(const WalkState& state) {
    if (state.count == 0) throw DomainError("walk_value on an empty walk");
    return state.sum / std::sqrt(state.sum_sq);
}

double recursion_residual(const WalkState& prev, double x) {
    const WalkState next = step(prev, x);
    const double v_prev = std::sqrt(prev.sum_sq);
    const double v_next = std::sqrt(next.sum_sq);
    const double lhs = walk_value(next) - walk_value(prev);
    const double rhs = -walk_value(prev) * x * x / (v_next * (v_prev + v_next)) + x / v_next;
    return lhs - rhs;
}

double harmonic_time(std::uint64_t n, std::uint64_t l) {
    if (n == 0) throw DomainError("harmonic_time requires n >= 1");
    if (l < n) throw DomainError("harmonic_time requires l >= n");
    double h = 0.0;
    for (std::uint64_t j = n + 1; j <= l; ++j) h += 1.0 / static_cast<double>(j);
    return h;
}

std::uint64_t index_for_time(std::uint64_t n, double t) {
    if (n == 0) throw DomainError("index_for_time requires n >= 1");
    if (!(t >= 0.0)) throw DomainError("index_for_time requires t >= 0");
    std::uint64_t l = n;
    double h = 0.0;
    while (h < t) {
        ++l;
        h += 1.0 / static_cast<double>(l);
    }
    return l;
}

WalkResult build_walk_from(std::span<const double> xs, std::uint64_t n) {
    if (n == 0) throw DomainError("build_walk_from requires n >= 1");
    if (xs.size() < n)
        throw DomainError("build_walk_from needs at least n = " + std::to_string(n) + " steps, got " +
                          std::to_string(xs.size()));

    WalkResult out;
    out.walk_values.reserve(xs.size());
    out.path.base_n = n;
    out.path.knot_times.reserve(xs.size() - n + 1);
    out.path.knot_values.reserve(xs.size() - n + 1);

    WalkState state;
    double clock = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        state = step(state, xs[i]);
        const double value = walk_value(state);
        out.walk_values.push_back(value);
        if (state.count == n) {
            out.path.knot_times.push_back(0.0);
            out.path.knot_values.push_back(value);
        } else if (state.count > n) {
            clock += 1.0 / static_cast<double>(state.count);
            out.path.knot_times.push_back(clock);
            out.path.knot_values.push_back(value);
        }
    }
    return out;
}

WalkResult build_walk(const DistributionSpec& spec, std::uint64_t n, double horizon,
                      RngStream& rng, std::uint64_t max_samples) {
    if (n == 0) throw DomainError("build_walk requires n >= 1");
    if (!(horizon >= 0.0)) throw DomainError("build_walk requires horizon >= 0");
    if (n > max_samples)
        throw CapacityError("walk base index " + std::to_string(n) + " exceeds max_samples " +
                            std::to_string(max_samples));

    // Find the final index first; the loop is cheap and draws nothing, so a
    // capacity overrun aborts before any random state is consumed.
    std::uint64_t last = n;
    double h = 0.0;
    while (h < horizon) {
        ++last;
        if (last > max_samples)
            throw CapacityError("walk to harmonic time " + std::to_string(horizon) + " from n = " +
                                std::to_string(n) + " needs more than max_samples = " +
                                std::to_string(max_samples) + " steps");
        h += 1.0 / static_cast<double>(last);
    }

    std::vector<double> xs(last);
    for (auto& x : xs) x = sample(spec, rng);
    return build_walk_from(xs, n);
}

namespace {

double lerp_at(std::span<const double> times, std::span<const double> values, double t,
               const char* what) {
    if (times.empty()) throw DomainError(std::string(what) + ": empty path");
    if (!(t >= times.front()) || !(t <= times.back()))
        throw DomainError(std::string(what) + ": time " + std::to_string(t) + " outside [" +
                          std::to_string(times.front()) + ", " + std::to_string(times.back()) + "]");
    const auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.end()) return values.back();
    const std::size_t hi = static_cast<std::size_t>(it - times.begin());
    const std::size_t lo = hi - 1;
    const double w = (t - times[lo]) / (times[hi] - times[lo]);
    return values[lo] + w * (values[hi] - values[lo]);
}

}  // namespace

double eval_path(const EmbeddedPath& path, double t) {
    return lerp_at(path.knot_times, path.knot_values, t, "eval_path");
}

double eval_grid(const GridPath& path, double t) {
    return lerp_at(path.times, path.values, t, "eval_grid");
}

GridPath brownian_transform(const EmbeddedPath& path) {
    if (path.knot_times.empty()) throw DomainError("brownian_transform: empty path");
    GridPath out;
    out.times.reserve(path.knot_times.size());
    out.values.reserve(path.knot_times.size());
    for (std::size_t k = 0; k < path.knot_times.size(); ++k) {
        const double u = std::exp(path.knot_times[k]);
        out.times.push_back(u);
        out.values.push_back(std::sqrt(u) * path.knot_values[k]);
    }
    return out;
}

}  // namespace selfnorm
