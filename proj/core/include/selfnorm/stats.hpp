#pragma once

#include <cstdint>
#include <span>

#include "selfnorm/distribution.hpp"
#include "selfnorm/engine.hpp"
#include "selfnorm/walk.hpp"

namespace selfnorm {

// Numerically stable running mean / variance (Welford).  Feeding it a constant
// sequence keeps the mean exactly equal to that constant and the variance at
// exactly zero, which the degenerate Rademacher identities rely on.
class RunningStat {
public:
    void add(double x) {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }
    std::uint64_t count() const { return count_; }
    double mean() const { return mean_; }
    double variance() const { return count_ > 1 ? m2_ / static_cast<double>(count_ - 1) : 0.0; }
    double std_error() const;

private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

// Monte Carlo estimate against a known target.  z is the studentized gap
// (estimate - target) / std_error, floored to 0 when the gap is within
// 1e-12 * max(1, |target|) so exact identities report z = 0 even with a zero
// standard error; a zero standard error with a real gap gives an infinite z.
struct McReport {
    double estimate = 0.0;
    double std_error = 0.0;
    double target = 0.0;
    double z = 0.0;
    std::uint64_t n_reps = 0;
    bool pass = false;  // |z| <= threshold
};

McReport make_mc_report(double estimate, double std_error, double target,
                        std::uint64_t n_reps, double z_threshold = 4.0);
McReport summarize(std::span<const double> values, double target, double z_threshold = 4.0);

// Two-sample Kolmogorov-Smirnov distance with the asymptotic 5% critical
// value 1.358 * sqrt((n1 + n2) / (n1 * n2)).  Tied values are handled by
// advancing both empirical CDFs past each distinct point together.
struct KsResult {
    double statistic = 0.0;
    std::size_t n1 = 0;
    std::size_t n2 = 0;
    double critical_5pct = 0.0;
    bool reject = false;
};

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b);

// Same computation, named for its role: arm A is the walk functional sample,
// arm B the reference-process functional sample.
KsResult compare_functional(std::span<const double> arm_a, std::span<const double> arm_b);

// ===== moment identity checks =====
//
// Each runs `reps` independent replications (stream r of the given seed) and
// summarizes against the exact finite-n target.  The *_terms forms return the
// raw per-replication values for CSV output and custom summaries.

std::vector<double> b2_terms(const DistributionSpec& spec, std::uint64_t j, std::uint64_t reps,
                             std::uint64_t seed, const EngineOptions& opts = {});
std::vector<double> cross_moment_terms(const DistributionSpec& spec, std::uint64_t j,
                                       std::uint64_t k, std::uint64_t reps, std::uint64_t seed,
                                       const EngineOptions& opts = {});
std::vector<double> a4_terms(const DistributionSpec& spec, std::uint64_t n, std::uint64_t reps,
                             std::uint64_t seed, const EngineOptions& opts = {});

// Limit of n * E[ X_n^4 / V_n^4 ]: 1 - alpha/2 for stable steps, 0 otherwise.
double a4_target(const DistributionSpec& spec);

// E[ X_{j+1}^2 / V_{j+1}^2 ] = 1 / (j + 1).
McReport check_b2(const DistributionSpec& spec, std::uint64_t j, std::uint64_t reps,
                  std::uint64_t seed, const EngineOptions& opts = {}, double z_threshold = 4.0);

// E[ (X_{j+1}^2 / V_{j+1}^2) (X_{k+1}^2 / V_{k+1}^2) ] = 1 / ((j+1)(k+1)) for j < k.
McReport check_cross_moment(const DistributionSpec& spec, std::uint64_t j, std::uint64_t k,
                            std::uint64_t reps, std::uint64_t seed,
                            const EngineOptions& opts = {}, double z_threshold = 4.0);

// n * E[ X_n^4 / V_n^4 ], estimated by the exchangeable sum form
// sum_i X_i^4 / V_n^4, which is unbiased for the same quantity and bounded in
// [0, 1].  Target 1 - alpha/2 for stable steps, 0 (pure decay) otherwise.
McReport check_a4(const DistributionSpec& spec, std::uint64_t n, std::uint64_t reps,
                  std::uint64_t seed, const EngineOptions& opts = {}, double z_threshold = 4.0);

// Sample covariance of paired values against a fixed target; the standard
// error comes from the sample variance of the products.
McReport empirical_cov_values(std::span<const double> a, std::span<const double> b,
                              double target, double z_threshold = 4.0);

// Covariance of path values at clock times s and t against exp(-|t-s|/2).
McReport empirical_cov(std::span<const EmbeddedPath> paths, double s, double t,
                       double z_threshold = 4.0);
McReport empirical_cov(std::span<const GridPath> paths, double s, double t,
                       double z_threshold = 4.0);

}  // namespace selfnorm
