#include "selfnorm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "selfnorm/errors.hpp"
#include "selfnorm/ou_process.hpp"

namespace selfnorm {

double RunningStat::std_error() const {
    if (count_ == 0) return 0.0;
    return std::sqrt(variance() / static_cast<double>(count_));
}

McReport make_mc_report(double estimate, double std_error, double target,
                        std::uint64_t n_reps, double z_threshold) {
    McReport report;
    report.estimate = estimate;
    report.std_error = std_error;
    report.target = target;
    report.n_reps = n_reps;
    const double gap = estimate - target;
    const double floor = 1e-12 * std::max(1.0, std::fabs(target));
    if (std::fabs(gap) <= floor) {
        report.z = 0.0;
    } else if (std_error > 0.0) {
        report.z = gap / std_error;
    } else {
        report.z = std::copysign(std::numeric_limits<double>::infinity(), gap);
    }
    report.pass = std::fabs(report.z) <= z_threshold;
    return report;
}

McReport summarize(std::span<const double> values, double target, double z_threshold) {
    RunningStat acc;
    for (const double v : values) acc.add(v);
    return make_mc_report(acc.mean(), acc.std_error(), target, acc.count(), z_threshold);
}

KsResult ks_two_sample(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) throw DomainError("ks_two_sample: empty sample");
    std::vector<double> sa(a.begin(), a.end());
    std::vector<double> sb(b.begin(), b.end());
    std::sort(sa.begin(), sa.end());
    std::sort(sb.begin(), sb.end());

    const double n1 = static_cast<double>(sa.size());
    const double n2 = static_cast<double>(sb.size());
    std::size_t ia = 0, ib = 0;
    double stat = 0.0;
    while (ia < sa.size() && ib < sb.size()) {
        const double x = std::min(sa[ia], sb[ib]);
        while (ia < sa.size() && sa[ia] == x) ++ia;
        while (ib < sb.size() && sb[ib] == x) ++ib;
        stat = std::max(stat, std::fabs(static_cast<double>(ia) / n1 - static_cast<double>(ib) / n2));
    }

    KsResult result;
    result.statistic = stat;
    result.n1 = sa.size();
    result.n2 = sb.size();
    result.critical_5pct = 1.358 * std::sqrt((n1 + n2) / (n1 * n2));
    result.reject = stat > result.critical_5pct;
    return result;
}

KsResult compare_functional(std::span<const double> arm_a, std::span<const double> arm_b) {
    return ks_two_sample(arm_a, arm_b);
}

namespace {

void check_moment_args(const DistributionSpec& spec, std::uint64_t reps) {
    spec.validate();
    if (reps == 0) throw DomainError("moment check needs reps >= 1");
}

}  // namespace

std::vector<double> b2_terms(const DistributionSpec& spec, std::uint64_t j, std::uint64_t reps,
                             std::uint64_t seed, const EngineOptions& opts) {
    check_moment_args(spec, reps);
    if (j == 0) throw DomainError("check_b2 needs j >= 1");
    return replicate(reps, seed, 0, [&spec, j](RngStream& rng, std::uint64_t) {
        WalkState state;
        for (std::uint64_t i = 0; i < j; ++i) state = step(state, sample(spec, rng));
        const double x = sample(spec, rng);
        return x * x / (state.sum_sq + x * x);
    }, opts);
}

std::vector<double> cross_moment_terms(const DistributionSpec& spec, std::uint64_t j,
                                       std::uint64_t k, std::uint64_t reps, std::uint64_t seed,
                                       const EngineOptions& opts) {
    check_moment_args(spec, reps);
    if (j == 0 || k <= j) throw DomainError("check_cross_moment needs 1 <= j < k");
    return replicate(reps, seed, 0, [&spec, j, k](RngStream& rng, std::uint64_t) {
        WalkState state;
        for (std::uint64_t i = 0; i < j; ++i) state = step(state, sample(spec, rng));
        double x = sample(spec, rng);
        state = step(state, x);
        const double first = x * x / state.sum_sq;
        while (state.count < k) state = step(state, sample(spec, rng));
        x = sample(spec, rng);
        state = step(state, x);
        const double second = x * x / state.sum_sq;
        return first * second;
    }, opts);
}

std::vector<double> a4_terms(const DistributionSpec& spec, std::uint64_t n, std::uint64_t reps,
                             std::uint64_t seed, const EngineOptions& opts) {
    check_moment_args(spec, reps);
    if (n == 0) throw DomainError("check_a4 needs n >= 1");
    return replicate(reps, seed, 0, [&spec, n](RngStream& rng, std::uint64_t) {
        double sum_sq = 0.0;
        double sum_q = 0.0;
        for (std::uint64_t i = 0; i < n; ++i) {
            const double x = sample(spec, rng);
            const double x2 = x * x;
            sum_sq += x2;
            sum_q += x2 * x2;
        }
        return sum_q / (sum_sq * sum_sq);
    }, opts);
}

double a4_target(const DistributionSpec& spec) {
    return spec.kind == DistKind::StableSym ? 1.0 - spec.alpha / 2.0 : 0.0;
}

McReport check_b2(const DistributionSpec& spec, std::uint64_t j, std::uint64_t reps,
                  std::uint64_t seed, const EngineOptions& opts, double z_threshold) {
    const auto terms = b2_terms(spec, j, reps, seed, opts);
    return summarize(terms, 1.0 / static_cast<double>(j + 1), z_threshold);
}

McReport check_cross_moment(const DistributionSpec& spec, std::uint64_t j, std::uint64_t k,
                            std::uint64_t reps, std::uint64_t seed,
                            const EngineOptions& opts, double z_threshold) {
    const auto terms = cross_moment_terms(spec, j, k, reps, seed, opts);
    const double target = 1.0 / (static_cast<double>(j + 1) * static_cast<double>(k + 1));
    return summarize(terms, target, z_threshold);
}

McReport check_a4(const DistributionSpec& spec, std::uint64_t n, std::uint64_t reps,
                  std::uint64_t seed, const EngineOptions& opts, double z_threshold) {
    const auto terms = a4_terms(spec, n, reps, seed, opts);
    return summarize(terms, a4_target(spec), z_threshold);
}

McReport empirical_cov_values(std::span<const double> a, std::span<const double> b,
                              double target, double z_threshold) {
    if (a.size() != b.size()) throw DomainError("empirical_cov: arm size mismatch");
    if (a.size() < 2) throw DomainError("empirical_cov needs at least 2 pairs");
    RunningStat mean_a, mean_b, products;
    for (std::size_t i = 0; i < a.size(); ++i) {
        mean_a.add(a[i]);
        mean_b.add(b[i]);
        products.add(a[i] * b[i]);
    }
    double cross = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        cross += (a[i] - mean_a.mean()) * (b[i] - mean_b.mean());
    const double cov = cross / static_cast<double>(a.size() - 1);
    return make_mc_report(cov, products.std_error(), target, a.size(), z_threshold);
}

namespace {

template <class Path>
McReport cov_of_paths(std::span<const Path> paths, double s, double t, double z_threshold,
                      double (*eval)(const Path&, double)) {
    if (paths.size() < 2) throw DomainError("empirical_cov needs at least 2 paths");
    std::vector<double> at_s(paths.size()), at_t(paths.size());
    for (std::size_t i = 0; i < paths.size(); ++i) {
        at_s[i] = eval(paths[i], s);
        at_t[i] = eval(paths[i], t);
    }
    return empirical_cov_values(at_s, at_t, ou_cov(s, t), z_threshold);
}

}  // namespace

McReport empirical_cov(std::span<const EmbeddedPath> paths, double s, double t, double z_threshold) {
    return cov_of_paths(paths, s, t, z_threshold, &eval_path);
}

McReport empirical_cov(std::span<const GridPath> paths, double s, double t, double z_threshold) {
    return cov_of_paths(paths, s, t, z_threshold, &eval_grid);
}

}  // namespace selfnorm
