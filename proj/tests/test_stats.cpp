#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>
#include <vector>

#include "selfnorm/engine.hpp"
#include "selfnorm/errors.hpp"
#include "selfnorm/ou_process.hpp"
#include "selfnorm/stats.hpp"

using namespace selfnorm;

namespace {

DistributionSpec make(DistKind kind, double alpha = 2.0) {
    DistributionSpec spec;
    spec.kind = kind;
    spec.alpha = alpha;
    return spec;
}

}  // namespace

TEST_CASE("RunningStat reproduces hand sums") {
    RunningStat acc;
    for (const double v : {1.0, 2.0, 3.0, 4.0}) acc.add(v);
    CHECK(acc.count() == 4);
    CHECK(acc.mean() == 2.5);
    CHECK(acc.variance() == doctest::Approx(1.6666666666666667).epsilon(1e-15));
    CHECK(acc.std_error() == doctest::Approx(0.6454972243679028).epsilon(1e-15));
}

TEST_CASE("RunningStat is exact on constant input") {
    RunningStat acc;
    const double v = 1.0 / 3.0;
    for (int i = 0; i < 1000; ++i) acc.add(v);
    CHECK(acc.mean() == v);
    CHECK(acc.variance() == 0.0);
    CHECK(acc.std_error() == 0.0);
}

TEST_CASE("make_mc_report floors z on negligible gaps") {
    const auto exact = make_mc_report(1.0 + 5e-13, 0.0, 1.0, 100);
    CHECK(exact.z == 0.0);
    CHECK(exact.pass);

    const auto broken = make_mc_report(1.0 + 1e-6, 0.0, 1.0, 100);
    CHECK(std::isinf(broken.z));
    CHECK(broken.z > 0.0);
    CHECK_FALSE(broken.pass);

    const auto usual = make_mc_report(1.1, 0.05, 1.0, 100);
    CHECK(usual.z == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(usual.pass);

    const auto edge = make_mc_report(1.2, 0.05, 1.0, 100);
    CHECK(edge.z == doctest::Approx(4.0).epsilon(1e-9));
    CHECK(edge.pass);  // the threshold is inclusive

    const auto outside = make_mc_report(1.21, 0.05, 1.0, 100);
    CHECK_FALSE(outside.pass);
}

TEST_CASE("summarize studentizes against the target") {
    std::vector<double> values(10000);
    RngStream rng(71, 0);
    for (auto& v : values) v = 3.0 + 0.5 * rng.normal();
    const auto report = summarize(values, 3.0);
    CHECK(report.n_reps == values.size());
    CHECK(std::fabs(report.estimate - 3.0) <= 4.0 * report.std_error);
    CHECK(report.std_error == doctest::Approx(0.005).epsilon(0.1));
    CHECK(report.pass);
}

TEST_CASE("ks_two_sample hand values") {
    const std::vector<double> a = {1.0, 2.0, 3.0, 4.0};
    const std::vector<double> b = {2.0, 3.0, 4.0, 5.0};
    const auto ks = ks_two_sample(a, b);
    CHECK(ks.statistic == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(ks.n1 == 4);
    CHECK(ks.n2 == 4);
    CHECK(ks.critical_5pct == doctest::Approx(0.9602510088513316).epsilon(1e-15));
    CHECK_FALSE(ks.reject);

    CHECK(ks_two_sample(a, a).statistic == 0.0);

    const std::vector<double> lo = {1.0, 2.0};
    const std::vector<double> hi = {3.0, 4.0};
    CHECK(ks_two_sample(lo, hi).statistic == 1.0);

    const std::vector<double> ta = {1.0, 1.0, 2.0};
    const std::vector<double> tb = {1.0, 2.0, 2.0};
    CHECK(ks_two_sample(ta, tb).statistic == doctest::Approx(1.0 / 3.0).epsilon(1e-15));

    CHECK_THROWS_AS(ks_two_sample(std::vector<double>{}, a), DomainError);
}

TEST_CASE("ks statistic is symmetric and invariant under monotone maps") {
    RngStream rng(72, 0);
    std::vector<double> a(500), b(400);
    for (auto& v : a) v = rng.normal();
    for (auto& v : b) v = 0.2 + rng.normal();
    const auto direct = ks_two_sample(a, b);
    const auto flipped = ks_two_sample(b, a);
    CHECK(direct.statistic == flipped.statistic);

    auto cube = [](std::vector<double> v) {
        for (auto& x : v) x = x * x * x;
        return v;
    };
    const auto mapped = ks_two_sample(cube(a), cube(b));
    CHECK(mapped.statistic == direct.statistic);

    // 4000-vs-4000 critical value used throughout the experiment configs.
    std::vector<double> big(4000, 0.0);
    const auto crit = ks_two_sample(big, big);
    CHECK(crit.critical_5pct == doctest::Approx(0.030365803134447148).epsilon(1e-12));
}

TEST_CASE("standard error shrinks like the square root of the sample size") {
    RngStream rng(73, 0);
    std::vector<double> small(5000), large(20000);
    for (auto& v : small) v = rng.normal();
    for (auto& v : large) v = rng.normal();
    const double ratio = summarize(small, 0.0).std_error / summarize(large, 0.0).std_error;
    CHECK(ratio == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("replicate fills slots independently of the worker count") {
    auto job = [](RngStream& rng, std::uint64_t) {
        double acc = 0.0;
        const int draws = 1 + static_cast<int>(rng.next_u64() % 7);
        for (int i = 0; i < draws; ++i) acc += rng.normal();
        return acc;
    };
    const auto serial = replicate(500, 99, 0, job, EngineOptions{1});
    const auto parallel = replicate(500, 99, 0, job, EngineOptions{4});
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) CHECK(serial[i] == parallel[i]);
}

TEST_CASE("replicate hands each replication its own stream") {
    const auto ids = replicate(100, 5, 1ULL << 40, [](RngStream& rng, std::uint64_t) {
        return static_cast<double>(rng.stream_id());
    });
    for (std::size_t i = 0; i < ids.size(); ++i)
        CHECK(ids[i] == static_cast<double>((1ULL << 40) + i));
}

TEST_CASE("replicate propagates the first worker exception") {
    auto boom = [](RngStream&, std::uint64_t rep) -> double {
        if (rep == 17) throw DomainError("boom");
        return 0.0;
    };
    CHECK_THROWS_AS(replicate(100, 1, 0, boom, EngineOptions{4}), DomainError);
    CHECK_THROWS_AS(replicate(100, 1, 0, boom, EngineOptions{1}), DomainError);
}

TEST_CASE("check_b2 matches the exact identity for a degenerate walk") {
    const auto report = check_b2(make(DistKind::Rademacher), 3, 100, 7);
    CHECK(report.estimate == 0.25);
    CHECK(report.std_error == 0.0);
    CHECK(report.z == 0.0);
    CHECK(report.pass);
}

TEST_CASE("check_b2 is unbiased for continuous steps") {
    const auto report = check_b2(make(DistKind::Normal), 1, 20000, 11);
    CHECK(report.target == 0.5);
    CHECK(std::fabs(report.z) <= 4.0);
    const auto pareto = check_b2(make(DistKind::ParetoSym2), 4, 20000, 11);
    CHECK(pareto.target == 0.2);
    CHECK(std::fabs(pareto.z) <= 4.0);
}

TEST_CASE("check_cross_moment factorizes for degenerate and continuous walks") {
    const auto exact = check_cross_moment(make(DistKind::Rademacher), 2, 5, 50, 3);
    CHECK(std::fabs(exact.estimate - 1.0 / 18.0) <= 1e-12);
    CHECK(exact.std_error <= 1e-12);
    CHECK(exact.z == 0.0);
    CHECK(exact.pass);

    const auto normal = check_cross_moment(make(DistKind::Normal), 1, 2, 20000, 13);
    CHECK(normal.target == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
    CHECK(std::fabs(normal.z) <= 4.0);

    CHECK_THROWS_AS(check_cross_moment(make(DistKind::Normal), 2, 2, 10, 1), DomainError);
}

TEST_CASE("check_a4 agrees with the closed form for normal steps") {
    // For normal steps the sum-form statistic has mean exactly 3/(n+2).
    const auto report = check_a4(make(DistKind::Normal), 10, 20000, 17);
    CHECK(std::fabs(report.estimate - 0.25) <= 0.01);
    CHECK(report.target == 0.0);  // finite-variance family reports raw decay

    const auto rad = check_a4(make(DistKind::Rademacher), 50, 100, 19);
    CHECK(rad.estimate == 0.02);  // exactly n / n^2
    CHECK(rad.std_error == 0.0);

    const auto stable = check_a4(make(DistKind::StableSym, 1.0), 300, 2000, 23);
    CHECK(stable.target == 0.5);
    CHECK(std::fabs(stable.estimate - 0.5) <= 0.05);
}

TEST_CASE("empirical_cov_values hand case") {
    const std::vector<double> a = {1.0, 2.0, 3.0};
    const std::vector<double> b = {2.0, 4.0, 6.0};
    const auto report = empirical_cov_values(a, b, 2.0);
    CHECK(report.estimate == 2.0);
    CHECK(report.std_error == doctest::Approx(4.666666666666666).epsilon(1e-14));
    CHECK(report.z == 0.0);
    CHECK(report.pass);

    const std::vector<double> one{1.0};
    CHECK_THROWS_AS(empirical_cov_values(a, one, 0.0), DomainError);
    CHECK_THROWS_AS(empirical_cov_values(one, one, 0.0), DomainError);
}

TEST_CASE("empirical_cov recovers the kernel from reference paths") {
    const auto grid = uniform_grid(0.0, 1.0, 0.05);
    std::vector<GridPath> paths(20000);
    for (std::size_t r = 0; r < paths.size(); ++r) {
        RngStream rng(74, r);
        paths[r] = sample_ou(grid, rng);
    }
    const auto report = empirical_cov(std::span<const GridPath>(paths), 0.0, 1.0);
    CHECK(report.target == doctest::Approx(0.6065306597126334).epsilon(1e-15));
    CHECK(std::fabs(report.estimate - report.target) <= 0.05);
    CHECK(std::fabs(report.z) <= 4.0);
}
