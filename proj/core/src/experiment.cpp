#include "selfnorm/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <set>

#include <nlohmann/json.hpp>

#include "selfnorm/csv.hpp"
#include "selfnorm/errors.hpp"
#include "selfnorm/functionals.hpp"
#include "selfnorm/ou_process.hpp"
#include "selfnorm/version.hpp"

namespace selfnorm {

namespace fs = std::filesystem;
using json = nlohmann::json;

namespace {

// Collects emitted files so the manifest can list them even after an abort.
struct Outputs {
    fs::path dir;
    std::vector<std::string> files;

    void values(const std::string& name, std::span<const double> data, std::uint64_t bins) {
        write_value_csv(dir / name, data);
        files.push_back(name);
        const std::string hist = name.substr(0, name.size() - 4) + ".hist.csv";
        write_histogram_csv(dir / hist, build_histogram(data, bins));
        files.push_back(hist);
    }

    void values_plain(const std::string& name, std::span<const double> data) {
        write_value_csv(dir / name, data);
        files.push_back(name);
    }

    void walk_path(const std::string& name, const EmbeddedPath& path) {
        write_embedded_path_csv(dir / name, path);
        files.push_back(name);
    }

    void grid_path(const std::string& name, const GridPath& path) {
        write_grid_path_csv(dir / name, path);
        files.push_back(name);
    }
};

std::string short_num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

CheckRecord mc_record(std::string name, const McReport& report, bool pass, bool gating) {
    CheckRecord rec;
    rec.name = std::move(name);
    rec.kind = "mc";
    rec.mc = report;
    rec.pass = pass;
    rec.gating = gating;
    return rec;
}

CheckRecord ks_record(std::string name, const KsResult& ks, double bound, bool gating) {
    CheckRecord rec;
    rec.name = std::move(name);
    rec.kind = "ks";
    rec.ks = ks;
    rec.pass = ks.statistic <= bound;
    rec.gating = gating;
    rec.params.emplace_back("stat_bound", bound);
    return rec;
}

// ===== moment =====

void run_moment(const ExperimentConfig& config, Outputs& out, std::vector<CheckRecord>& checks) {
    const EngineOptions opts{config.workers};
    switch (*config.check) {
        case MomentCheck::B2: {
            const auto terms = b2_terms(config.dist, config.j, config.reps, config.seed, opts);
            const auto report =
                summarize(terms, 1.0 / static_cast<double>(config.j + 1), config.z_threshold);
            out.values("terms.csv", terms, config.bins);
            auto rec = mc_record("b2", report, report.pass, true);
            rec.params.emplace_back("j", static_cast<double>(config.j));
            checks.push_back(std::move(rec));
            break;
        }
        case MomentCheck::Cross: {
            const auto terms =
                cross_moment_terms(config.dist, config.j, config.k, config.reps, config.seed, opts);
            const double target =
                1.0 / (static_cast<double>(config.j + 1) * static_cast<double>(config.k + 1));
            const auto report = summarize(terms, target, config.z_threshold);
            out.values("terms.csv", terms, config.bins);
            auto rec = mc_record("cross_moment", report, report.pass, true);
            rec.params.emplace_back("j", static_cast<double>(config.j));
            rec.params.emplace_back("k", static_cast<double>(config.k));
            checks.push_back(std::move(rec));
            break;
        }
        case MomentCheck::A4: {
            const auto terms = a4_terms(config.dist, config.n, config.reps, config.seed, opts);
            const auto report = summarize(terms, a4_target(config.dist), config.z_threshold);
            out.values("terms.csv", terms, config.bins);
            if (config.dist.kind == DistKind::StableSym) {
                // Finite-n convergence to a nondegenerate limit: judged by an
                // absolute tolerance, not by the studentized gap.
                const bool pass = std::fabs(report.estimate - report.target) <= config.stat_bound;
                auto rec = mc_record("a4_stable", report, pass, true);
                rec.params.emplace_back("n", static_cast<double>(config.n));
                rec.params.emplace_back("alpha", config.dist.alpha);
                rec.params.emplace_back("abs_tol", config.stat_bound);
                checks.push_back(std::move(rec));
            } else {
                // Finite-variance steps drive the statistic to zero; check the
                // decay against a short reference walk instead of a fixed target.
                const std::uint64_t n_small = std::min<std::uint64_t>(10, config.n);
                const auto small_terms =
                    a4_terms(config.dist, n_small, config.reps, config.seed + 1, opts);
                const auto small_report = summarize(small_terms, 0.0, config.z_threshold);
                out.values("terms_small.csv", small_terms, config.bins);

                auto big = mc_record("a4_estimate[n=" + std::to_string(config.n) + "]", report,
                                     true, false);
                auto small = mc_record("a4_estimate[n=" + std::to_string(n_small) + "]",
                                       small_report, true, false);
                CheckRecord decay;
                decay.name = "a4_decay";
                decay.kind = "mc";
                decay.mc = report;
                decay.pass = report.estimate < small_report.estimate / 5.0;
                decay.gating = true;
                decay.detail = "a4(" + std::to_string(config.n) + ") = " +
                               short_num(report.estimate) + " vs a4(" + std::to_string(n_small) +
                               ")/5 = " + short_num(small_report.estimate / 5.0);
                decay.params.emplace_back("n_small", static_cast<double>(n_small));
                decay.params.emplace_back("n_big", static_cast<double>(config.n));
                decay.params.emplace_back("decay_factor", 5.0);
                checks.push_back(std::move(big));
                checks.push_back(std::move(small));
                checks.push_back(std::move(decay));
            }
            break;
        }
    }
}

// ===== ou-convergence =====

void run_ou_convergence(const ExperimentConfig& config, Outputs& out,
                        std::vector<CheckRecord>& checks) {
    const EngineOptions opts{config.workers};
    std::vector<std::pair<double, double>> pairs;
    if (config.s && config.t) {
        pairs = {{*config.s, *config.s}, {*config.t, *config.t}, {*config.s, *config.t}};
    } else {
        pairs = {{0.0, 0.0}, {0.5, 0.5}, {0.0, 1.0}, {0.5, 1.5}};
    }

    std::set<double> time_set;
    for (const auto& [a, b] : pairs) {
        time_set.insert(a);
        time_set.insert(b);
    }
    const std::vector<double> eval_times(time_set.begin(), time_set.end());
    const double horizon = eval_times.back();

    const auto rows = replicate(
        config.reps, config.seed, arm_stream_base(0),
        [&](RngStream& rng, std::uint64_t) {
            const auto walk =
                build_walk(config.dist, config.n, horizon, rng, config.max_samples);
            std::vector<double> at(eval_times.size());
            for (std::size_t i = 0; i < eval_times.size(); ++i)
                at[i] = eval_path(walk.path, eval_times[i]);
            return at;
        },
        opts);

    std::vector<std::vector<double>> columns(eval_times.size(),
                                             std::vector<double>(config.reps));
    for (std::uint64_t r = 0; r < config.reps; ++r)
        for (std::size_t i = 0; i < eval_times.size(); ++i) columns[i][r] = rows[r][i];

    for (std::size_t i = 0; i < eval_times.size(); ++i)
        out.values("values_t" + std::to_string(i) + ".csv", columns[i], config.bins);

    for (const auto& [a, b] : pairs) {
        const auto ia = static_cast<std::size_t>(
            std::lower_bound(eval_times.begin(), eval_times.end(), a) - eval_times.begin());
        const auto ib = static_cast<std::size_t>(
            std::lower_bound(eval_times.begin(), eval_times.end(), b) - eval_times.begin());
        const auto report = empirical_cov_values(columns[ia], columns[ib], ou_cov(a, b),
                                                 config.z_threshold);
        const bool pass = std::fabs(report.estimate - report.target) <= config.stat_bound;
        auto rec = mc_record("cov[" + short_num(a) + "," + short_num(b) + "]", report, pass, true);
        rec.params.emplace_back("s", a);
        rec.params.emplace_back("t", b);
        rec.params.emplace_back("abs_tol", config.stat_bound);
        checks.push_back(std::move(rec));
    }

    // Illustrative paths: replication 0's walk and one reference draw.
    {
        RngStream rng(config.seed, arm_stream_base(0));
        const auto walk = build_walk(config.dist, config.n, horizon, rng, config.max_samples);
        out.walk_path("sample_path_walk.csv", walk.path);
    }
    if (horizon > 0.0) {
        RngStream rng(config.seed, arm_stream_base(1));
        const auto grid = uniform_grid(0.0, horizon, config.grid_step);
        out.grid_path("sample_path_ou.csv", sample_ou(grid, rng));
    }
}

// ===== functional =====

struct FunctionalPlan {
    Transform transform = Transform::Identity;
    WindowMode mode = WindowMode::Mean;
    bool donsker = false;
};

FunctionalPlan plan_for(FunctionalExample example) {
    switch (example) {
        case FunctionalExample::E1a: return {Transform::Identity, WindowMode::Max, false};
        case FunctionalExample::E1b: return {Transform::Identity, WindowMode::Min, false};
        case FunctionalExample::E2a: return {Transform::Identity, WindowMode::Mean, false};
        case FunctionalExample::E2b: return {Transform::Absolute, WindowMode::Mean, false};
        case FunctionalExample::E2c: return {Transform::Square, WindowMode::Mean, false};
        case FunctionalExample::E1pa: return {Transform::Identity, WindowMode::Max, true};
        case FunctionalExample::E1pb: return {Transform::Identity, WindowMode::Min, true};
        case FunctionalExample::E2pa: return {Transform::Identity, WindowMode::Mean, true};
        case FunctionalExample::E2pb: return {Transform::Absolute, WindowMode::Mean, true};
        case FunctionalExample::E2pc: return {Transform::Square, WindowMode::Mean, true};
    }
    return {};
}

double oracle_functional(const GridPath& path, double s, double t, const FunctionalPlan& plan) {
    if (plan.mode == WindowMode::Max) return path_extremum(path, s, t, ExtremumMode::Max);
    if (plan.mode == WindowMode::Min) return path_extremum(path, s, t, ExtremumMode::Min);
    return path_integral(path, s, t, plan.transform);
}

void run_functional(const ExperimentConfig& config, Outputs& out,
                    std::vector<CheckRecord>& checks) {
    const EngineOptions opts{config.workers};
    const FunctionalPlan plan = plan_for(*config.example);
    const double s = config.window_s();
    const double t = config.window_t();
    const std::uint64_t m = config.n;

    std::vector<double> arm_selfnorm;
    std::function<double(RngStream&)> draw_oracle;
    double oracle_s = s, oracle_t = t;

    if (!plan.donsker) {
        const WindowSpec window{s, t, m};
        arm_selfnorm = replicate(
            config.reps, config.seed, arm_stream_base(0),
            [&](RngStream& rng, std::uint64_t) {
                const auto walk = build_walk(config.dist, m, t, rng, config.max_samples);
                return discrete_window_stat(walk.walk_values, window, plan.transform, plan.mode);
            },
            opts);
        const auto grid = uniform_grid(s, t, config.grid_step);
        draw_oracle = [grid, s, t, plan](RngStream& rng) {
            return oracle_functional(sample_ou(grid, rng), s, t, plan);
        };
    } else {
        const auto n_terms =
            static_cast<std::uint64_t>(std::floor(static_cast<double>(m) * std::exp(t)));
        if (n_terms > config.max_samples)
            throw CapacityError("classical-scaling window needs " + std::to_string(n_terms) +
                                " steps, max_samples is " + std::to_string(config.max_samples));
        arm_selfnorm = replicate(
            config.reps, config.seed, arm_stream_base(0),
            [&, n_terms](RngStream& rng, std::uint64_t) {
                std::vector<double> xs(n_terms);
                for (auto& x : xs) x = sample(config.dist, rng);
                return donsker_window_stat(xs, m, t, plan.transform, plan.mode);
            },
            opts);
        // The Brownian oracle is sampled on the matching resolution i/N.
        std::vector<double> grid(n_terms + 1);
        for (std::uint64_t i = 0; i <= n_terms; ++i)
            grid[i] = static_cast<double>(i) / static_cast<double>(n_terms);
        oracle_s = 0.0;
        oracle_t = 1.0;
        draw_oracle = [grid = std::move(grid), plan](RngStream& rng) {
            return oracle_functional(sample_bm(grid, rng), 0.0, 1.0, plan);
        };
    }

    const auto arm_oracle = replicate(
        config.reps, config.seed, arm_stream_base(1),
        [&](RngStream& rng, std::uint64_t) { return draw_oracle(rng); }, opts);

    out.values("arm_selfnorm.csv", arm_selfnorm, config.bins);
    out.values("arm_oracle.csv", arm_oracle, config.bins);

    const auto ks = compare_functional(arm_selfnorm, arm_oracle);
    auto rec = ks_record("ks_" + to_string(*config.example), ks, config.stat_bound, true);
    rec.params.emplace_back("s", oracle_s);
    rec.params.emplace_back("t", oracle_t);
    rec.params.emplace_back("n", static_cast<double>(m));
    checks.push_back(std::move(rec));

    if (config.calibration_reps > 0) {
        const std::uint64_t runs = config.calibration_reps;
        std::uint64_t rejections = 0;
        for (std::uint64_t c = 0; c < runs; ++c) {
            const auto arm_a = replicate(
                config.reps, config.seed, arm_stream_base(2 + 2 * c),
                [&](RngStream& rng, std::uint64_t) { return draw_oracle(rng); }, opts);
            const auto arm_b = replicate(
                config.reps, config.seed, arm_stream_base(3 + 2 * c),
                [&](RngStream& rng, std::uint64_t) { return draw_oracle(rng); }, opts);
            if (ks_two_sample(arm_a, arm_b).reject) ++rejections;
        }
        // At the 5% level a healthy comparison rejects occasionally but not
        // often; demand at least one rejection once the count is large enough
        // to expect one, and at most ceil(12% of runs).
        const std::uint64_t lo = runs >= 20 ? 1 : 0;
        const std::uint64_t hi = std::max<std::uint64_t>(1, (12 * runs + 99) / 100);
        CheckRecord cal;
        cal.name = "calibration";
        cal.kind = "calibration";
        cal.pass = rejections >= lo && rejections <= hi;
        cal.gating = true;
        cal.detail = std::to_string(rejections) + " rejections in " + std::to_string(runs) +
                     " oracle-vs-oracle runs, allowed [" + std::to_string(lo) + ", " +
                     std::to_string(hi) + "]";
        cal.params.emplace_back("runs", static_cast<double>(runs));
        cal.params.emplace_back("rejections", static_cast<double>(rejections));
        cal.params.emplace_back("allowed_lo", static_cast<double>(lo));
        cal.params.emplace_back("allowed_hi", static_cast<double>(hi));
        checks.push_back(std::move(cal));
    }
}

// ===== bm-transform =====

void run_bm_transform(const ExperimentConfig& config, Outputs& out,
                      std::vector<CheckRecord>& checks) {
    const EngineOptions opts{config.workers};
    const double horizon = 1.0;
    const std::vector<double> eval_times = {1.0, 1.7, 2.0, 2.5};
    const std::vector<double> var_times = {1.0, 2.0, 2.5};

    const auto rows = replicate(
        config.reps, config.seed, arm_stream_base(0),
        [&](RngStream& rng, std::uint64_t) {
            const auto walk = build_walk(config.dist, config.n, horizon, rng, config.max_samples);
            const auto bm = brownian_transform(walk.path);
            std::vector<double> at(eval_times.size());
            for (std::size_t i = 0; i < eval_times.size(); ++i)
                at[i] = eval_grid(bm, eval_times[i]);
            return at;
        },
        opts);

    std::vector<std::vector<double>> columns(eval_times.size(),
                                             std::vector<double>(config.reps));
    for (std::uint64_t r = 0; r < config.reps; ++r)
        for (std::size_t i = 0; i < eval_times.size(); ++i) columns[i][r] = rows[r][i];

    for (std::size_t i = 0; i < eval_times.size(); ++i)
        out.values("values_t" + std::to_string(i) + ".csv", columns[i], config.bins);

    // Variance at each probe time should match the Brownian clock.  The
    // tolerance is doubled relative to stat_bound: second-moment estimates
    // carry roughly twice the sampling noise of the correlations below.
    const double var_tol = 2.0 * config.stat_bound;
    for (const double u : var_times) {
        const auto idx = static_cast<std::size_t>(
            std::lower_bound(eval_times.begin(), eval_times.end(), u) - eval_times.begin());
        RunningStat acc;
        for (const double v : columns[idx]) acc.add(v);
        RunningStat centered_sq;
        for (const double v : columns[idx]) {
            const double d = v - acc.mean();
            centered_sq.add(d * d);
        }
        const auto report = make_mc_report(acc.variance(), centered_sq.std_error(), u,
                                           acc.count(), config.z_threshold);
        const bool pass = std::fabs(report.estimate - report.target) <= var_tol;
        auto rec = mc_record("var[" + short_num(u) + "]", report, pass, true);
        rec.params.emplace_back("time", u);
        rec.params.emplace_back("abs_tol", var_tol);
        checks.push_back(std::move(rec));
    }

    // Non-overlapping increments should be uncorrelated.
    std::vector<double> inc_a(config.reps), inc_b(config.reps);
    for (std::uint64_t r = 0; r < config.reps; ++r) {
        inc_a[r] = rows[r][1] - rows[r][0];  // (1, 1.7]
        inc_b[r] = rows[r][3] - rows[r][1];  // (1.7, 2.5]
    }
    out.values_plain("inc_a.csv", inc_a);
    out.values_plain("inc_b.csv", inc_b);
    RunningStat sa, sb;
    for (const double v : inc_a) sa.add(v);
    for (const double v : inc_b) sb.add(v);
    double cross = 0.0;
    for (std::uint64_t r = 0; r < config.reps; ++r)
        cross += (inc_a[r] - sa.mean()) * (inc_b[r] - sb.mean());
    const double corr = cross / (static_cast<double>(config.reps - 1) *
                                 std::sqrt(sa.variance() * sb.variance()));
    const double corr_se = (1.0 - corr * corr) / std::sqrt(static_cast<double>(config.reps));
    const auto report = make_mc_report(corr, corr_se, 0.0, config.reps, config.z_threshold);
    const bool pass = std::fabs(corr) <= config.stat_bound;
    auto rec = mc_record("increment_corr", report, pass, true);
    rec.params.emplace_back("lo", 1.0);
    rec.params.emplace_back("mid", 1.7);
    rec.params.emplace_back("hi", 2.5);
    rec.params.emplace_back("abs_tol", config.stat_bound);
    checks.push_back(std::move(rec));

    RngStream rng(config.seed, arm_stream_base(0));
    const auto walk = build_walk(config.dist, config.n, horizon, rng, config.max_samples);
    out.grid_path("sample_path_bm.csv", brownian_transform(walk.path));
}

// ===== integral-limit-comparison =====

void run_integral_limit(const ExperimentConfig& config, Outputs& out,
                        std::vector<CheckRecord>& checks) {
    const EngineOptions opts{config.workers};
    const double s = *config.s;
    const double t = *config.t;
    const std::uint64_t m = config.n;
    const WindowSpec window{s, t, m};
    const double weight_norm = std::exp(t) - std::exp(s);
    const auto grid = uniform_grid(s, t, config.grid_step);

    const auto arm_discrete = replicate(
        config.reps, config.seed, arm_stream_base(0),
        [&](RngStream& rng, std::uint64_t) {
            const auto walk = build_walk(config.dist, m, t, rng, config.max_samples);
            return discrete_window_stat(walk.walk_values, window, Transform::Identity,
                                        WindowMode::Mean);
        },
        opts);
    const auto arm_plain = replicate(
        config.reps, config.seed, arm_stream_base(1),
        [&](RngStream& rng, std::uint64_t) {
            return path_integral(sample_ou(grid, rng), s, t, Transform::Identity);
        },
        opts);
    const auto arm_weighted = replicate(
        config.reps, config.seed, arm_stream_base(2),
        [&](RngStream& rng, std::uint64_t) {
            return exp_weighted_path_integral(sample_ou(grid, rng), s, t) / weight_norm;
        },
        opts);

    out.values("arm_discrete.csv", arm_discrete, config.bins);
    out.values("arm_integral_plain.csv", arm_plain, config.bins);
    out.values("arm_integral_weighted.csv", arm_weighted, config.bins);

    const auto ks_plain = ks_two_sample(arm_discrete, arm_plain);
    const auto ks_weighted = ks_two_sample(arm_discrete, arm_weighted);
    checks.push_back(ks_record("ks_plain", ks_plain, config.stat_bound, false));
    checks.push_back(ks_record("ks_weighted", ks_weighted, config.stat_bound, false));

    // Oracle-vs-oracle sanity comparison; informational, the verdict gates.
    const auto calib_a = replicate(
        config.reps, config.seed, arm_stream_base(3),
        [&](RngStream& rng, std::uint64_t) {
            return path_integral(sample_ou(grid, rng), s, t, Transform::Identity);
        },
        opts);
    const auto calib_b = replicate(
        config.reps, config.seed, arm_stream_base(4),
        [&](RngStream& rng, std::uint64_t) {
            return path_integral(sample_ou(grid, rng), s, t, Transform::Identity);
        },
        opts);
    out.values_plain("arm_calibration_a.csv", calib_a);
    out.values_plain("arm_calibration_b.csv", calib_b);
    const auto ks_calib = ks_two_sample(calib_a, calib_b);
    auto cal = ks_record("calibration", ks_calib, ks_calib.critical_5pct, false);
    cal.kind = "calibration";
    checks.push_back(std::move(cal));

    const bool match_plain = ks_plain.statistic <= config.stat_bound;
    const bool match_weighted = ks_weighted.statistic <= config.stat_bound;
    std::string verdict;
    if (match_plain && !match_weighted) verdict = "plain";
    else if (match_weighted && !match_plain) verdict = "weighted";
    else if (match_plain && match_weighted) verdict = "ambiguous";
    else verdict = "neither";

    CheckRecord rec;
    rec.name = "verdict";
    rec.kind = "verdict";
    rec.pass = match_plain != match_weighted;
    rec.gating = true;
    rec.detail = verdict;
    rec.params.emplace_back("ks_plain", ks_plain.statistic);
    rec.params.emplace_back("ks_weighted", ks_weighted.statistic);
    rec.params.emplace_back("stat_bound", config.stat_bound);
    checks.push_back(std::move(rec));
}

// ===== report / manifest writers =====

json record_to_json(const CheckRecord& rec) {
    json r;
    r["name"] = rec.name;
    r["kind"] = rec.kind;
    r["pass"] = rec.pass;
    r["gating"] = rec.gating;
    if (rec.kind == "mc") {
        r["estimate"] = rec.mc.estimate;
        r["std_error"] = rec.mc.std_error;
        r["target"] = rec.mc.target;
        r["z"] = std::isfinite(rec.mc.z) ? json(rec.mc.z) : json(nullptr);
        r["n_reps"] = rec.mc.n_reps;
        r["z_pass"] = rec.mc.pass;
    } else if (rec.kind == "ks" || rec.kind == "calibration") {
        if (rec.ks.n1 != 0) {
            r["statistic"] = rec.ks.statistic;
            r["critical_5pct"] = rec.ks.critical_5pct;
            r["reject_5pct"] = rec.ks.reject;
            r["n1"] = rec.ks.n1;
            r["n2"] = rec.ks.n2;
        }
    }
    if (!rec.detail.empty()) r["detail"] = rec.detail;
    if (!rec.params.empty()) {
        json params;
        for (const auto& [key, value] : rec.params) params[key] = value;
        r["params"] = params;
    }
    return r;
}

void write_report(const fs::path& dir, const ExperimentConfig& config,
                  const std::vector<CheckRecord>& checks, std::vector<std::string>& files) {
    json report;
    report["experiment"] = to_string(config.experiment);
    report["dist"] = config.dist.to_string();
    report["records"] = json::array();
    for (const auto& rec : checks) report["records"].push_back(record_to_json(rec));
    bool all = true;
    for (const auto& rec : checks)
        if (rec.gating && !rec.pass) all = false;
    report["all_pass"] = all;

    std::ofstream out(dir / "report.json", std::ios::binary | std::ios::trunc);
    out << report.dump(2) << '\n';
    files.push_back("report.json");
}

void write_manifest(const fs::path& dir, const RunManifest& manifest) {
    json m;
    m["version"] = manifest.version;
    m["experiment"] = manifest.experiment;
    m["config"] = manifest.config_text;
    // Wall time stays out of the file so reruns are byte-identical.
    m["checks"] = json::array();
    for (const auto& rec : manifest.checks) {
        json c;
        c["name"] = rec.name;
        c["pass"] = rec.pass;
        c["gating"] = rec.gating;
        m["checks"].push_back(c);
    }
    m["files"] = manifest.files;
    m["all_pass"] = manifest.all_pass;
    m["aborted"] = manifest.aborted;
    if (!manifest.error.empty()) m["error"] = manifest.error;

    std::ofstream out(dir / "manifest.json", std::ios::binary | std::ios::trunc);
    out << m.dump(2) << '\n';
}

}  // namespace

RunManifest run_experiment(const ExperimentConfig& config) {
    validate_config(config);
    const fs::path dir(config.out_dir);
    fs::create_directories(dir);

    RunManifest manifest;
    manifest.version = kVersion;
    manifest.experiment = to_string(config.experiment);
    manifest.config_text = serialize_config(config);

    const auto started = std::chrono::steady_clock::now();
    auto elapsed = [&started] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    };

    Outputs out{dir, {}};
    try {
        switch (config.experiment) {
            case ExperimentKind::Moment: run_moment(config, out, manifest.checks); break;
            case ExperimentKind::OuConvergence: run_ou_convergence(config, out, manifest.checks); break;
            case ExperimentKind::Functional: run_functional(config, out, manifest.checks); break;
            case ExperimentKind::BmTransform: run_bm_transform(config, out, manifest.checks); break;
            case ExperimentKind::IntegralLimitComparison:
                run_integral_limit(config, out, manifest.checks);
                break;
        }
    } catch (const std::exception& err) {
        manifest.aborted = true;
        manifest.error = err.what();
        manifest.files = out.files;
        manifest.all_pass = false;
        manifest.wall_time_seconds = elapsed();
        write_manifest(dir, manifest);
        throw;
    }

    write_report(dir, config, manifest.checks, out.files);
    manifest.files = out.files;
    manifest.all_pass = true;
    for (const auto& rec : manifest.checks)
        if (rec.gating && !rec.pass) manifest.all_pass = false;
    manifest.wall_time_seconds = elapsed();
    write_manifest(dir, manifest);
    return manifest;
}

}  // namespace selfnorm
