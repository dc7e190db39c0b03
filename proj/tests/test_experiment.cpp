#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "selfnorm/errors.hpp"
#include "selfnorm/experiment.hpp"

using namespace selfnorm;
namespace fs = std::filesystem;

namespace {

fs::path out_root() {
    static const fs::path root = fs::path("experiment_test_out");
    fs::create_directories(root);
    return root;
}

std::string slurp(const fs::path& file) {
    std::ifstream in(file, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

const CheckRecord* find_check(const RunManifest& manifest, const std::string& name) {
    for (const auto& rec : manifest.checks)
        if (rec.name == name) return &rec;
    return nullptr;
}

std::size_t line_count(const std::string& text) {
    std::size_t lines = 0;
    for (const char c : text)
        if (c == '\n') ++lines;
    return lines;
}

ExperimentConfig base_config(ExperimentKind kind, const std::string& out_name) {
    ExperimentConfig config;
    config.experiment = kind;
    config.seed = 2026;
    config.out_dir = (out_root() / out_name).string();
    return config;
}

}  // namespace

TEST_CASE("moment b2 run writes terms, report and manifest") {
    auto config = base_config(ExperimentKind::Moment, "moment_b2");
    config.check = MomentCheck::B2;
    config.dist.kind = DistKind::Rademacher;
    config.j = 3;
    config.reps = 200;

    const auto manifest = run_experiment(config);
    CHECK(manifest.all_pass);
    CHECK_FALSE(manifest.aborted);
    CHECK(manifest.experiment == "moment");
    CHECK(manifest.version == std::string("0.1.0"));

    const auto* b2 = find_check(manifest, "b2");
    REQUIRE(b2 != nullptr);
    CHECK(b2->mc.z == 0.0);
    CHECK(b2->mc.estimate == 0.25);

    const fs::path dir(config.out_dir);
    for (const char* name : {"terms.csv", "terms.hist.csv", "report.json", "manifest.json"})
        CHECK(fs::exists(dir / name));

    const auto terms = slurp(dir / "terms.csv");
    CHECK(line_count(terms) == config.reps + 1);
    CHECK(terms.rfind("value\n", 0) == 0);
    CHECK(terms.find("0.25\n") != std::string::npos);

    for (const auto& file : manifest.files) CHECK(fs::exists(dir / file));

    const auto report = nlohmann::json::parse(slurp(dir / "report.json"));
    CHECK(report["all_pass"] == true);
    CHECK(report["records"].size() == manifest.checks.size());
}

TEST_CASE("moment a4 decays for finite-variance steps") {
    auto config = base_config(ExperimentKind::Moment, "moment_a4_decay");
    config.check = MomentCheck::A4;
    config.dist.kind = DistKind::Normal;
    config.n = 400;
    config.reps = 400;

    const auto manifest = run_experiment(config);
    CHECK(manifest.all_pass);
    const auto* decay = find_check(manifest, "a4_decay");
    REQUIRE(decay != nullptr);
    CHECK(decay->gating);
    CHECK(decay->pass);
    const auto* big = find_check(manifest, "a4_estimate[n=400]");
    REQUIRE(big != nullptr);
    CHECK_FALSE(big->gating);
    // Closed form for normal steps: 3 / (n + 2).
    CHECK(std::fabs(big->mc.estimate - 3.0 / 402.0) <= 0.002);
    CHECK(fs::exists(fs::path(config.out_dir) / "terms_small.csv"));
}

TEST_CASE("moment a4 hits the stable limit") {
    auto config = base_config(ExperimentKind::Moment, "moment_a4_stable");
    config.check = MomentCheck::A4;
    config.dist.kind = DistKind::StableSym;
    config.dist.alpha = 1.0;
    config.n = 300;
    config.reps = 2000;

    const auto manifest = run_experiment(config);
    const auto* rec = find_check(manifest, "a4_stable");
    REQUIRE(rec != nullptr);
    CHECK(rec->mc.target == 0.5);
    CHECK(std::fabs(rec->mc.estimate - 0.5) <= 0.05);
    CHECK(manifest.all_pass);
}

TEST_CASE("ou-convergence matches the covariance kernel") {
    auto config = base_config(ExperimentKind::OuConvergence, "ou_convergence");
    config.dist.kind = DistKind::Normal;
    config.n = 150;
    config.reps = 4000;

    const auto manifest = run_experiment(config);
    CHECK(manifest.all_pass);
    CHECK(manifest.checks.size() == 4);  // default probe pairs
    for (const auto& rec : manifest.checks)
        CHECK(std::fabs(rec.mc.estimate - rec.mc.target) <= 0.05);

    const fs::path dir(config.out_dir);
    CHECK(fs::exists(dir / "sample_path_walk.csv"));
    CHECK(fs::exists(dir / "sample_path_ou.csv"));
    CHECK(fs::exists(dir / "values_t0.csv"));
    CHECK(fs::exists(dir / "values_t3.csv"));

    const auto walk_csv = slurp(dir / "sample_path_walk.csv");
    CHECK(walk_csv.rfind("l,time,value\n", 0) == 0);
    const auto ou_csv = slurp(dir / "sample_path_ou.csv");
    CHECK(ou_csv.rfind("time,value\n", 0) == 0);
}

TEST_CASE("ou-convergence honors an explicit pair") {
    auto config = base_config(ExperimentKind::OuConvergence, "ou_convergence_pair");
    config.dist.kind = DistKind::Rademacher;
    config.n = 150;
    config.reps = 3000;
    config.s = 0.25;
    config.t = 1.0;

    const auto manifest = run_experiment(config);
    CHECK(manifest.checks.size() == 3);
    const auto* cross = find_check(manifest, "cov[0.25,1]");
    REQUIRE(cross != nullptr);
    CHECK(cross->mc.target == doctest::Approx(std::exp(-0.375)).epsilon(1e-12));
    CHECK(manifest.all_pass);
}

TEST_CASE("functional example run compares the two arms") {
    auto config = base_config(ExperimentKind::Functional, "functional_1a");
    config.example = FunctionalExample::E1a;
    config.dist.kind = DistKind::Normal;
    config.n = 300;
    config.reps = 600;
    config.grid_step = 0.01;
    config.stat_bound = 0.09;  // smoke-sized arms carry more KS noise
    config.calibration_reps = 5;

    const auto manifest = run_experiment(config);
    CHECK(manifest.all_pass);
    const auto* ks = find_check(manifest, "ks_1a");
    REQUIRE(ks != nullptr);
    CHECK(ks->ks.n1 == 600);
    CHECK(ks->ks.statistic <= 0.09);
    const auto* cal = find_check(manifest, "calibration");
    REQUIRE(cal != nullptr);
    CHECK(cal->params.size() == 4);

    const fs::path dir(config.out_dir);
    for (const char* name : {"arm_selfnorm.csv", "arm_oracle.csv", "arm_selfnorm.hist.csv",
                             "arm_oracle.hist.csv"})
        CHECK(fs::exists(dir / name));

    const auto hist = slurp(dir / "arm_selfnorm.hist.csv");
    CHECK(hist.rfind("bin_left,bin_right,count,density\n", 0) == 0);
}

TEST_CASE("classical-scaling functional runs against Brownian motion") {
    auto config = base_config(ExperimentKind::Functional, "functional_2pc");
    config.example = FunctionalExample::E2pc;
    config.dist.kind = DistKind::UniformSym;
    config.n = 200;
    config.reps = 600;
    config.stat_bound = 0.09;

    const auto manifest = run_experiment(config);
    const auto* ks = find_check(manifest, "ks_2pc");
    REQUIRE(ks != nullptr);
    CHECK(manifest.all_pass);
}

TEST_CASE("integral-limit comparison resolves on a wide window") {
    auto config = base_config(ExperimentKind::IntegralLimitComparison, "integral_wide");
    config.dist.kind = DistKind::Normal;
    config.n = 400;
    config.s = 0.0;
    config.t = 2.0;
    config.reps = 800;
    config.grid_step = 0.01;
    config.stat_bound = 0.09;

    const auto manifest = run_experiment(config);
    const auto* verdict = find_check(manifest, "verdict");
    REQUIRE(verdict != nullptr);
    // On a window of length 2 the exponentially weighted candidate wins clearly.
    CHECK(verdict->detail == "weighted");
    CHECK(verdict->pass);
    CHECK(manifest.all_pass);

    const auto* plain = find_check(manifest, "ks_plain");
    REQUIRE(plain != nullptr);
    CHECK_FALSE(plain->gating);
    CHECK(plain->ks.statistic > 0.09);

    const fs::path dir(config.out_dir);
    for (const char* name : {"arm_discrete.csv", "arm_integral_plain.csv",
                             "arm_integral_weighted.csv", "arm_calibration_a.csv"})
        CHECK(fs::exists(dir / name));
}

TEST_CASE("bm-transform matches Brownian marginals") {
    auto config = base_config(ExperimentKind::BmTransform, "bm_transform");
    config.dist.kind = DistKind::Normal;
    config.n = 200;
    config.reps = 3000;

    const auto manifest = run_experiment(config);
    CHECK(manifest.all_pass);
    const auto* var1 = find_check(manifest, "var[1]");
    REQUIRE(var1 != nullptr);
    CHECK(std::fabs(var1->mc.estimate - 1.0) <= 0.1);
    const auto* corr = find_check(manifest, "increment_corr");
    REQUIRE(corr != nullptr);
    CHECK(std::fabs(corr->mc.estimate) <= 0.05);
    CHECK(fs::exists(fs::path(config.out_dir) / "sample_path_bm.csv"));
}

TEST_CASE("capacity overruns abort with a partial manifest") {
    auto config = base_config(ExperimentKind::Functional, "capacity_abort");
    config.example = FunctionalExample::E1a;
    config.dist.kind = DistKind::Normal;
    config.n = 1000;
    config.t = 12.0;  // needs about 1.6e8 draws, the cap is 1e7
    config.s = 0.0;
    config.reps = 10;

    CHECK_THROWS_AS(run_experiment(config), CapacityError);

    const fs::path dir(config.out_dir);
    REQUIRE(fs::exists(dir / "manifest.json"));
    CHECK_FALSE(fs::exists(dir / "arm_selfnorm.csv"));
    CHECK_FALSE(fs::exists(dir / "report.json"));
    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["aborted"] == true);
    CHECK(manifest["all_pass"] == false);
    const std::string error = manifest["error"];
    CHECK(error.find("max_samples") != std::string::npos);
}

TEST_CASE("invalid configs are rejected before any output appears") {
    auto config = base_config(ExperimentKind::Functional, "never_created");
    config.dist.kind = DistKind::Normal;
    config.n = 100;
    config.reps = 10;
    // no example set
    CHECK_THROWS_AS(run_experiment(config), ConfigError);
    CHECK_FALSE(fs::exists(fs::path(config.out_dir)));
}

TEST_CASE("outputs are byte-identical across worker counts and reruns") {
    auto config = base_config(ExperimentKind::Functional, "det_w1");
    config.example = FunctionalExample::E1b;
    config.dist.kind = DistKind::ParetoSym2;
    config.n = 120;
    config.reps = 300;
    config.grid_step = 0.02;
    config.stat_bound = 0.2;
    config.calibration_reps = 2;
    config.workers = 1;

    auto config4 = config;
    config4.out_dir = (out_root() / "det_w4").string();
    config4.workers = 4;
    auto config_re = config;
    config_re.out_dir = (out_root() / "det_re").string();

    const auto m1 = run_experiment(config);
    const auto m4 = run_experiment(config4);
    const auto mre = run_experiment(config_re);
    CHECK(m1.all_pass == m4.all_pass);

    REQUIRE(m1.files == m4.files);
    REQUIRE(m1.files == mre.files);
    for (const auto& name : m1.files) {
        const auto a = slurp(fs::path(config.out_dir) / name);
        const auto b = slurp(fs::path(config4.out_dir) / name);
        const auto c = slurp(fs::path(config_re.out_dir) / name);
        if (a != b) FAIL("worker-count difference in ", name);
        if (a != c) FAIL("rerun difference in ", name);
    }

    // Manifests agree once the embedded config (out_dir, workers) is ignored.
    auto ja = nlohmann::json::parse(slurp(fs::path(config.out_dir) / "manifest.json"));
    auto jb = nlohmann::json::parse(slurp(fs::path(config4.out_dir) / "manifest.json"));
    ja.erase("config");
    jb.erase("config");
    CHECK(ja.dump() == jb.dump());
}

TEST_CASE("manifest lists exactly the files on disk") {
    auto config = base_config(ExperimentKind::Moment, "manifest_files");
    config.check = MomentCheck::Cross;
    config.dist.kind = DistKind::UniformSym;
    config.j = 1;
    config.k = 3;
    config.reps = 50;

    const auto manifest = run_experiment(config);
    const fs::path dir(config.out_dir);
    std::size_t on_disk = 0;
    for (const auto& entry : fs::directory_iterator(dir)) {
        const auto name = entry.path().filename().string();
        if (name == "manifest.json") continue;
        ++on_disk;
        CHECK(std::find(manifest.files.begin(), manifest.files.end(), name) !=
              manifest.files.end());
    }
    CHECK(on_disk == manifest.files.size());
}
