#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "selfnorm/distribution.hpp"

namespace selfnorm {

enum class ExperimentKind {
    OuConvergence,
    Functional,
    Moment,
    BmTransform,
    IntegralLimitComparison,
};

// Which functional pair to compare.  1a/1b are windowed extrema, 2a/2b/2c
// windowed means (identity / absolute / square) on the harmonic clock; the
// p-variants are the classical-scaling versions matched against Brownian
// motion functionals on [0, 1].
enum class FunctionalExample { E1a, E1b, E2a, E2b, E2c, E1pa, E1pb, E2pa, E2pb, E2pc };

enum class MomentCheck { B2, Cross, A4 };

std::string to_string(ExperimentKind kind);
std::string to_string(FunctionalExample example);
std::string to_string(MomentCheck check);
ExperimentKind parse_experiment_kind(std::string_view text);
FunctionalExample parse_functional_example(std::string_view text);
MomentCheck parse_moment_check(std::string_view text);

struct ExperimentConfig {
    ExperimentKind experiment = ExperimentKind::Moment;
    std::optional<FunctionalExample> example;
    std::optional<MomentCheck> check;
    DistributionSpec dist;
    std::uint64_t n = 0;
    std::optional<double> s;
    std::optional<double> t;
    std::uint64_t j = 1;
    std::uint64_t k = 2;
    std::uint64_t reps = 0;
    std::uint64_t seed = 0;
    double grid_step = 0.005;
    double stat_bound = 0.05;
    double z_threshold = 4.0;
    std::uint64_t calibration_reps = 0;
    std::uint64_t max_samples = 10'000'000;
    std::uint64_t bins = 50;
    unsigned workers = 0;  // 0 = auto
    bool deterministic = true;
    std::string out_dir = "out";

    double window_s() const { return s.value_or(0.0); }
    double window_t() const { return t.value_or(1.0); }
};

// Parses "key = value" lines; '#' starts a comment, blank lines are skipped.
// Unknown keys, duplicates and malformed values raise ConfigError with the
// line number.  The result has already passed validate_config.
ExperimentConfig parse_config(std::string_view text);

// Canonical text form; parse_config(serialize_config(c)) round-trips.
std::string serialize_config(const ExperimentConfig& config);

// Experiment-specific requirements (which fields must be set, ranges).
// Throws ConfigError naming the offending key.
void validate_config(const ExperimentConfig& config);

}  // namespace selfnorm
