#include "selfnorm/config.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <vector>

#include "selfnorm/csv.hpp"
#include "selfnorm/errors.hpp"

namespace selfnorm {

namespace {

struct NamePair {
    std::string_view text;
    int value;
};

constexpr NamePair kExperimentNames[] = {
    {"ou-convergence", static_cast<int>(ExperimentKind::OuConvergence)},
    {"functional", static_cast<int>(ExperimentKind::Functional)},
    {"moment", static_cast<int>(ExperimentKind::Moment)},
    {"bm-transform", static_cast<int>(ExperimentKind::BmTransform)},
    {"integral-limit-comparison", static_cast<int>(ExperimentKind::IntegralLimitComparison)},
};

constexpr NamePair kExampleNames[] = {
    {"1a", static_cast<int>(FunctionalExample::E1a)},
    {"1b", static_cast<int>(FunctionalExample::E1b)},
    {"2a", static_cast<int>(FunctionalExample::E2a)},
    {"2b", static_cast<int>(FunctionalExample::E2b)},
    {"2c", static_cast<int>(FunctionalExample::E2c)},
    {"1pa", static_cast<int>(FunctionalExample::E1pa)},
    {"1pb", static_cast<int>(FunctionalExample::E1pb)},
    {"2pa", static_cast<int>(FunctionalExample::E2pa)},
    {"2pb", static_cast<int>(FunctionalExample::E2pb)},
    {"2pc", static_cast<int>(FunctionalExample::E2pc)},
};

constexpr NamePair kCheckNames[] = {
    {"b2", static_cast<int>(MomentCheck::B2)},
    {"cross", static_cast<int>(MomentCheck::Cross)},
    {"a4", static_cast<int>(MomentCheck::A4)},
};

template <std::size_t N>
int lookup(const NamePair (&table)[N], std::string_view text, const char* what) {
    for (const auto& entry : table)
        if (entry.text == text) return entry.value;
    std::string options;
    for (const auto& entry : table) {
        if (!options.empty()) options += '|';
        options += entry.text;
    }
    throw ConfigError(std::string("unknown ") + what + " '" + std::string(text) + "' (expected " +
                      options + ")");
}

template <std::size_t N>
std::string_view reverse_lookup(const NamePair (&table)[N], int value) {
    for (const auto& entry : table)
        if (entry.value == value) return entry.text;
    return table[0].text;
}

std::string_view trim(std::string_view text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) return {};
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
}

[[noreturn]] void fail_line(std::size_t line_no, const std::string& msg) {
    throw ConfigError("config line " + std::to_string(line_no) + ": " + msg);
}

std::uint64_t parse_u64(std::string_view value, std::size_t line_no, std::string_view key) {
    const std::string text(value);
    try {
        std::size_t used = 0;
        if (!text.empty() && text[0] == '-') throw std::invalid_argument(text);
        const unsigned long long parsed = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return parsed;
    } catch (const std::exception&) {
        fail_line(line_no, "malformed integer for '" + std::string(key) + "': '" + text + "'");
    }
}

double parse_f64(std::string_view value, std::size_t line_no, std::string_view key) {
    const std::string text(value);
    try {
        std::size_t used = 0;
        const double parsed = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(parsed)) throw std::invalid_argument(text);
        return parsed;
    } catch (const std::exception&) {
        fail_line(line_no, "malformed number for '" + std::string(key) + "': '" + text + "'");
    }
}

bool parse_bool(std::string_view value, std::size_t line_no, std::string_view key) {
    if (value == "true") return true;
    if (value == "false") return false;
    fail_line(line_no, "malformed boolean for '" + std::string(key) + "': '" + std::string(value) +
                           "' (expected true|false)");
}

}  // namespace

std::string to_string(ExperimentKind kind) {
    return std::string(reverse_lookup(kExperimentNames, static_cast<int>(kind)));
}
std::string to_string(FunctionalExample example) {
    return std::string(reverse_lookup(kExampleNames, static_cast<int>(example)));
}
std::string to_string(MomentCheck check) {
    return std::string(reverse_lookup(kCheckNames, static_cast<int>(check)));
}

ExperimentKind parse_experiment_kind(std::string_view text) {
    return static_cast<ExperimentKind>(lookup(kExperimentNames, text, "experiment"));
}
FunctionalExample parse_functional_example(std::string_view text) {
    return static_cast<FunctionalExample>(lookup(kExampleNames, text, "example"));
}
MomentCheck parse_moment_check(std::string_view text) {
    return static_cast<MomentCheck>(lookup(kCheckNames, text, "check"));
}

ExperimentConfig parse_config(std::string_view text) {
    ExperimentConfig config;
    std::set<std::string> seen;
    bool have_experiment = false;
    bool have_dist = false;
    bool have_reps = false;
    bool have_seed = false;

    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? text.size() - pos
                                                                               : eol - pos);
        pos = (eol == std::string_view::npos) ? text.size() + 1 : eol + 1;
        ++line_no;

        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            fail_line(line_no, "expected 'key = value', got '" + std::string(line) + "'");
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (key.empty()) fail_line(line_no, "missing key before '='");
        if (value.empty()) fail_line(line_no, "missing value for '" + key + "'");
        if (!seen.insert(key).second) fail_line(line_no, "duplicate key '" + key + "'");

        try {
            if (key == "experiment") {
                config.experiment = parse_experiment_kind(value);
                have_experiment = true;
            } else if (key == "example") {
                config.example = parse_functional_example(value);
            } else if (key == "check") {
                config.check = parse_moment_check(value);
            } else if (key == "dist") {
                config.dist = DistributionSpec::parse(value);
                have_dist = true;
            } else if (key == "n") {
                config.n = parse_u64(value, line_no, key);
            } else if (key == "s") {
                config.s = parse_f64(value, line_no, key);
            } else if (key == "t") {
                config.t = parse_f64(value, line_no, key);
            } else if (key == "j") {
                config.j = parse_u64(value, line_no, key);
            } else if (key == "k") {
                config.k = parse_u64(value, line_no, key);
            } else if (key == "reps") {
                config.reps = parse_u64(value, line_no, key);
                have_reps = true;
            } else if (key == "seed") {
                config.seed = parse_u64(value, line_no, key);
                have_seed = true;
            } else if (key == "grid_step") {
                config.grid_step = parse_f64(value, line_no, key);
            } else if (key == "stat_bound") {
                config.stat_bound = parse_f64(value, line_no, key);
            } else if (key == "z_threshold") {
                config.z_threshold = parse_f64(value, line_no, key);
            } else if (key == "calibration_reps") {
                config.calibration_reps = parse_u64(value, line_no, key);
            } else if (key == "max_samples") {
                config.max_samples = parse_u64(value, line_no, key);
            } else if (key == "bins") {
                config.bins = parse_u64(value, line_no, key);
            } else if (key == "workers") {
                config.workers = value == "auto"
                                     ? 0
                                     : static_cast<unsigned>(parse_u64(value, line_no, key));
            } else if (key == "deterministic") {
                config.deterministic = parse_bool(value, line_no, key);
            } else if (key == "out_dir") {
                config.out_dir = std::string(value);
            } else {
                fail_line(line_no, "unknown key '" + key + "'");
            }
        } catch (const ConfigError& err) {
            // Re-tag parse errors from nested parsers with the line number.
            const std::string what = err.what();
            if (what.rfind("config line", 0) == 0) throw;
            fail_line(line_no, what);
        }
    }

    if (!have_experiment) throw ConfigError("missing required key 'experiment'");
    if (!have_dist) throw ConfigError("missing required key 'dist'");
    if (!have_reps) throw ConfigError("missing required key 'reps'");
    if (!have_seed) throw ConfigError("missing required key 'seed'");
    validate_config(config);
    return config;
}

void validate_config(const ExperimentConfig& config) {
    config.dist.validate();
    if (config.reps == 0) throw ConfigError("'reps' must be >= 1");
    if (!(config.grid_step > 0.0)) throw ConfigError("'grid_step' must be > 0");
    if (!(config.stat_bound > 0.0)) throw ConfigError("'stat_bound' must be > 0");
    if (!(config.z_threshold > 0.0)) throw ConfigError("'z_threshold' must be > 0");
    if (config.bins == 0) throw ConfigError("'bins' must be >= 1");
    if (config.max_samples == 0) throw ConfigError("'max_samples' must be >= 1");
    if (config.out_dir.empty()) throw ConfigError("'out_dir' must not be empty");
    if (config.reps >= (1ULL << 40)) throw ConfigError("'reps' must be below 2^40");

    if (config.s && !(*config.s >= 0.0)) throw ConfigError("'s' must be >= 0");
    if (config.s && config.t && !(*config.s <= *config.t)) throw ConfigError("'s' must be <= 't'");

    const bool needs_n = config.experiment != ExperimentKind::Moment ||
                         (config.check && *config.check == MomentCheck::A4);
    if (needs_n && config.n == 0)
        throw ConfigError("'n' is required for " + to_string(config.experiment) +
                          (config.check ? " check " + to_string(*config.check) : std::string()));

    switch (config.experiment) {
        case ExperimentKind::Moment:
            if (!config.check)
                throw ConfigError("'check' is required for moment (b2|cross|a4)");
            if (*config.check == MomentCheck::B2 && config.j == 0)
                throw ConfigError("'j' must be >= 1 for check b2");
            if (*config.check == MomentCheck::Cross && (config.j == 0 || config.k <= config.j))
                throw ConfigError("check cross needs 1 <= j < k");
            break;
        case ExperimentKind::Functional:
            if (!config.example)
                throw ConfigError("'example' is required for functional (1a..2c, 1pa..2pc)");
            if (!(config.window_t() > config.window_s()))
                throw ConfigError("functional window needs t > s");
            break;
        case ExperimentKind::IntegralLimitComparison:
            if (!config.s || !config.t)
                throw ConfigError("'s' and 't' are required for integral-limit-comparison");
            if (!(*config.t > *config.s))
                throw ConfigError("integral-limit-comparison needs t > s");
            break;
        case ExperimentKind::OuConvergence:
            if (config.s.has_value() != config.t.has_value())
                throw ConfigError("ou-convergence needs both 's' and 't' or neither");
            break;
        case ExperimentKind::BmTransform:
            break;
    }
}

std::string serialize_config(const ExperimentConfig& config) {
    std::ostringstream out;
    out << "experiment = " << to_string(config.experiment) << '\n';
    if (config.example) out << "example = " << to_string(*config.example) << '\n';
    if (config.check) out << "check = " << to_string(*config.check) << '\n';
    out << "dist = " << config.dist.to_string() << '\n';
    if (config.n != 0) out << "n = " << config.n << '\n';
    if (config.s) out << "s = " << fmt_double(*config.s) << '\n';
    if (config.t) out << "t = " << fmt_double(*config.t) << '\n';
    if (config.check && *config.check != MomentCheck::A4) {
        out << "j = " << config.j << '\n';
        if (*config.check == MomentCheck::Cross) out << "k = " << config.k << '\n';
    }
    out << "reps = " << config.reps << '\n';
    out << "seed = " << config.seed << '\n';
    out << "grid_step = " << fmt_double(config.grid_step) << '\n';
    out << "stat_bound = " << fmt_double(config.stat_bound) << '\n';
    out << "z_threshold = " << fmt_double(config.z_threshold) << '\n';
    out << "calibration_reps = " << config.calibration_reps << '\n';
    out << "max_samples = " << config.max_samples << '\n';
    out << "bins = " << config.bins << '\n';
    if (config.workers == 0)
        out << "workers = auto\n";
    else
        out << "workers = " << config.workers << '\n';
    out << "deterministic = " << (config.deterministic ? "true" : "false") << '\n';
    out << "out_dir = " << config.out_dir << '\n';
    return out.str();
}

}  // namespace selfnorm
