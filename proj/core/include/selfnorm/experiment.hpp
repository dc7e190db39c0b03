#pragma once

#include <string>
#include <utility>
#include <vector>

#include "selfnorm/config.hpp"
#include "selfnorm/stats.hpp"

namespace selfnorm {

// One named check inside a run: either a Monte Carlo moment comparison or a
// two-sample distribution comparison.  `gating` marks checks whose pass flag
// feeds the run verdict; informational records (raw estimates with no fixed
// target, per-candidate match indicators) do not gate.
struct CheckRecord {
    std::string name;
    std::string kind;   // "mc", "ks", "calibration", "verdict"
    bool pass = false;
    bool gating = true;
    McReport mc;        // meaningful when kind == "mc"
    KsResult ks;        // meaningful when kind == "ks"
    std::string detail; // free-form extras (verdict text, calibration counts)
    std::vector<std::pair<std::string, double>> params;  // named numeric extras
};

struct RunManifest {
    std::string version;
    std::string experiment;
    std::string config_text;  // canonical serialized config
    double wall_time_seconds = 0.0;  // in-memory only, never serialized
    std::vector<CheckRecord> checks;
    std::vector<std::string> files;  // emitted files, relative to out_dir
    bool all_pass = false;           // conjunction over gating checks
    bool aborted = false;
    std::string error;
};

// Runs the configured experiment, writing per-arm CSVs, histograms,
// report.json and manifest.json into config.out_dir.  On an abort the partial
// manifest (aborted = true, error message) is still written before the
// exception propagates.
RunManifest run_experiment(const ExperimentConfig& config);

}  // namespace selfnorm
