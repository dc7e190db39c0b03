#pragma once

#include <string>
#include <string_view>

#include "selfnorm/rng.hpp"

namespace selfnorm {

enum class DistKind {
    Normal,
    Rademacher,
    UniformSym,
    ParetoSym2,
    StableSym,
};

// A symmetric step distribution for the random walk.
//
// All kinds are symmetric about zero and assign probability zero to the point
// {0}.  Normal, Rademacher, UniformSym and ParetoSym2 have finite variance
// (ParetoSym2 sits right on the edge: tail index 2, so the fourth moment and
// even E|X|^2 log-moments start to misbehave, which is exactly why it is
// interesting here).  StableSym has infinite variance for alpha < 2.
struct DistributionSpec {
    DistKind kind = DistKind::Normal;
    double alpha = 2.0;  // only meaningful for StableSym, in (0, 2]
    double scale = 1.0;  // must be > 0

    // Throws ConfigError on out-of-range parameters.
    void validate() const;

    // True for the finite-variance kinds whose self-normalized walks have the
    // full set of limit guarantees.
    bool finite_variance() const { return kind != DistKind::StableSym || alpha == 2.0; }

    // Text forms: "normal", "rademacher", "uniform", "pareto2", "stable:<alpha>".
    static DistributionSpec parse(std::string_view text);
    std::string to_string() const;
};

// One draw from the spec.  Redraws on a representable exact zero so the walk's
// running sum of squares is strictly increasing.
double sample(const DistributionSpec& spec, RngStream& rng);

// Symmetric alpha-stable draw (Chambers-Mallows-Stuck), unit scale.
// alpha = 2 gives a centered normal with variance 2 under this convention.
double sample_stable(double alpha, RngStream& rng);

}  // namespace selfnorm
