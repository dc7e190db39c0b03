#include "selfnorm/distribution.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "selfnorm/errors.hpp"

namespace selfnorm {

void DistributionSpec::validate() const {
    if (!(scale > 0.0) || !std::isfinite(scale))
        throw ConfigError("distribution scale must be finite and > 0, got " + std::to_string(scale));
    if (kind == DistKind::StableSym) {
        if (!(alpha > 0.0) || !(alpha <= 2.0) || !std::isfinite(alpha))
            throw ConfigError("stable alpha must lie in (0, 2], got " + std::to_string(alpha));
    }
}

DistributionSpec DistributionSpec::parse(std::string_view text) {
    DistributionSpec spec;
    if (text == "normal") {
        spec.kind = DistKind::Normal;
    } else if (text == "rademacher") {
        spec.kind = DistKind::Rademacher;
    } else if (text == "uniform") {
        spec.kind = DistKind::UniformSym;
    } else if (text == "pareto2") {
        spec.kind = DistKind::ParetoSym2;
    } else if (text.rfind("stable:", 0) == 0) {
        spec.kind = DistKind::StableSym;
        const std::string arg(text.substr(7));
        try {
            std::size_t used = 0;
            spec.alpha = std::stod(arg, &used);
            if (used != arg.size()) throw std::invalid_argument(arg);
        } catch (const std::exception&) {
            throw ConfigError("could not parse stable alpha from '" + arg + "'");
        }
    } else {
        throw ConfigError("unknown distribution '" + std::string(text) +
                          "' (expected normal|rademacher|uniform|pareto2|stable:<alpha>)");
    }
    spec.validate();
    return spec;
}

std::string DistributionSpec::to_string() const {
    switch (kind) {
        case DistKind::Normal: return "normal";
        case DistKind::Rademacher: return "rademacher";
        case DistKind::UniformSym: return "uniform";
        case DistKind::ParetoSym2: return "pareto2";
        case DistKind::StableSym: {
            char buf[40];
            std::snprintf(buf, sizeof buf, "stable:%.17g", alpha);
            return buf;
        }
    }
    return "normal";
}

double sample_stable(double alpha, RngStream& rng) {
    const double theta = std::numbers::pi * (rng.uniform01() - 0.5);
    if (alpha == 1.0) return std::tan(theta);
    const double w = rng.exponential();
    const double a_theta = alpha * theta;
    // Chambers-Mallows-Stuck in the symmetric case.
    return std::sin(a_theta) / std::pow(std::cos(theta), 1.0 / alpha) *
           std::pow(std::cos(theta - a_theta) / w, (1.0 - alpha) / alpha);
}

double sample(const DistributionSpec& spec, RngStream& rng) {
    double x = 0.0;
    do {
        switch (spec.kind) {
            case DistKind::Normal:
                x = spec.scale * rng.normal();
                break;
            case DistKind::Rademacher:
                return spec.scale * rng.rademacher();
            case DistKind::UniformSym:
                x = spec.scale * (2.0 * rng.uniform01() - 1.0);
                break;
            case DistKind::ParetoSym2:
                // P(|X| > x) = (x / scale)^-2 for x >= scale, inverse CDF of the tail.
                x = rng.rademacher() * spec.scale / std::sqrt(rng.uniform_pos());
                break;
            case DistKind::StableSym:
                x = spec.scale * sample_stable(spec.alpha, rng);
                break;
        }
    } while (x == 0.0);  // point mass at 0 must stay empty; an exact zero is a rounding artifact
    return x;
}

}  // namespace selfnorm
