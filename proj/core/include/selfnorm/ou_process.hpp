#pragma once

#include <span>

#include "selfnorm/rng.hpp"
#include "selfnorm/walk.hpp"

namespace selfnorm {

// Stationary covariance exp(-|t - s| / 2).
double ou_cov(double s, double t);

// Exact draw of the stationary mean-reverting Gaussian reference process on
// the given strictly increasing grid: N(0,1) start, then the AR(1) update
// y' = rho y + sqrt(1 - rho^2) z with rho = exp(-gap / 2).  No discretization
// error at the grid points.
GridPath sample_ou(std::span<const double> grid, RngStream& rng);

// Standard Brownian motion on a strictly increasing grid starting at 0.
GridPath sample_bm(std::span<const double> grid, RngStream& rng);

// Inclusive grid a, a+step, ..., b (the last point is snapped to b exactly).
std::vector<double> uniform_grid(double a, double b, double step);

}  // namespace selfnorm
