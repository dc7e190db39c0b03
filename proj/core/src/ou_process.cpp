#include "selfnorm/ou_process.hpp"

#include <cmath>
#include <string>

#include "selfnorm/errors.hpp"

namespace selfnorm {

namespace {

void require_increasing(std::span<const double> grid, const char* what) {
    if (grid.empty()) throw DomainError(std::string(what) + ": empty grid");
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw DomainError(std::string(what) + ": grid must be strictly increasing");
}

}  // namespace

double ou_cov(double s, double t) { return std::exp(-0.5 * std::fabs(t - s)); }

GridPath sample_ou(std::span<const double> grid, RngStream& rng) {
    require_increasing(grid, "sample_ou");
    GridPath out;
    out.times.assign(grid.begin(), grid.end());
    out.values.resize(grid.size());
    double y = rng.normal();
    out.values[0] = y;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        const double rho = std::exp(-0.5 * (grid[i] - grid[i - 1]));
        y = rho * y + std::sqrt(1.0 - rho * rho) * rng.normal();
        out.values[i] = y;
    }
    return out;
}

GridPath sample_bm(std::span<const double> grid, RngStream& rng) {
    require_increasing(grid, "sample_bm");
    if (grid.front() != 0.0) throw DomainError("sample_bm: grid must start at 0");
    GridPath out;
    out.times.assign(grid.begin(), grid.end());
    out.values.resize(grid.size());
    double w = 0.0;
    out.values[0] = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        w += std::sqrt(grid[i] - grid[i - 1]) * rng.normal();
        out.values[i] = w;
    }
    return out;
}

std::vector<double> uniform_grid(double a, double b, double step) {
    if (!(step > 0.0)) throw DomainError("uniform_grid: step must be > 0");
    if (!(b > a)) throw DomainError("uniform_grid: needs b > a");
    const double span = b - a;
    auto count = static_cast<std::uint64_t>(std::ceil(span / step - 1e-9));
    if (count == 0) count = 1;
    std::vector<double> grid;
    grid.reserve(count + 1);
    for (std::uint64_t i = 0; i < count; ++i) {
        const double t = a + static_cast<double>(i) * step;
        if (t >= b) break;
        grid.push_back(t);
    }
    grid.push_back(b);
    return grid;
}

}  // namespace selfnorm
