#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "selfnorm/walk.hpp"

namespace selfnorm {

// Shortest-faithful text form of a double ("%.17g"), used by every CSV writer
// so reruns are byte-identical.
std::string fmt_double(double v);

// Single column under the header "value".
void write_value_csv(const std::filesystem::path& file, std::span<const double> values);

// Two columns with caller-chosen headers.
void write_pairs_csv(const std::filesystem::path& file, std::span<const double> a,
                     std::span<const double> b, const std::string& header_a,
                     const std::string& header_b);

// Embedded path rows: l,time,value with l the raw walk index of the knot.
void write_embedded_path_csv(const std::filesystem::path& file, const EmbeddedPath& path);

// Grid path rows: time,value.
void write_grid_path_csv(const std::filesystem::path& file, const GridPath& path);

// Equal-width histogram over [min, max] of the sample.
struct Histogram {
    std::vector<double> bin_left;
    std::vector<double> bin_right;
    std::vector<std::uint64_t> count;
    std::vector<double> density;
};

Histogram build_histogram(std::span<const double> values, std::uint64_t bins);

// Rows: bin_left,bin_right,count,density.
void write_histogram_csv(const std::filesystem::path& file, const Histogram& hist);

}  // namespace selfnorm
