#include "selfnorm/csv.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "selfnorm/errors.hpp"

namespace selfnorm {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& file) {
    std::ofstream out(file, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + file.string() + " for writing");
    return out;
}

}  // namespace

void write_value_csv(const std::filesystem::path& file, std::span<const double> values) {
    auto out = open_out(file);
    out << "value\n";
    for (const double v : values) out << fmt_double(v) << '\n';
}

void write_pairs_csv(const std::filesystem::path& file, std::span<const double> a,
                     std::span<const double> b, const std::string& header_a,
                     const std::string& header_b) {
    if (a.size() != b.size()) throw DomainError("write_pairs_csv: column size mismatch");
    auto out = open_out(file);
    out << header_a << ',' << header_b << '\n';
    for (std::size_t i = 0; i < a.size(); ++i)
        out << fmt_double(a[i]) << ',' << fmt_double(b[i]) << '\n';
}

void write_embedded_path_csv(const std::filesystem::path& file, const EmbeddedPath& path) {
    auto out = open_out(file);
    out << "l,time,value\n";
    for (std::size_t k = 0; k < path.knot_times.size(); ++k)
        out << (path.base_n + k) << ',' << fmt_double(path.knot_times[k]) << ','
            << fmt_double(path.knot_values[k]) << '\n';
}

void write_grid_path_csv(const std::filesystem::path& file, const GridPath& path) {
    auto out = open_out(file);
    out << "time,value\n";
    for (std::size_t k = 0; k < path.times.size(); ++k)
        out << fmt_double(path.times[k]) << ',' << fmt_double(path.values[k]) << '\n';
}

Histogram build_histogram(std::span<const double> values, std::uint64_t bins) {
    if (bins == 0) throw DomainError("build_histogram: needs bins >= 1");
    if (values.empty()) throw DomainError("build_histogram: empty sample");
    const auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it, hi = *hi_it;
    if (lo == hi) {  // degenerate sample: one unit-mass bin around the point
        lo -= 0.5;
        hi += 0.5;
    }
    const double width = (hi - lo) / static_cast<double>(bins);

    Histogram hist;
    hist.bin_left.resize(bins);
    hist.bin_right.resize(bins);
    hist.count.assign(bins, 0);
    hist.density.resize(bins);
    for (std::uint64_t b = 0; b < bins; ++b) {
        hist.bin_left[b] = lo + static_cast<double>(b) * width;
        hist.bin_right[b] = (b + 1 == bins) ? hi : lo + static_cast<double>(b + 1) * width;
    }
    for (const double v : values) {
        auto b = static_cast<std::uint64_t>((v - lo) / width);
        if (b >= bins) b = bins - 1;
        ++hist.count[b];
    }
    const double total = static_cast<double>(values.size());
    for (std::uint64_t b = 0; b < bins; ++b)
        hist.density[b] = static_cast<double>(hist.count[b]) / (total * width);
    return hist;
}

void write_histogram_csv(const std::filesystem::path& file, const Histogram& hist) {
    auto out = open_out(file);
    out << "bin_left,bin_right,count,density\n";
    for (std::size_t b = 0; b < hist.count.size(); ++b)
        out << fmt_double(hist.bin_left[b]) << ',' << fmt_double(hist.bin_right[b]) << ','
            << hist.count[b] << ',' << fmt_double(hist.density[b]) << '\n';
}

}  // namespace selfnorm
