#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "derec/simpro.hpp"

namespace derec {

enum class PlotKind { KernelDensity, EmpiricalCdf, Histogram };

const char* plot_kind_name(PlotKind kind);

inline constexpr int kKdeGridPoints = 256;
inline constexpr int kHistogramBins = 20;

struct PlotSeries {
    PlotKind kind = PlotKind::EmpiricalCdf;
    std::string synthesizer;
    std::string metric;
    std::string subset;  // marginal | conditional
    double bandwidth = 0.0;
    double bin_width = 0.0;
    std::vector<double> x;
    std::vector<double> y;
};

// 0.9 * min(sd, iqr / 1.34) * n^(-1/5), floored at twice the grid step so
// the 256-point grid always resolves the kernel.
double silverman_bandwidth(std::vector<double> values);

// Gaussian kernel density on a 256-point grid over [0, 1]; kernel mass
// falling outside the interval is reflected back at both edges, so the
// trapezoid integral over the grid stays within one percent of 1.
PlotSeries kde_series(const std::vector<double>& values, const std::string& synthesizer,
                      const std::string& metric, const std::string& subset);

// Step rows (v, F(v-)), (v, F(v)) per distinct value: starts at 0, ends at 1.
PlotSeries ecdf_series(std::vector<double> values, const std::string& synthesizer,
                       const std::string& metric, const std::string& subset);

// 20 equal bins across the value range; x holds bin centers, y densities.
PlotSeries histogram_series(const std::vector<double>& values, const std::string& synthesizer,
                            const std::string& metric, const std::string& subset);

std::string plot_series_to_csv_text(const PlotSeries& series);

// Per metric and subset: ECDF and histogram, plus a density curve for the
// p-value metric (its values live on [0, 1]). Subsets with no entries are
// skipped; a report with no values at all is refused.
std::vector<PlotSeries> plot_report(const SimproReport& report);

// Per-pair deltas from a comparison, split the same way.
std::vector<PlotSeries> plot_comparison(const Comparison& comparison);

// One CSV per series: <synthesizer>_<metric>_<subset>_<kind>.csv.
std::vector<std::filesystem::path> write_plot_series(const std::vector<PlotSeries>& series,
                                                     const std::filesystem::path& out_dir);

}  // namespace derec
