#include "derec/plotdata.hpp"

#include <algorithm>
#include <cmath>

#include "derec/error.hpp"
#include "derec/io.hpp"
#include "derec/num.hpp"

namespace derec {

namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.size() == 1) return sorted[0];
    double pos = p * static_cast<double>(sorted.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= sorted.size()) return sorted.back();
    return sorted[lo] + (sorted[lo + 1] - sorted[lo]) * (pos - static_cast<double>(lo));
}

std::vector<double> subset_values(const CorrelationSeries& series, bool marginal) {
    std::vector<double> out;
    for (const auto& v : series.values) {
        if (v.pair.is_marginal() == marginal) out.push_back(v.value);
    }
    return out;
}

}  // namespace

const char* plot_kind_name(PlotKind kind) {
    switch (kind) {
        case PlotKind::KernelDensity: return "kde";
        case PlotKind::EmpiricalCdf: return "ecdf";
        case PlotKind::Histogram: return "histogram";
    }
    return "ecdf";
}

double silverman_bandwidth(std::vector<double> values) {
    if (values.empty()) throw EmptySample("bandwidth of an empty sample");
    const auto n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double sd = 0.0;
    if (values.size() > 1) {
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        sd = std::sqrt(ss / (n - 1.0));
    }
    std::sort(values.begin(), values.end());
    double iqr = quantile(values, 0.75) - quantile(values, 0.25);
    double spread = std::min(sd, iqr / 1.34);
    double h = 0.9 * spread * std::pow(n, -0.2);
    double floor = 2.0 / static_cast<double>(kKdeGridPoints - 1);
    return std::max(h, floor);
}

PlotSeries kde_series(const std::vector<double>& values, const std::string& synthesizer,
                      const std::string& metric, const std::string& subset) {
    PlotSeries s;
    s.kind = PlotKind::KernelDensity;
    s.synthesizer = synthesizer;
    s.metric = metric;
    s.subset = subset;
    s.bandwidth = silverman_bandwidth(values);

    const double h = s.bandwidth;
    const double n = static_cast<double>(values.size());
    s.x.resize(kKdeGridPoints);
    s.y.resize(kKdeGridPoints);
    for (int i = 0; i < kKdeGridPoints; ++i) {
        double x = static_cast<double>(i) / static_cast<double>(kKdeGridPoints - 1);
        double density = 0.0;
        for (double v : values) {
            // images of v under reflection at 0 and 1, out to one full period
            for (double image : {v, -v, 2.0 - v, v - 2.0, v + 2.0, -v - 2.0, 4.0 - v}) {
                double u = (x - image) / h;
                density += std::exp(-0.5 * u * u);
            }
        }
        s.x[i] = x;
        s.y[i] = density * kInvSqrt2Pi / (n * h);
    }
    return s;
}

PlotSeries ecdf_series(std::vector<double> values, const std::string& synthesizer,
                       const std::string& metric, const std::string& subset) {
    if (values.empty()) throw EmptySample("ecdf of an empty sample");
    PlotSeries s;
    s.kind = PlotKind::EmpiricalCdf;
    s.synthesizer = synthesizer;
    s.metric = metric;
    s.subset = subset;

    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    std::size_t i = 0;
    double before = 0.0;
    while (i < values.size()) {
        std::size_t j = i;
        while (j < values.size() && values[j] == values[i]) ++j;
        double after = static_cast<double>(j) / n;
        s.x.push_back(values[i]);
        s.y.push_back(before);
        s.x.push_back(values[i]);
        s.y.push_back(after);
        before = after;
        i = j;
    }
    return s;
}

PlotSeries histogram_series(const std::vector<double>& values, const std::string& synthesizer,
                            const std::string& metric, const std::string& subset) {
    if (values.empty()) throw EmptySample("histogram of an empty sample");
    PlotSeries s;
    s.kind = PlotKind::Histogram;
    s.synthesizer = synthesizer;
    s.metric = metric;
    s.subset = subset;

    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it;
    double hi = *hi_it;
    if (lo == hi) {
        s.bin_width = 1.0;
        s.x = {lo};
        s.y = {1.0};
        return s;
    }
    s.bin_width = (hi - lo) / kHistogramBins;
    std::vector<double> counts(kHistogramBins, 0.0);
    for (double v : values) {
        auto b = static_cast<int>((v - lo) / s.bin_width);
        counts[static_cast<std::size_t>(std::clamp(b, 0, kHistogramBins - 1))] += 1.0;
    }
    const double n = static_cast<double>(values.size());
    for (int b = 0; b < kHistogramBins; ++b) {
        s.x.push_back(lo + (static_cast<double>(b) + 0.5) * s.bin_width);
        s.y.push_back(counts[static_cast<std::size_t>(b)] / (n * s.bin_width));
    }
    return s;
}

std::string plot_series_to_csv_text(const PlotSeries& series) {
    std::string text = "# kind=";
    text += plot_kind_name(series.kind);
    text += " metric=" + series.metric;
    text += " subset=" + series.subset;
    text += " synthesizer=" + series.synthesizer;
    if (series.kind == PlotKind::KernelDensity) {
        text += " kernel=gaussian rule=silverman bandwidth=" + format_double(series.bandwidth);
        text += " grid=" + std::to_string(kKdeGridPoints);
    }
    if (series.kind == PlotKind::Histogram) {
        text += " bins=" + std::to_string(static_cast<int>(series.x.size()));
        text += " width=" + format_double(series.bin_width);
    }
    text += "\nx,y\n";
    for (std::size_t i = 0; i < series.x.size(); ++i) {
        text += format_double(series.x[i]) + "," + format_double(series.y[i]) + "\n";
    }
    return text;
}

std::vector<PlotSeries> plot_report(const SimproReport& report) {
    std::vector<PlotSeries> out;
    for (const CorrelationSeries* series : {&report.ks, &report.w}) {
        const std::string metric = metric_name(series->metric);
        for (bool marginal : {false, true}) {
            auto values = subset_values(*series, marginal);
            if (values.empty()) continue;
            const std::string subset = marginal ? "marginal" : "conditional";
            if (series->metric == Metric::KsPvalue) {
                out.push_back(kde_series(values, report.synthesizer, metric, subset));
            }
            out.push_back(ecdf_series(values, report.synthesizer, metric, subset));
            out.push_back(histogram_series(values, report.synthesizer, metric, subset));
        }
    }
    if (out.empty()) {
        throw EmptyReport("report '" + report.synthesizer + "' holds no series values");
    }
    return out;
}

std::vector<PlotSeries> plot_comparison(const Comparison& comparison) {
    if (comparison.pairs.empty()) {
        throw EmptyReport("comparison '" + comparison.label_a + "' vs '" + comparison.label_b +
                          "' holds no pairs");
    }
    const std::string label = comparison.label_a + "_vs_" + comparison.label_b;
    std::vector<PlotSeries> out;
    for (bool marginal : {false, true}) {
        std::vector<double> dp, dw;
        for (const auto& pair : comparison.pairs) {
            if (pair.pair.is_marginal() != marginal) continue;
            dp.push_back(pair.delta_p);
            dw.push_back(pair.delta_w);
        }
        if (dp.empty()) continue;
        const std::string subset = marginal ? "marginal" : "conditional";
        out.push_back(ecdf_series(dp, label, "delta_p", subset));
        out.push_back(histogram_series(dp, label, "delta_p", subset));
        out.push_back(ecdf_series(dw, label, "delta_w", subset));
        out.push_back(histogram_series(dw, label, "delta_w", subset));
    }
    return out;
}

std::vector<std::filesystem::path> write_plot_series(const std::vector<PlotSeries>& series,
                                                     const std::filesystem::path& out_dir) {
    std::vector<std::filesystem::path> paths;
    for (const auto& s : series) {
        auto path = out_dir / (s.synthesizer + "_" + s.metric + "_" + s.subset + "_" +
                               plot_kind_name(s.kind) + ".csv");
        atomic_write_text(path, plot_series_to_csv_text(s));
        paths.push_back(std::move(path));
    }
    return paths;
}

}  // namespace derec
