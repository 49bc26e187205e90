#pragma once

#include <string>
#include <utility>
#include <vector>

#include "derec/pipeline.hpp"
#include "derec/stats.hpp"
#include "derec/table.hpp"

namespace derec {

enum class Metric { KsPvalue, WDistance };

const char* metric_name(Metric metric);
Metric metric_from_name(const std::string& name);

// Ordered column pair; empty given fields mark a marginal entry.
struct PairId {
    std::string given_table;
    std::string given_column;
    std::string target_table;
    std::string target_column;

    bool is_marginal() const { return given_column.empty(); }
    std::string label() const;
    bool operator==(const PairId&) const = default;
};

struct CorrelationValue {
    PairId pair;
    Metric metric = Metric::KsPvalue;
    double value = 0.0;
    double coverage = 1.0;
};

struct CorrelationSeries {
    Metric metric = Metric::KsPvalue;
    std::vector<CorrelationValue> values;

    std::vector<double> plain_values() const;
};

// Sorted distinct categorical alphabet over both columns.
std::vector<std::string> union_alphabet(const Column& x, const Column& y);

// Column as canonical doubles: numeric as-is, categorical as the index of
// the value in the alphabet.
std::vector<double> coded_column(const Column& col, const std::vector<std::string>& alphabet);

// Per shared subject (lexicographic id order), the Cartesian product of the
// subject's x-values with its y-values.
std::vector<std::pair<double, double>> subject_join(const DataTable& x, const DataTable& y,
                                                    const std::vector<double>& vx,
                                                    const std::vector<double>& vy);
std::vector<std::pair<double, double>> subject_join(const DataTable& x, const DataTable& y,
                                                    const std::string& col_x,
                                                    const std::string& col_y);

// Distribution of target values among joined pairs matching `given`.
EmpiricalDist conditional_dist(const std::vector<std::pair<double, double>>& joined,
                               double given);

// Quantile bin edges: sorted[k*n/B] for k = 1..B-1. bin_of counts edges <= v,
// so values land in bins 0..B-1 and out-of-range values clamp to the ends.
std::vector<double> quantile_edges(std::vector<double> values, int bins);
double bin_of(double v, const std::vector<double>& edges);

struct SourcePair {
    const DataTable* a = nullptr;
    const DataTable* b = nullptr;

    const DataTable& table(const std::string& tag) const;
};

// Weighted aggregate over original conditioning values: for each original
// given-value, score the original vs synthetic conditional target
// distributions; aggregate sum(count_i * z_i) / N with original counts.
// Conditioning values with no synthetic counterpart score worst (p = 0,
// W = the original target column's canonical range) and reduce coverage.
// Numeric given columns are quantile-binned with edges from the original
// joined values; targets are never binned.
CorrelationValue cross_feature_correlation(const SourcePair& orig, const SourcePair& syn,
                                           const PairId& pair, Metric metric, int bins = 10);

// Cross pairs a-given x b-target, then b-given x a-target, then one
// marginal per column (a's columns, then b's), all in partition order.
std::vector<PairId> enumerate_pairs(const DerecBundle& bundle);

CorrelationSeries correlation_series(const SourcePair& orig, const SourcePair& syn,
                                     const std::vector<PairId>& pairs, Metric metric,
                                     int bins = 10, int threads = 1);

std::string series_to_csv_text(const CorrelationSeries& series);

}  // namespace derec
