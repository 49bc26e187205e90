#pragma once

#include <string>
#include <vector>

#include "derec/correlation.hpp"
#include "derec/pipeline.hpp"

namespace derec {

struct SeriesSummary {
    double mean = 0.0;
    double median = 0.0;
    double lo = 0.0;
    double hi = 0.0;
    std::vector<long long> histogram;
};

SeriesSummary summarize(const std::vector<double>& values, int bins = 10);

struct SimproReport {
    std::string original_digest;
    std::string synthesizer;
    CorrelationSeries ks;
    CorrelationSeries w;
    SeriesSummary ks_summary;
    SeriesSummary w_summary;
};

enum class Classification { Better, NoChange, Worsened };

const char* classification_name(Classification c);
Classification classification_from_name(const std::string& name);

struct PairOutcome {
    PairId pair;
    double delta_p = 0.0;
    Classification q_p = Classification::NoChange;
    double delta_w = 0.0;
    Classification q_w = Classification::NoChange;
};

struct CountTriple {
    long long improved = 0;
    long long no_change = 0;
    long long worsened = 0;

    long long net() const { return improved - worsened; }
    long long total() const { return improved + no_change + worsened; }
};

// How the W-distance no-change band is sized: the median absolute per-pair
// delta (default), or the median of the raw W values pooled from both
// reports.
enum class WThresholdMode { AbsDelta, PooledMedian };

const char* w_threshold_mode_name(WThresholdMode mode);
WThresholdMode w_threshold_mode_from_name(const std::string& name);

struct Comparison {
    std::string label_a;
    std::string label_b;
    double t_p = 0.0;
    double t_w = 0.0;
    WThresholdMode w_mode = WThresholdMode::AbsDelta;
    double similarity_ks = 1.0;
    double similarity_w = 1.0;
    CountTriple counts_p;
    CountTriple counts_w;
    double sign_test_p = 1.0;
    double sign_test_w = 1.0;
    std::vector<PairOutcome> pairs;
};

// Stable fingerprint of a bundle's full content.
std::string bundle_digest(const DerecBundle& bundle);

// Reassembles both bundles and scores every enumerated pair under both
// metrics.
SimproReport evaluate(const DerecBundle& orig, const DerecBundle& syn,
                      const std::string& synthesizer_label, int bins = 10, int threads = 1);

// Two-sample KS p-value between the value collections of two series over
// the identical pair enumeration.
double statistical_similarity(const CorrelationSeries& series_a,
                              const CorrelationSeries& series_b);

// delta_p = P_A - P_B per pair; Better iff delta_p > t, Worsened iff
// delta_p < -t, boundary values NoChange.
std::vector<Classification> improvement_counts(const SimproReport& report_a,
                                               const SimproReport& report_b, double t,
                                               CountTriple* counts = nullptr);

// delta_w = W_A - W_B per pair; t_w = median |delta_w| (or the pooled raw
// median); Better iff delta_w < -t_w, Worsened iff delta_w > t_w, boundary
// values NoChange.
std::vector<Classification> probabilistic_distance(const SimproReport& report_a,
                                                   const SimproReport& report_b,
                                                   CountTriple* counts = nullptr,
                                                   double* t_w_out = nullptr,
                                                   WThresholdMode mode = WThresholdMode::AbsDelta);

// Exact two-sided binomial sign test on improved vs worsened counts.
double sign_test(long long improved, long long worsened);

Comparison compare(const SimproReport& report_a, const SimproReport& report_b, double t_p,
                   WThresholdMode w_mode = WThresholdMode::AbsDelta);

std::string report_to_json_text(const SimproReport& report);
SimproReport report_from_json_text(const std::string& text, const std::string& where);
std::string comparison_to_json_text(const Comparison& comparison);
Comparison comparison_from_json_text(const std::string& text, const std::string& where);

}  // namespace derec
