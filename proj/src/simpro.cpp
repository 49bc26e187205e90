#include "derec/simpro.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "derec/csv.hpp"
#include "derec/error.hpp"
#include "derec/io.hpp"
#include "derec/stats.hpp"

namespace derec {

namespace {

void require_matching_pairs(const CorrelationSeries& a, const CorrelationSeries& b) {
    if (a.values.size() != b.values.size()) {
        throw PairMismatch("series disagree on pair count");
    }
    for (std::size_t i = 0; i < a.values.size(); ++i) {
        if (!(a.values[i].pair == b.values[i].pair)) {
            throw PairMismatch("series disagree at pair " + a.values[i].pair.label());
        }
    }
}

nlohmann::ordered_json pair_to_json(const PairId& pair) {
    nlohmann::ordered_json out;
    if (pair.is_marginal()) {
        out["given_table"] = nullptr;
        out["given_column"] = nullptr;
    } else {
        out["given_table"] = pair.given_table;
        out["given_column"] = pair.given_column;
    }
    out["target_table"] = pair.target_table;
    out["target_column"] = pair.target_column;
    return out;
}

PairId pair_from_json(const nlohmann::json& j) {
    PairId pair;
    if (!j.at("given_table").is_null()) {
        pair.given_table = j.at("given_table").get<std::string>();
        pair.given_column = j.at("given_column").get<std::string>();
    }
    pair.target_table = j.at("target_table").get<std::string>();
    pair.target_column = j.at("target_column").get<std::string>();
    return pair;
}

nlohmann::ordered_json series_to_json(const CorrelationSeries& series) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& v : series.values) {
        nlohmann::ordered_json entry = pair_to_json(v.pair);
        entry["value"] = v.value;
        entry["coverage"] = v.coverage;
        arr.push_back(std::move(entry));
    }
    return arr;
}

CorrelationSeries series_from_json(const nlohmann::json& arr, Metric metric) {
    CorrelationSeries series;
    series.metric = metric;
    for (const auto& j : arr) {
        CorrelationValue v;
        v.pair = pair_from_json(j);
        v.metric = metric;
        v.value = j.at("value").get<double>();
        v.coverage = j.at("coverage").get<double>();
        series.values.push_back(std::move(v));
    }
    return series;
}

nlohmann::ordered_json summary_to_json(const SeriesSummary& s) {
    nlohmann::ordered_json out;
    out["mean"] = s.mean;
    out["median"] = s.median;
    out["histogram"] = {{"lo", s.lo}, {"hi", s.hi}, {"counts", s.histogram}};
    return out;
}

SeriesSummary summary_from_json(const nlohmann::json& j) {
    SeriesSummary s;
    s.mean = j.at("mean").get<double>();
    s.median = j.at("median").get<double>();
    s.lo = j.at("histogram").at("lo").get<double>();
    s.hi = j.at("histogram").at("hi").get<double>();
    s.histogram = j.at("histogram").at("counts").get<std::vector<long long>>();
    return s;
}

}  // namespace

SeriesSummary summarize(const std::vector<double>& values, int bins) {
    SeriesSummary s;
    s.mean = mean(values);
    s.median = median(values);
    s.lo = *std::min_element(values.begin(), values.end());
    s.hi = *std::max_element(values.begin(), values.end());
    s.histogram.assign(static_cast<std::size_t>(bins), 0);
    if (s.hi == s.lo) {
        s.histogram[0] = static_cast<long long>(values.size());
        return s;
    }
    for (double v : values) {
        auto idx = static_cast<std::size_t>((v - s.lo) / (s.hi - s.lo) * bins);
        if (idx >= s.histogram.size()) idx = s.histogram.size() - 1;
        ++s.histogram[idx];
    }
    return s;
}

const char* classification_name(Classification c) {
    switch (c) {
        case Classification::Better: return "better";
        case Classification::NoChange: return "no_change";
        case Classification::Worsened: return "worsened";
    }
    return "no_change";
}

Classification classification_from_name(const std::string& name) {
    if (name == "better") return Classification::Better;
    if (name == "no_change") return Classification::NoChange;
    if (name == "worsened") return Classification::Worsened;
    throw ParseError("unknown classification '" + name + "'");
}

std::string bundle_digest(const DerecBundle& bundle) {
    std::string canon = partition_to_json_text(bundle.partition);
    canon += table_to_csv_text(bundle.parent);
    for (const auto& [tag, table] : bundle.children) {
        canon += tag;
        canon += '\n';
        canon += table_to_csv_text(table);
    }
    return fnv1a64_hex(canon);
}

SimproReport evaluate(const DerecBundle& orig, const DerecBundle& syn,
                      const std::string& synthesizer_label, int bins, int threads) {
    auto [oa, ob] = reassemble(orig);
    auto [sa, sb] = reassemble(syn);
    SourcePair orig_pair{&oa, &ob};
    SourcePair syn_pair{&sa, &sb};
    auto pairs = enumerate_pairs(orig);

    SimproReport report;
    report.original_digest = bundle_digest(orig);
    report.synthesizer = synthesizer_label;
    report.ks = correlation_series(orig_pair, syn_pair, pairs, Metric::KsPvalue, bins, threads);
    report.w = correlation_series(orig_pair, syn_pair, pairs, Metric::WDistance, bins, threads);
    report.ks_summary = summarize(report.ks.plain_values());
    report.w_summary = summarize(report.w.plain_values());
    return report;
}

double statistical_similarity(const CorrelationSeries& series_a,
                              const CorrelationSeries& series_b) {
    if (series_a.metric != series_b.metric) {
        throw PairMismatch("similarity requires series of the same metric");
    }
    require_matching_pairs(series_a, series_b);
    return ks_two_sample(series_a.plain_values(), series_b.plain_values()).p;
}

std::vector<Classification> improvement_counts(const SimproReport& report_a,
                                               const SimproReport& report_b, double t,
                                               CountTriple* counts) {
    if (!(t > 0.0) || t >= 1.0) throw InputError("improvement threshold must lie in (0, 1)");
    require_matching_pairs(report_a.ks, report_b.ks);
    std::vector<Classification> out;
    CountTriple tally;
    for (std::size_t i = 0; i < report_a.ks.values.size(); ++i) {
        double delta = report_a.ks.values[i].value - report_b.ks.values[i].value;
        Classification c = Classification::NoChange;
        if (delta > t) {
            c = Classification::Better;
        } else if (delta < -t) {
            c = Classification::Worsened;
        }
        out.push_back(c);
        if (c == Classification::Better) ++tally.improved;
        if (c == Classification::NoChange) ++tally.no_change;
        if (c == Classification::Worsened) ++tally.worsened;
    }
    if (counts) *counts = tally;
    return out;
}

const char* w_threshold_mode_name(WThresholdMode mode) {
    return mode == WThresholdMode::PooledMedian ? "pooled-median" : "abs-delta";
}

WThresholdMode w_threshold_mode_from_name(const std::string& name) {
    if (name == "abs-delta") return WThresholdMode::AbsDelta;
    if (name == "pooled-median") return WThresholdMode::PooledMedian;
    throw InputError("unknown w-threshold mode '" + name + "'");
}

std::vector<Classification> probabilistic_distance(const SimproReport& report_a,
                                                   const SimproReport& report_b,
                                                   CountTriple* counts, double* t_w_out,
                                                   WThresholdMode mode) {
    require_matching_pairs(report_a.w, report_b.w);
    std::vector<double> deltas, abs_deltas;
    for (std::size_t i = 0; i < report_a.w.values.size(); ++i) {
        double d = report_a.w.values[i].value - report_b.w.values[i].value;
        deltas.push_back(d);
        abs_deltas.push_back(std::abs(d));
    }
    double t_w = 0.0;
    if (mode == WThresholdMode::PooledMedian) {
        auto pooled = report_a.w.plain_values();
        auto more = report_b.w.plain_values();
        pooled.insert(pooled.end(), more.begin(), more.end());
        t_w = median(pooled);
    } else {
        t_w = median(abs_deltas);
    }
    if (t_w_out) *t_w_out = t_w;

    std::vector<Classification> out;
    CountTriple tally;
    for (double d : deltas) {
        Classification c = Classification::NoChange;
        if (d < -t_w) {
            c = Classification::Better;
        } else if (d > t_w) {
            c = Classification::Worsened;
        }
        out.push_back(c);
        if (c == Classification::Better) ++tally.improved;
        if (c == Classification::NoChange) ++tally.no_change;
        if (c == Classification::Worsened) ++tally.worsened;
    }
    if (counts) *counts = tally;
    return out;
}

double sign_test(long long improved, long long worsened) {
    long long n = improved + worsened;
    if (n == 0) return 1.0;
    long long k = std::min(improved, worsened);
    // P(X <= k), X ~ Binomial(n, 1/2), exact
    long double tail = 0.0L;
    long double coeff = 1.0L;  // C(n, 0)
    for (long long i = 0; i <= k; ++i) {
        if (i > 0) {
            coeff = coeff * static_cast<long double>(n - i + 1) / static_cast<long double>(i);
        }
        tail += coeff;
    }
    long double p = 2.0L * tail * powl(0.5L, static_cast<long double>(n));
    return static_cast<double>(std::min(1.0L, p));
}

Comparison compare(const SimproReport& report_a, const SimproReport& report_b, double t_p,
                   WThresholdMode w_mode) {
    Comparison cmp;
    cmp.label_a = report_a.synthesizer;
    cmp.label_b = report_b.synthesizer;
    cmp.t_p = t_p;
    cmp.w_mode = w_mode;
    cmp.similarity_ks = statistical_similarity(report_a.ks, report_b.ks);
    cmp.similarity_w = statistical_similarity(report_a.w, report_b.w);

    auto q_p = improvement_counts(report_a, report_b, t_p, &cmp.counts_p);
    auto q_w = probabilistic_distance(report_a, report_b, &cmp.counts_w, &cmp.t_w, w_mode);

    cmp.sign_test_p = sign_test(cmp.counts_p.improved, cmp.counts_p.worsened);
    cmp.sign_test_w = sign_test(cmp.counts_w.improved, cmp.counts_w.worsened);

    for (std::size_t i = 0; i < report_a.ks.values.size(); ++i) {
        PairOutcome outcome;
        outcome.pair = report_a.ks.values[i].pair;
        outcome.delta_p = report_a.ks.values[i].value - report_b.ks.values[i].value;
        outcome.q_p = q_p[i];
        outcome.delta_w = report_a.w.values[i].value - report_b.w.values[i].value;
        outcome.q_w = q_w[i];
        cmp.pairs.push_back(std::move(outcome));
    }
    return cmp;
}

std::string report_to_json_text(const SimproReport& report) {
    nlohmann::ordered_json doc;
    doc["original_digest"] = report.original_digest;
    doc["synthesizer"] = report.synthesizer;
    doc["series"]["ks_pvalue"] = series_to_json(report.ks);
    doc["series"]["w_distance"] = series_to_json(report.w);
    doc["summary"]["ks_pvalue"] = summary_to_json(report.ks_summary);
    doc["summary"]["w_distance"] = summary_to_json(report.w_summary);
    return doc.dump(2) + "\n";
}

SimproReport report_from_json_text(const std::string& text, const std::string& where) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.contains("series")) {
        throw ParseError("invalid report document " + where);
    }
    SimproReport report;
    report.original_digest = doc.at("original_digest").get<std::string>();
    report.synthesizer = doc.at("synthesizer").get<std::string>();
    report.ks = series_from_json(doc.at("series").at("ks_pvalue"), Metric::KsPvalue);
    report.w = series_from_json(doc.at("series").at("w_distance"), Metric::WDistance);
    report.ks_summary = summary_from_json(doc.at("summary").at("ks_pvalue"));
    report.w_summary = summary_from_json(doc.at("summary").at("w_distance"));
    return report;
}

std::string comparison_to_json_text(const Comparison& comparison) {
    nlohmann::ordered_json doc;
    doc["label_a"] = comparison.label_a;
    doc["label_b"] = comparison.label_b;
    doc["thresholds"] = {{"t_p", comparison.t_p},
                         {"t_w", comparison.t_w},
                         {"t_w_mode", w_threshold_mode_name(comparison.w_mode)}};
    doc["similarity"] = {{"ks_pvalue", comparison.similarity_ks},
                         {"w_distance", comparison.similarity_w}};
    auto counts_json = [](const CountTriple& c) {
        return nlohmann::ordered_json{{"improved", c.improved},
                                      {"no_change", c.no_change},
                                      {"worsened", c.worsened},
                                      {"net", c.net()}};
    };
    doc["counts"] = {{"ks_pvalue", counts_json(comparison.counts_p)},
                     {"w_distance", counts_json(comparison.counts_w)}};
    doc["auxiliary_sign_test"] = {
        {"note", "supplementary exact binomial check on improved vs worsened counts"},
        {"ks_pvalue", comparison.sign_test_p},
        {"w_distance", comparison.sign_test_w}};
    doc["pairs"] = nlohmann::ordered_json::array();
    for (const auto& outcome : comparison.pairs) {
        nlohmann::ordered_json entry = pair_to_json(outcome.pair);
        entry["delta_p"] = outcome.delta_p;
        entry["q_p"] = classification_name(outcome.q_p);
        entry["delta_w"] = outcome.delta_w;
        entry["q_w"] = classification_name(outcome.q_w);
        doc["pairs"].push_back(std::move(entry));
    }
    return doc.dump(2) + "\n";
}

Comparison comparison_from_json_text(const std::string& text, const std::string& where) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.contains("pairs") || !doc.contains("thresholds")) {
        throw ParseError("invalid comparison document " + where);
    }
    Comparison cmp;
    cmp.label_a = doc.at("label_a").get<std::string>();
    cmp.label_b = doc.at("label_b").get<std::string>();
    cmp.t_p = doc.at("thresholds").at("t_p").get<double>();
    cmp.t_w = doc.at("thresholds").at("t_w").get<double>();
    cmp.w_mode =
        w_threshold_mode_from_name(doc.at("thresholds").at("t_w_mode").get<std::string>());
    cmp.similarity_ks = doc.at("similarity").at("ks_pvalue").get<double>();
    cmp.similarity_w = doc.at("similarity").at("w_distance").get<double>();
    auto counts_from = [&](const nlohmann::json& j) {
        CountTriple c;
        c.improved = j.at("improved").get<long long>();
        c.no_change = j.at("no_change").get<long long>();
        c.worsened = j.at("worsened").get<long long>();
        return c;
    };
    cmp.counts_p = counts_from(doc.at("counts").at("ks_pvalue"));
    cmp.counts_w = counts_from(doc.at("counts").at("w_distance"));
    cmp.sign_test_p = doc.at("auxiliary_sign_test").at("ks_pvalue").get<double>();
    cmp.sign_test_w = doc.at("auxiliary_sign_test").at("w_distance").get<double>();
    for (const auto& j : doc.at("pairs")) {
        PairOutcome outcome;
        outcome.pair = pair_from_json(j);
        outcome.delta_p = j.at("delta_p").get<double>();
        outcome.q_p = classification_from_name(j.at("q_p").get<std::string>());
        outcome.delta_w = j.at("delta_w").get<double>();
        outcome.q_w = classification_from_name(j.at("q_w").get<std::string>());
        cmp.pairs.push_back(std::move(outcome));
    }
    return cmp;
}

}  // namespace derec
