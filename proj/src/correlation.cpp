#include "derec/correlation.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>
#include <set>
#include <thread>

#include "derec/error.hpp"
#include "derec/num.hpp"

namespace derec {

const char* metric_name(Metric metric) {
    return metric == Metric::KsPvalue ? "ks_pvalue" : "w_distance";
}

Metric metric_from_name(const std::string& name) {
    if (name == "ks_pvalue") return Metric::KsPvalue;
    if (name == "w_distance") return Metric::WDistance;
    throw InputError("unknown metric '" + name + "'");
}

std::string PairId::label() const {
    if (is_marginal()) return "marginal:" + target_table + "." + target_column;
    return given_table + "." + given_column + "->" + target_table + "." + target_column;
}

std::vector<double> CorrelationSeries::plain_values() const {
    std::vector<double> out;
    out.reserve(values.size());
    for (const auto& v : values) out.push_back(v.value);
    return out;
}

std::vector<std::string> union_alphabet(const Column& x, const Column& y) {
    std::set<std::string> seen(x.s.begin(), x.s.end());
    seen.insert(y.s.begin(), y.s.end());
    return {seen.begin(), seen.end()};
}

std::vector<double> coded_column(const Column& col, const std::vector<std::string>& alphabet) {
    if (!col.is_text()) return col.d;
    std::vector<double> out;
    out.reserve(col.s.size());
    for (const auto& v : col.s) {
        auto it = std::lower_bound(alphabet.begin(), alphabet.end(), v);
        if (it == alphabet.end() || *it != v) {
            throw PairMismatch("value '" + v + "' missing from the shared alphabet");
        }
        out.push_back(static_cast<double>(it - alphabet.begin()));
    }
    return out;
}

std::vector<std::pair<double, double>> subject_join(const DataTable& x, const DataTable& y,
                                                    const std::vector<double>& vx,
                                                    const std::vector<double>& vy) {
    std::vector<std::pair<double, double>> joined;
    for (const auto& id : shared_subjects(x, y)) {
        for (std::size_t rx : x.subject_rows(id)) {
            for (std::size_t ry : y.subject_rows(id)) {
                joined.emplace_back(vx[rx], vy[ry]);
            }
        }
    }
    return joined;
}

std::vector<std::pair<double, double>> subject_join(const DataTable& x, const DataTable& y,
                                                    const std::string& col_x,
                                                    const std::string& col_y) {
    const Column& cx = x.column(col_x);
    const Column& cy = y.column(col_y);
    auto code_solo = [](const Column& c) {
        if (!c.is_text()) return c.d;
        std::set<std::string> seen(c.s.begin(), c.s.end());
        std::vector<std::string> alphabet(seen.begin(), seen.end());
        return coded_column(c, alphabet);
    };
    return subject_join(x, y, code_solo(cx), code_solo(cy));
}

EmpiricalDist conditional_dist(const std::vector<std::pair<double, double>>& joined,
                               double given) {
    std::vector<double> targets;
    for (const auto& [g, t] : joined) {
        if (g == given) targets.push_back(t);
    }
    if (targets.empty()) {
        throw EmptyCondition("no joined rows with conditioning value " + format_double(given));
    }
    return make_empirical(std::move(targets));
}

std::vector<double> quantile_edges(std::vector<double> values, int bins) {
    if (bins < 2 || values.empty()) return {};
    std::sort(values.begin(), values.end());
    std::vector<double> edges;
    const std::size_t n = values.size();
    for (int k = 1; k < bins; ++k) {
        edges.push_back(values[static_cast<std::size_t>(k) * n / static_cast<std::size_t>(bins)]);
    }
    return edges;
}

double bin_of(double v, const std::vector<double>& edges) {
    std::size_t idx = 0;
    for (double e : edges) {
        if (e <= v) ++idx;
    }
    return static_cast<double>(idx);
}

const DataTable& SourcePair::table(const std::string& tag) const {
    if (tag == "a" && a != nullptr) return *a;
    if (tag == "b" && b != nullptr) return *b;
    throw PairMismatch("no source table tagged '" + tag + "'");
}

namespace {

double score_samples(Metric metric, const std::vector<double>& orig,
                     const std::vector<double>& syn) {
    if (metric == Metric::KsPvalue) return ks_two_sample(orig, syn).p;
    return wasserstein_samples(orig, syn);
}

}  // namespace

CorrelationValue cross_feature_correlation(const SourcePair& orig, const SourcePair& syn,
                                           const PairId& pair, Metric metric, int bins) {
    CorrelationValue result;
    result.pair = pair;
    result.metric = metric;

    const DataTable& orig_target_table = orig.table(pair.target_table);
    const DataTable& syn_target_table = syn.table(pair.target_table);
    const Column& orig_target = orig_target_table.column(pair.target_column);
    const Column& syn_target = syn_target_table.column(pair.target_column);

    std::vector<std::string> target_alphabet;
    if (orig_target.is_text()) target_alphabet = union_alphabet(orig_target, syn_target);
    std::vector<double> tv_o = coded_column(orig_target, target_alphabet);
    std::vector<double> tv_s = coded_column(syn_target, target_alphabet);

    if (pair.is_marginal()) {
        result.value = score_samples(metric, tv_o, tv_s);
        result.coverage = 1.0;
        return result;
    }

    const DataTable& orig_given_table = orig.table(pair.given_table);
    const DataTable& syn_given_table = syn.table(pair.given_table);
    const Column& orig_given = orig_given_table.column(pair.given_column);
    const Column& syn_given = syn_given_table.column(pair.given_column);

    std::vector<std::string> given_alphabet;
    if (orig_given.is_text()) given_alphabet = union_alphabet(orig_given, syn_given);
    std::vector<double> gv_o = coded_column(orig_given, given_alphabet);
    std::vector<double> gv_s = coded_column(syn_given, given_alphabet);

    auto joined_o = subject_join(orig_given_table, orig_target_table, gv_o, tv_o);
    auto joined_s = subject_join(syn_given_table, syn_target_table, gv_s, tv_s);

    if (orig_given.kind == ColumnKind::Numeric) {
        std::vector<double> given_values;
        given_values.reserve(joined_o.size());
        for (const auto& [g, t] : joined_o) given_values.push_back(g);
        auto edges = quantile_edges(std::move(given_values), bins);
        for (auto& [g, t] : joined_o) g = bin_of(g, edges);
        for (auto& [g, t] : joined_s) g = bin_of(g, edges);
    }

    std::map<double, std::vector<double>> orig_groups, syn_groups;
    for (const auto& [g, t] : joined_o) orig_groups[g].push_back(t);
    for (const auto& [g, t] : joined_s) syn_groups[g].push_back(t);

    double worst = 0.0;
    if (metric == Metric::WDistance) {
        auto [lo, hi] = std::minmax_element(tv_o.begin(), tv_o.end());
        worst = *hi - *lo;
    }

    const double n_total = static_cast<double>(joined_o.size());
    long double acc = 0.0L;
    long double matched = 0.0L;
    for (const auto& [given, targets] : orig_groups) {
        auto it = syn_groups.find(given);
        double z;
        if (it == syn_groups.end()) {
            z = worst;
        } else {
            z = score_samples(metric, targets, it->second);
            matched += static_cast<long double>(targets.size());
        }
        acc += static_cast<long double>(targets.size()) * static_cast<long double>(z);
    }
    result.value = static_cast<double>(acc / static_cast<long double>(n_total));
    result.coverage = static_cast<double>(matched / static_cast<long double>(n_total));
    return result;
}

std::vector<PairId> enumerate_pairs(const DerecBundle& bundle) {
    if (bundle.partition.size() != 2) {
        throw PairMismatch("pair enumeration needs exactly two sources");
    }
    const ContextualReport& ra = bundle.partition[0];
    const ContextualReport& rb = bundle.partition[1];

    std::vector<PairId> pairs;
    for (const auto& ga : ra.columns) {
        for (const auto& tb : rb.columns) {
            pairs.push_back({ra.table, ga.name, rb.table, tb.name});
        }
    }
    for (const auto& gb : rb.columns) {
        for (const auto& ta : ra.columns) {
            pairs.push_back({rb.table, gb.name, ra.table, ta.name});
        }
    }
    for (const auto& ca : ra.columns) pairs.push_back({"", "", ra.table, ca.name});
    for (const auto& cb : rb.columns) pairs.push_back({"", "", rb.table, cb.name});
    return pairs;
}

CorrelationSeries correlation_series(const SourcePair& orig, const SourcePair& syn,
                                     const std::vector<PairId>& pairs, Metric metric,
                                     int bins, int threads) {
    CorrelationSeries series;
    series.metric = metric;
    series.values.resize(pairs.size());

    auto compute = [&](std::size_t i) {
        series.values[i] = cross_feature_correlation(orig, syn, pairs[i], metric, bins);
    };

    if (threads <= 1 || pairs.size() <= 1) {
        for (std::size_t i = 0; i < pairs.size(); ++i) compute(i);
        return series;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= pairs.size()) return;
            try {
                compute(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    std::size_t count = std::min<std::size_t>(static_cast<std::size_t>(threads), pairs.size());
    for (std::size_t k = 0; k < count; ++k) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return series;
}

std::string series_to_csv_text(const CorrelationSeries& series) {
    std::string out =
        "given_table,given_column,target_table,target_column,kind,metric,value,coverage\n";
    for (const auto& v : series.values) {
        const bool marginal = v.pair.is_marginal();
        out += marginal ? "-" : v.pair.given_table;
        out += ',';
        out += marginal ? "-" : v.pair.given_column;
        out += ',';
        out += v.pair.target_table;
        out += ',';
        out += v.pair.target_column;
        out += ',';
        out += marginal ? "marginal" : "conditional";
        out += ',';
        out += metric_name(v.metric);
        out += ',';
        out += format_double(v.value);
        out += ',';
        out += format_double(v.coverage);
        out += '\n';
    }
    return out;
}

}  // namespace derec
