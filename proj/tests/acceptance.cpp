// Acceptance gate: ten end-to-end checks, one verdict line each, with
// pinned tolerances. Usage: derec_acceptance <path-to-cli-binary>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "derec/correlation.hpp"
#include "derec/csv.hpp"
#include "derec/datagen.hpp"
#include "derec/error.hpp"
#include "derec/io.hpp"
#include "derec/pipeline.hpp"
#include "derec/plotdata.hpp"
#include "derec/simpro.hpp"
#include "derec/stats.hpp"
#include "derec/synth.hpp"
#include "oracles.hpp"

namespace fs = std::filesystem;
using namespace derec;

namespace {

std::string g_cli_path;
fs::path g_scratch;

void require(bool ok, const std::string& why) {
    if (!ok) throw std::runtime_error(why);
}

double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Schema schema_of(std::vector<ColumnSpec> cols) {
    Schema s;
    s.identifier = cols[0].name;
    s.columns = std::move(cols);
    return s;
}

GenSpec planted_spec(std::uint64_t seed, int subjects, double noise, int targets,
                     double strength) {
    GenSpec spec;
    spec.seed = seed;
    spec.subjects = subjects;
    spec.rows_min = 2;
    spec.rows_max = 3;
    GenSource a{"a", {}};
    GenColumn plan;
    plan.name = "plan";
    plan.contextual = true;
    plan.noise = noise;
    plan.alphabet = 4;
    a.columns.push_back(plan);
    GenColumn spend;
    spend.name = "spend";
    spend.kind = ColumnKind::Numeric;
    a.columns.push_back(spend);
    GenSource b{"b", {}};
    for (int t = 0; t < targets; ++t) {
        GenColumn col;
        col.name = "t" + std::to_string(t);
        col.alphabet = 4;
        b.columns.push_back(col);
        spec.dependencies.push_back({"plan", col.name, strength});
    }
    spec.sources = {a, b};
    return spec;
}

// criterion 1: copying the original must score as a perfect clone

void check_copy_fixed_point(const GenSpec& spec, const std::string& tag) {
    auto started = std::chrono::steady_clock::now();
    auto data = generate(spec);
    auto bundle = run_derec(data.a, data.b, 0.95);
    auto copy = synth_copy(bundle);
    auto report = evaluate(bundle, copy, "copy");
    require(!report.ks.values.empty(), tag + ": no pairs scored");
    for (const auto& v : report.ks.values) {
        require(v.value == 1.0, tag + ": ks != 1.0 exactly on " + v.pair.label());
        require(v.coverage == 1.0, tag + ": coverage != 1.0 on " + v.pair.label());
    }
    for (const auto& v : report.w.values) {
        require(v.value == 0.0, tag + ": w != 0.0 exactly on " + v.pair.label());
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                         .count();
    require(elapsed < 10.0, tag + ": took " + std::to_string(elapsed) + "s, budget 10s");
}

void criterion_copy_fixed_point() {
    check_copy_fixed_point(planted_spec(41, 120, 0.02, 3, 0.9), "planted");

    GenSpec flat;
    flat.seed = 42;
    flat.subjects = 60;
    flat.rows_min = 2;
    flat.rows_max = 2;
    GenColumn tier;
    tier.name = "tier";
    tier.contextual = true;
    tier.alphabet = 3;
    GenColumn amount;
    amount.name = "amount";
    amount.kind = ColumnKind::Numeric;
    GenColumn kind;
    kind.name = "kind";
    kind.alphabet = 5;
    flat.sources = {{"a", {tier, amount}}, {"b", {kind}}};
    check_copy_fixed_point(flat, "flat");

    GenSpec skewed;
    skewed.seed = 43;
    skewed.subjects = 200;
    skewed.rows_min = 1;
    skewed.rows_max = 6;
    skewed.rows_skew = 1.0;
    GenColumn seg;
    seg.name = "seg";
    seg.contextual = true;
    seg.noise = 0.05;
    seg.alphabet = 6;
    GenColumn v;
    v.name = "v";
    v.kind = ColumnKind::Numeric;
    GenColumn w;
    w.name = "w";
    w.kind = ColumnKind::Numeric;
    GenColumn grp;
    grp.name = "grp";
    grp.alphabet = 2;
    skewed.sources = {{"a", {seg, v}}, {"b", {w, grp}}};
    check_copy_fixed_point(skewed, "skewed");
}

// criterion 2: aggregation equals a from-scratch recomputation

DataTable random_small_table(std::mt19937_64& rng, const std::string& col, bool numeric,
                             std::size_t subjects) {
    std::string csv = "id," + col + "\n";
    for (std::size_t s = 0; s < subjects; ++s) {
        std::size_t rows = 1 + rng() % 3;
        for (std::size_t r = 0; r < rows; ++r) {
            csv += "u" + std::to_string(s) + ",";
            if (numeric) {
                csv += std::to_string(static_cast<double>(rng() % 12) / 2.0);
            } else {
                csv += std::string(1, static_cast<char>('p' + rng() % 3));
            }
            csv += "\n";
        }
    }
    return table_from_csv_text(csv, schema_of({{"id", ColumnKind::Identifier},
                                               {col, numeric ? ColumnKind::Numeric
                                                             : ColumnKind::Categorical}}),
                               "fixture");
}

double marginal_oracle(const DataTable& orig, const DataTable& syn, const std::string& col,
                       bool ks_metric) {
    std::set<std::string> alphabet;
    const Column& oc = orig.column(col);
    const Column& sc = syn.column(col);
    if (oc.is_text()) {
        alphabet.insert(oc.s.begin(), oc.s.end());
        alphabet.insert(sc.s.begin(), sc.s.end());
    }
    auto code = [&](const Column& c) {
        if (!c.is_text()) return c.d;
        std::vector<double> out;
        for (const auto& s : c.s) {
            out.push_back(static_cast<double>(
                std::distance(alphabet.begin(), alphabet.find(s))));
        }
        return out;
    };
    auto vo = code(oc), vs = code(sc);
    return ks_metric ? oracles::ks_p_hybrid(vo, vs) : oracles::sorted_atoms_w1(vo, vs);
}

void criterion_correlation_oracle() {
    std::mt19937_64 rng(202);
    const int bins = 4;
    for (int trial = 0; trial < 100; ++trial) {
        bool g_numeric = rng() % 2 == 0;
        bool t_numeric = rng() % 2 == 0;
        auto orig_a = random_small_table(rng, "g", g_numeric, 2 + rng() % 4);
        auto orig_b = random_small_table(rng, "t", t_numeric, 2 + rng() % 4);
        auto syn_a = random_small_table(rng, "g", g_numeric, 2 + rng() % 4);
        auto syn_b = random_small_table(rng, "t", t_numeric, 2 + rng() % 4);
        SourcePair orig{&orig_a, &orig_b};
        SourcePair syn{&syn_a, &syn_b};

        for (bool ks : {true, false}) {
            Metric metric = ks ? Metric::KsPvalue : Metric::WDistance;
            auto fwd = cross_feature_correlation(orig, syn, {"a", "g", "b", "t"}, metric, bins);
            auto fwd_ref = oracles::correlation_oracle(orig_a, "g", orig_b, "t", syn_a, syn_b,
                                                       ks, bins);
            require(std::abs(fwd.value - fwd_ref.value) <= 1e-9,
                    "trial " + std::to_string(trial) + ": forward value off by " +
                        std::to_string(std::abs(fwd.value - fwd_ref.value)));
            require(std::abs(fwd.coverage - fwd_ref.coverage) <= 1e-9,
                    "trial " + std::to_string(trial) + ": forward coverage off");

            auto rev = cross_feature_correlation(orig, syn, {"b", "t", "a", "g"}, metric, bins);
            auto rev_ref = oracles::correlation_oracle(orig_b, "t", orig_a, "g", syn_b, syn_a,
                                                       ks, bins);
            require(std::abs(rev.value - rev_ref.value) <= 1e-9,
                    "trial " + std::to_string(trial) + ": reverse value off");

            auto mg = cross_feature_correlation(orig, syn, {"", "", "b", "t"}, metric, bins);
            double mg_ref = marginal_oracle(orig_b, syn_b, "t", ks);
            require(std::abs(mg.value - mg_ref) <= 1e-9,
                    "trial " + std::to_string(trial) + ": marginal value off");
        }
    }
}

// criterion 3: p-values against enumeration and an independent reference

void criterion_ks_correctness() {
    std::mt19937_64 rng(303);
    for (std::size_t m = 1; m <= 5; ++m) {
        for (std::size_t n = 1; n <= 5; ++n) {
            for (int rep = 0; rep < 4; ++rep) {
                bool ties = rep % 2 == 0;
                std::vector<double> x(m), y(n);
                for (auto& v : x) v = ties ? static_cast<double>(rng() % 3) : unit_draw(rng);
                for (auto& v : y) v = ties ? static_cast<double>(rng() % 3) : unit_draw(rng);
                double got = ks_two_sample(x, y).p;
                double want = oracles::ks_permutation_p(x, y);
                require(std::abs(got - want) <= 0.05,
                        "m=" + std::to_string(m) + " n=" + std::to_string(n) + ": exact p " +
                            std::to_string(got) + " vs enumeration " + std::to_string(want));
            }
        }
    }
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t m = 20 + rng() % 181;
        std::size_t n = 20 + rng() % 181;
        std::vector<double> x(m), y(n);
        double shift = unit_draw(rng) * 0.3;
        for (auto& v : x) v = unit_draw(rng);
        for (auto& v : y) v = unit_draw(rng) + shift;
        double got = ks_two_sample(x, y).p;
        double want = oracles::ks_p_hybrid(x, y);
        require(std::abs(got - want) <= 1e-6,
                "trial " + std::to_string(trial) + ": asymptotic p off by " +
                    std::to_string(std::abs(got - want)));
    }
}

// criterion 4: W1 against the min-cost transport LP

void criterion_wasserstein_lp() {
    std::mt19937_64 rng(404);
    for (int trial = 0; trial < 100; ++trial) {
        auto draw_dist = [&](std::vector<double>& support, std::vector<long long>& counts) {
            std::size_t points = 1 + rng() % 6;
            std::set<double> sup;
            while (sup.size() < points) sup.insert(static_cast<double>(rng() % 40) / 4.0);
            support.assign(sup.begin(), sup.end());
            counts.resize(points);
            for (auto& c : counts) c = 1 + static_cast<long long>(rng() % 5);
        };
        std::vector<double> sup_p, sup_q;
        std::vector<long long> cnt_p, cnt_q;
        draw_dist(sup_p, cnt_p);
        draw_dist(sup_q, cnt_q);

        long long total_p = 0, total_q = 0;
        for (long long c : cnt_p) total_p += c;
        for (long long c : cnt_q) total_q += c;
        // cross-scaled to a common total so the flow oracle applies
        std::vector<long long> scaled_p(cnt_p), scaled_q(cnt_q);
        for (auto& c : scaled_p) c *= total_q;
        for (auto& c : scaled_q) c *= total_p;

        EmpiricalDist p = make_empirical_weighted(
            sup_p, std::vector<double>(cnt_p.begin(), cnt_p.end()));
        EmpiricalDist q = make_empirical_weighted(
            sup_q, std::vector<double>(cnt_q.begin(), cnt_q.end()));
        double got = wasserstein_1d(p, q);
        double want = oracles::transport_w1(sup_p, scaled_p, sup_q, scaled_q);
        require(std::abs(got - want) <= 1e-9,
                "trial " + std::to_string(trial) + ": W1 " + std::to_string(got) + " vs LP " +
                    std::to_string(want));
    }
}

// criterion 5: plants are detected exactly, and flip with heavier noise

void criterion_detection_exactness() {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        for (double noise : {0.02, 0.10}) {
            auto spec = planted_spec(500 + seed, 500, noise, 1, 0.9);
            auto data = generate(spec);
            std::map<std::pair<std::string, std::string>, const ColumnTruth*> truth;
            for (const auto& col : data.truth.columns) truth[{col.table, col.name}] = &col;

            auto check_table = [&](const DataTable& t, const std::string& tag) {
                auto report = detect(t, 0.95, tag);
                for (const auto& verdict : report.columns) {
                    const ColumnTruth* col = truth.at({tag, verdict.name});
                    bool expected = col->fraction >= 0.95;
                    require(verdict.contextual == expected,
                            "seed " + std::to_string(seed) + " noise " +
                                std::to_string(noise) + ": " + tag + "." + verdict.name +
                                " verdict disagrees with planted fraction " +
                                std::to_string(col->fraction));
                }
            };
            check_table(data.a, "a");
            check_table(data.b, "b");

            const ColumnTruth* plan = truth.at({"a", "plan"});
            auto report = detect(data.a, 0.95, "a");
            bool verdict = false;
            for (const auto& c : report.columns) {
                if (c.name == "plan") verdict = c.contextual;
            }
            if (noise == 0.02) {
                require(plan->contextual && verdict,
                        "seed " + std::to_string(seed) + ": 2% noise plant not contextual");
            } else {
                require(!verdict, "seed " + std::to_string(seed) +
                                      ": 10% noise plant still reads contextual");
            }
        }
    }
}

// criterion 6: conditional sampling must beat independent sampling

SimproReport g_plot_report_a, g_plot_report_b;
Comparison g_plot_comparison;

void criterion_discrimination() {
    auto started = std::chrono::steady_clock::now();
    int net_wins = 0, similarity_wins = 0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        auto spec = planted_spec(600 + seed, 200, 0.02, 7, 0.9);
        auto data = generate(spec);
        auto bundle = run_derec(data.a, data.b, 0.95);
        auto syn_c = synth_conditional(bundle, 2 * seed + 1);
        auto syn_i = synth_independent(bundle, 2 * seed + 2);
        auto rep_c = evaluate(bundle, syn_c, "conditional");
        auto rep_i = evaluate(bundle, syn_i, "independent");
        auto cmp = compare(rep_c, rep_i, 0.333);
        if (cmp.counts_p.net() > 0 && cmp.counts_w.net() > 0) ++net_wins;
        if (cmp.similarity_ks < 0.05) ++similarity_wins;
        if (seed == 19) {
            g_plot_report_a = rep_c;
            g_plot_report_b = rep_i;
            g_plot_comparison = cmp;
        }
    }
    double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - started)
                         .count();
    require(net_wins >= 18, "net improvement under both metrics in only " +
                                std::to_string(net_wins) + "/20 seeds");
    require(similarity_wins >= 18,
            "similarity p < 0.05 in only " + std::to_string(similarity_wins) + "/20 seeds");
    require(elapsed < 120.0,
            "took " + std::to_string(elapsed) + "s, budget 120s");
}

// criterion 7: boundary classifications and antisymmetry

SimproReport single_pair_report(const std::string& label, double p, double w) {
    SimproReport report;
    report.synthesizer = label;
    PairId pair{"", "", "b", "t"};
    report.ks.metric = Metric::KsPvalue;
    report.ks.values = {{pair, Metric::KsPvalue, p, 1.0}};
    report.w.metric = Metric::WDistance;
    report.w.values = {{pair, Metric::WDistance, w, 1.0}};
    report.ks_summary = summarize(report.ks.plain_values());
    report.w_summary = summarize(report.w.plain_values());
    return report;
}

SimproReport random_report(std::mt19937_64& rng, const std::string& label,
                           const std::vector<PairId>& pairs) {
    SimproReport report;
    report.synthesizer = label;
    report.ks.metric = Metric::KsPvalue;
    report.w.metric = Metric::WDistance;
    for (const auto& pair : pairs) {
        report.ks.values.push_back({pair, Metric::KsPvalue, unit_draw(rng), 1.0});
        report.w.values.push_back({pair, Metric::WDistance, 3.0 * unit_draw(rng), 1.0});
    }
    report.ks_summary = summarize(report.ks.plain_values());
    report.w_summary = summarize(report.w.plain_values());
    return report;
}

void criterion_classification_rule() {
    auto classify = [](double p_a, double p_b) {
        auto cmp = compare(single_pair_report("a", p_a, 0.0),
                           single_pair_report("b", p_b, 0.0), 0.333);
        return cmp.pairs.at(0).q_p;
    };
    require(classify(0.333, 0.0) == Classification::NoChange,
            "delta 0.333 should sit inside the band");
    require(classify(0.334, 0.0) == Classification::Better, "delta 0.334 should be Better");
    require(classify(0.0, 0.334) == Classification::Worsened,
            "delta -0.334 should be Worsened");

    std::mt19937_64 rng(707);
    for (int trial = 0; trial < 50; ++trial) {
        std::size_t n_pairs = 3 + rng() % 10;
        std::vector<PairId> pairs;
        for (std::size_t i = 0; i < n_pairs; ++i) {
            std::string col = "c" + std::to_string(i);
            if (i % 3 == 0) {
                pairs.push_back({"", "", "b", col});
            } else {
                pairs.push_back({"a", "g", "b", col});
            }
        }
        auto rep_a = random_report(rng, "a", pairs);
        auto rep_b = random_report(rng, "b", pairs);
        double t_p = 0.5 * unit_draw(rng);
        for (auto mode : {WThresholdMode::AbsDelta, WThresholdMode::PooledMedian}) {
            auto ab = compare(rep_a, rep_b, t_p, mode);
            auto ba = compare(rep_b, rep_a, t_p, mode);
            require(ab.t_w == ba.t_w, "t_w changed under swap");
            require(ab.similarity_ks == ba.similarity_ks, "similarity_ks changed under swap");
            require(ab.similarity_w == ba.similarity_w, "similarity_w changed under swap");
            require(ab.sign_test_p == ba.sign_test_p, "sign_test_p changed under swap");
            require(ab.sign_test_w == ba.sign_test_w, "sign_test_w changed under swap");
            require(ab.counts_p.improved == ba.counts_p.worsened &&
                        ab.counts_p.worsened == ba.counts_p.improved &&
                        ab.counts_p.no_change == ba.counts_p.no_change,
                    "p counts not mirrored");
            require(ab.counts_w.improved == ba.counts_w.worsened &&
                        ab.counts_w.worsened == ba.counts_w.improved &&
                        ab.counts_w.no_change == ba.counts_w.no_change,
                    "w counts not mirrored");
            for (std::size_t i = 0; i < ab.pairs.size(); ++i) {
                require(ab.pairs[i].delta_p == -ba.pairs[i].delta_p, "delta_p not negated");
                require(ab.pairs[i].delta_w == -ba.pairs[i].delta_w, "delta_w not negated");
                auto flip = [](Classification c) {
                    if (c == Classification::Better) return Classification::Worsened;
                    if (c == Classification::Worsened) return Classification::Better;
                    return Classification::NoChange;
                };
                require(ab.pairs[i].q_p == flip(ba.pairs[i].q_p), "q_p not mirrored");
                require(ab.pairs[i].q_w == flip(ba.pairs[i].q_w), "q_w not mirrored");
            }
        }
    }
}

// criterion 8: the dominance artifact disappears in the recreated parent

void criterion_disturbance() {
    GenSpec spec;
    spec.seed = 808;
    spec.subjects = 40;
    auto [a, b] = contextual_disturbance_fixture(spec);
    auto bundle = run_derec(a, b, 0.95);

    std::map<std::string, long long> subject_level, parent_level;
    const Column& group = a.column("group");
    for (const auto& id : a.subject_order()) {
        subject_level[group.s[a.subject_rows(id)[0]]] += 1;
    }
    const Column& parent_group = bundle.parent.column("group");
    for (const auto& v : parent_group.s) parent_level[v] += 1;
    require(parent_level == subject_level,
            "parent frequencies differ from the per-subject ground truth");

    std::map<std::string, double> row_marginal;
    for (const auto& v : group.s) {
        row_marginal[v] += 1.0 / static_cast<double>(group.s.size());
    }
    double tv = 0.0;
    std::set<std::string> values;
    for (const auto& [v, c] : subject_level) values.insert(v);
    for (const auto& [v, p] : row_marginal) values.insert(v);
    for (const auto& v : values) {
        double subj = static_cast<double>(subject_level[v]) /
                      static_cast<double>(a.num_subjects());
        tv += std::abs(row_marginal[v] - subj);
    }
    tv /= 2.0;
    require(tv >= 0.3, "row-vs-subject total variation only " + std::to_string(tv));
}

// criterion 9: rerunning the pipeline from its manifest is byte-stable

int run_cli(const std::string& args) {
    std::string cmd = "\"" + g_cli_path + "\" " + args + " >/dev/null 2>&1";
    return std::system(cmd.c_str());
}

void criterion_manifest_determinism() {
    require(!g_cli_path.empty(), "cli binary path not passed as argv[1]");
    fs::path dir = g_scratch / "determinism";
    fs::create_directories(dir);
    auto data = generate(planted_spec(909, 80, 0.02, 3, 0.9));
    save_csv(dir / "a.csv", data.a);
    save_schema(dir / "a.schema.json", data.a.schema());
    save_csv(dir / "b.csv", data.b);
    save_schema(dir / "b.schema.json", data.b.schema());

    std::string base = "pipeline --table-a \"" + (dir / "a.csv").string() + "\" --schema-a \"" +
                       (dir / "a.schema.json").string() + "\" --table-b \"" +
                       (dir / "b.csv").string() + "\" --schema-b \"" +
                       (dir / "b.schema.json").string() + "\"";
    require(run_cli(base + " --method conditional --seed 7 --out-dir \"" +
                    (dir / "run0").string() + "\"") == 0,
            "initial pipeline run failed");
    std::string manifest = (dir / "run0" / "manifest.json").string();
    for (const std::string run : {"run1", "run2"}) {
        require(run_cli("pipeline --from-manifest \"" + manifest + "\" --out-dir \"" +
                        (dir / run).string() + "\"") == 0,
                "manifest rerun " + run + " failed");
    }

    auto outputs = [&](const std::string& run) {
        auto doc = nlohmann::json::parse(read_text_file(dir / run / "manifest.json"));
        return doc.at("outputs");
    };
    auto run1 = outputs("run1");
    require(run1 == outputs("run2"), "two reruns from one manifest disagree");
    require(run1 == outputs("run0"), "rerun digests differ from the original run");
}

// criterion 10: emitted plot series are well-formed distributions

void criterion_plot_sanity() {
    require(!g_plot_comparison.pairs.empty(), "discrimination criterion left no artifacts");
    std::vector<PlotSeries> all;
    for (const auto& series : plot_report(g_plot_report_a)) all.push_back(series);
    for (const auto& series : plot_report(g_plot_report_b)) all.push_back(series);
    for (const auto& series : plot_comparison(g_plot_comparison)) all.push_back(series);

    int ecdfs = 0, kdes = 0;
    for (const auto& series : all) {
        if (series.kind == PlotKind::EmpiricalCdf) {
            ++ecdfs;
            for (std::size_t i = 1; i < series.y.size(); ++i) {
                require(series.y[i] >= series.y[i - 1],
                        "ecdf decreases in " + series.metric + "/" + series.subset);
            }
            require(series.y.back() == 1.0,
                    "ecdf does not end at 1 in " + series.metric + "/" + series.subset);
        }
        if (series.kind == PlotKind::KernelDensity) {
            ++kdes;
            double integral = 0.0;
            for (std::size_t i = 1; i < series.x.size(); ++i) {
                integral += 0.5 * (series.y[i] + series.y[i - 1]) *
                            (series.x[i] - series.x[i - 1]);
            }
            require(std::abs(integral - 1.0) <= 0.01,
                    "kde integral " + std::to_string(integral) + " in " + series.metric + "/" +
                        series.subset);
        }
    }
    require(ecdfs > 0 && kdes > 0, "no ecdf or kde series emitted");
}

struct Criterion {
    const char* title;
    std::function<void()> run;
};

}  // namespace

int main(int argc, char** argv) {
    if (argc > 1) g_cli_path = argv[1];
    g_scratch = fs::temp_directory_path() / "derec_acceptance";
    std::error_code ec;
    fs::remove_all(g_scratch, ec);
    fs::create_directories(g_scratch);

    const std::vector<Criterion> criteria = {
        {"perfect-score fixed point on copied data", criterion_copy_fixed_point},
        {"correlation aggregation equals brute-force recomputation",
         criterion_correlation_oracle},
        {"ks p-values match enumeration and independent reference", criterion_ks_correctness},
        {"wasserstein distance equals transport LP", criterion_wasserstein_lp},
        {"contextual detection matches planted ground truth", criterion_detection_exactness},
        {"conditional sampler beats independent sampler", criterion_discrimination},
        {"classification band boundaries and antisymmetry", criterion_classification_rule},
        {"recreated parent removes the dominance artifact", criterion_disturbance},
        {"pipeline reruns from manifest byte-identically", criterion_manifest_determinism},
        {"plot series are well-formed distributions", criterion_plot_sanity},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        auto started = std::chrono::steady_clock::now();
        std::string verdict = "PASS", detail;
        try {
            criteria[i].run();
        } catch (const std::exception& e) {
            verdict = "FAIL";
            detail = e.what();
            ++failures;
        }
        double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                                       started)
                             .count();
        std::printf("[%2zu/10] %s  %-58s %6.2fs%s%s\n", i + 1, verdict.c_str(),
                    criteria[i].title, elapsed, detail.empty() ? "" : "  ",
                    detail.c_str());
    }
    std::printf("acceptance: %zu/10 criteria passed\n", criteria.size() - failures);
    return failures == 0 ? 0 : 1;
}
