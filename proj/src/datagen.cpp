#include "derec/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <unordered_map>

#include <json.hpp>

#include "derec/error.hpp"
#include "derec/rng.hpp"

namespace derec {

namespace {

std::string subject_id(int i, int width) {
    std::string n = std::to_string(i + 1);
    if (static_cast<int>(n.size()) < width) n.insert(0, width - n.size(), '0');
    return "u" + n;
}

std::string symbol(const std::string& column, int i) {
    return column + "_" + std::to_string(i);
}

const GenColumn* find_column(const GenSource& source, const std::string& name) {
    for (const auto& c : source.columns) {
        if (c.name == name) return &c;
    }
    return nullptr;
}

// weights favor small counts as skew grows; skew 0 is uniform
std::vector<double> row_count_weights(int rows_min, int rows_max, double skew) {
    std::vector<double> w;
    for (int k = rows_min; k <= rows_max; ++k) {
        w.push_back(std::pow(1.0 / static_cast<double>(k - rows_min + 1), skew));
    }
    return w;
}

double constant_fraction(const DataTable& t, std::size_t col) {
    const Column& c = t.column(col);
    std::size_t constant = 0;
    for (const auto& id : t.subject_order()) {
        const auto& rows = t.subject_rows(id);
        bool same = true;
        for (std::size_t r : rows) {
            if (c.is_text() ? (c.s[r] != c.s[rows[0]]) : (c.d[r] != c.d[rows[0]])) same = false;
        }
        if (same) ++constant;
    }
    return static_cast<double>(constant) / static_cast<double>(t.num_subjects());
}

struct SourceDraft {
    Schema schema;
    std::vector<Column> columns;
    std::vector<int> row_counts;       // per subject
    std::vector<std::size_t> row_of;   // first row index per subject
    std::size_t total_rows = 0;
};

SourceDraft draft_source(const GenSource& source, int subjects, Rng& rng, int rows_min,
                         int rows_max, const std::vector<double>& count_weights,
                         const std::vector<std::string>& ids) {
    SourceDraft d;
    d.schema.identifier = "id";
    d.schema.columns.push_back({"id", ColumnKind::Identifier});
    for (const auto& c : source.columns) d.schema.columns.push_back({c.name, c.kind});

    d.row_counts.resize(subjects);
    d.row_of.resize(subjects);
    for (int s = 0; s < subjects; ++s) {
        d.row_of[s] = d.total_rows;
        d.row_counts[s] = rows_min == rows_max
                              ? rows_min
                              : rows_min + static_cast<int>(rng.weighted_index(count_weights));
        d.total_rows += static_cast<std::size_t>(d.row_counts[s]);
    }

    d.columns.resize(source.columns.size() + 1);
    d.columns[0].kind = ColumnKind::Identifier;
    d.columns[0].s.reserve(d.total_rows);
    for (int s = 0; s < subjects; ++s) {
        for (int r = 0; r < d.row_counts[s]; ++r) d.columns[0].s.push_back(ids[s]);
    }
    return d;
}

// Exactly `deviants` subjects among those with 2+ rows, via partial shuffle.
std::vector<int> pick_deviants(const std::vector<int>& row_counts, int deviants,
                               const std::string& column, Rng& rng) {
    std::vector<int> eligible;
    for (int s = 0; s < static_cast<int>(row_counts.size()); ++s) {
        if (row_counts[s] >= 2) eligible.push_back(s);
    }
    if (static_cast<int>(eligible.size()) < deviants) {
        throw SpecInvalid("column '" + column + "' needs " + std::to_string(deviants) +
                          " deviant subjects but only " + std::to_string(eligible.size()) +
                          " have two or more rows");
    }
    for (int i = 0; i < deviants; ++i) {
        std::size_t j = static_cast<std::size_t>(i) +
                        rng.next_index(eligible.size() - static_cast<std::size_t>(i));
        std::swap(eligible[static_cast<std::size_t>(i)], eligible[j]);
    }
    std::vector<int> picked(eligible.begin(), eligible.begin() + deviants);
    std::sort(picked.begin(), picked.end());
    return picked;
}

}  // namespace

void validate_gen_spec(const GenSpec& spec) {
    if (spec.subjects < 1) throw SpecInvalid("subjects must be at least 1");
    if (spec.rows_min < 1 || spec.rows_max < spec.rows_min) {
        throw SpecInvalid("rows per subject needs 1 <= min <= max");
    }
    if (spec.rows_skew < 0.0) throw SpecInvalid("rows skew must be nonnegative");
    if (spec.sources.size() != 2) throw SpecInvalid("exactly two sources required");

    std::set<std::string> table_names;
    for (const auto& source : spec.sources) {
        if (source.table.empty()) throw SpecInvalid("source table name is empty");
        if (!table_names.insert(source.table).second) {
            throw SpecInvalid("duplicate source table '" + source.table + "'");
        }
        if (source.columns.empty()) {
            throw SpecInvalid("source '" + source.table + "' has no columns");
        }
        std::set<std::string> names;
        for (const auto& c : source.columns) {
            if (c.name.empty() || c.name == "id") {
                throw SpecInvalid("bad column name '" + c.name + "' in source '" + source.table +
                                  "' (the identifier is implicit)");
            }
            if (!names.insert(c.name).second) {
                throw SpecInvalid("duplicate column '" + c.name + "' in source '" + source.table +
                                  "'");
            }
            if (c.kind == ColumnKind::Identifier) {
                throw SpecInvalid("column '" + c.name + "' may not be an identifier");
            }
            if (c.noise < 0.0 || c.noise > 1.0) {
                throw SpecInvalid("column '" + c.name + "' noise must sit in [0, 1]");
            }
            if (!c.contextual && c.noise != 0.0) {
                throw SpecInvalid("column '" + c.name + "' is not contextual, noise is moot");
            }
            if (c.kind == ColumnKind::Categorical && (c.alphabet < 2 || c.alphabet > 20)) {
                throw SpecInvalid("column '" + c.name + "' alphabet must hold 2 to 20 symbols");
            }
        }
    }

    std::set<std::string> targets;
    for (const auto& dep : spec.dependencies) {
        if (dep.strength < 0.0 || dep.strength > 1.0) {
            throw SpecInvalid("dependency strength must sit in [0, 1]");
        }
        const GenColumn* given = find_column(spec.sources[0], dep.given);
        const GenColumn* target = find_column(spec.sources[1], dep.target);
        if (!given || !given->contextual || given->kind != ColumnKind::Categorical) {
            throw SpecInvalid("dependency given '" + dep.given +
                              "' must be a contextual categorical column of the first source");
        }
        if (!target || target->contextual || target->kind != ColumnKind::Categorical) {
            throw SpecInvalid("dependency target '" + dep.target +
                              "' must be a plain categorical column of the second source");
        }
        if (given->alphabet != target->alphabet) {
            throw SpecInvalid("dependency '" + dep.given + "' -> '" + dep.target +
                              "' needs matching alphabet sizes");
        }
        if (!targets.insert(dep.target).second) {
            throw SpecInvalid("column '" + dep.target + "' is the target of two dependencies");
        }
    }
}

GenSpec gen_spec_from_json_text(const std::string& text, const std::string& where) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.is_object()) {
        throw ParseError("invalid generator document " + where);
    }
    GenSpec spec;
    try {
        spec.seed = doc.value("seed", std::uint64_t{0});
        spec.subjects = doc.value("subjects", 0);
        if (doc.contains("rows_per_subject")) {
            const auto& rows = doc.at("rows_per_subject");
            spec.rows_min = rows.value("min", 1);
            spec.rows_max = rows.value("max", spec.rows_min);
            spec.rows_skew = rows.value("skew", 0.0);
        }
        for (const auto& src : doc.value("sources", nlohmann::json::array())) {
            GenSource source;
            source.table = src.value("table", "");
            for (const auto& col : src.value("columns", nlohmann::json::array())) {
                GenColumn c;
                c.name = col.value("name", "");
                c.kind = column_kind_from_name(col.value("kind", "categorical"));
                c.contextual = col.value("contextual", false);
                c.noise = col.value("noise", 0.0);
                c.alphabet = col.value("alphabet", 4);
                source.columns.push_back(std::move(c));
            }
            spec.sources.push_back(std::move(source));
        }
        for (const auto& dep : doc.value("dependencies", nlohmann::json::array())) {
            spec.dependencies.push_back({dep.value("given", ""), dep.value("target", ""),
                                         dep.value("strength", 1.0)});
        }
    } catch (const nlohmann::json::exception& e) {
        throw SpecInvalid("generator document " + where + ": " + e.what());
    }
    validate_gen_spec(spec);
    return spec;
}

std::string truth_to_json_text(const GroundTruth& truth) {
    nlohmann::ordered_json doc;
    doc["seed"] = truth.seed;
    doc["subjects"] = truth.subjects;
    doc["columns"] = nlohmann::ordered_json::array();
    for (const auto& c : truth.columns) {
        nlohmann::ordered_json col;
        col["table"] = c.table;
        col["name"] = c.name;
        col["kind"] = column_kind_name(c.kind);
        col["contextual"] = c.contextual;
        col["noise"] = c.noise;
        col["deviants"] = c.deviants;
        col["fraction"] = c.fraction;
        doc["columns"].push_back(std::move(col));
    }
    doc["dependencies"] = nlohmann::ordered_json::array();
    for (const auto& d : truth.dependencies) {
        nlohmann::ordered_json dep;
        dep["given"] = d.given;
        dep["target"] = d.target;
        dep["strength"] = d.strength;
        dep["map"] = nlohmann::ordered_json::object();
        for (const auto& [from, to] : d.map) dep["map"][from] = to;
        doc["dependencies"].push_back(std::move(dep));
    }
    return doc.dump(2) + "\n";
}

GenResult generate(const GenSpec& spec) {
    validate_gen_spec(spec);
    Rng rng(spec.seed);
    const int n = spec.subjects;
    const int width = std::max<int>(4, static_cast<int>(std::to_string(n).size()));
    std::vector<std::string> ids;
    ids.reserve(static_cast<std::size_t>(n));
    for (int s = 0; s < n; ++s) ids.push_back(subject_id(s, width));

    auto count_weights = row_count_weights(spec.rows_min, spec.rows_max, spec.rows_skew);
    std::vector<SourceDraft> drafts;
    for (const auto& source : spec.sources) {
        drafts.push_back(
            draft_source(source, n, rng, spec.rows_min, spec.rows_max, count_weights, ids));
    }

    GroundTruth truth;
    truth.seed = spec.seed;
    truth.subjects = n;

    // subject-level base values of contextual categoricals in the first
    // source, for dependency targets
    std::unordered_map<std::string, std::vector<int>> given_base;

    for (std::size_t si = 0; si < spec.sources.size(); ++si) {
        const GenSource& source = spec.sources[si];
        SourceDraft& d = drafts[si];
        for (std::size_t ci = 0; ci < source.columns.size(); ++ci) {
            const GenColumn& gc = source.columns[ci];
            Column& out = d.columns[ci + 1];
            out.kind = gc.kind;

            ColumnTruth ct;
            ct.table = source.table;
            ct.name = gc.name;
            ct.kind = gc.kind;
            ct.contextual = gc.contextual;
            ct.noise = gc.noise;

            if (gc.contextual) {
                std::vector<int> base_sym(static_cast<std::size_t>(n));
                std::vector<double> base_num(static_cast<std::size_t>(n));
                for (int s = 0; s < n; ++s) {
                    if (gc.kind == ColumnKind::Categorical) {
                        base_sym[static_cast<std::size_t>(s)] =
                            static_cast<int>(rng.next_index(static_cast<std::size_t>(gc.alphabet)));
                    } else {
                        base_num[static_cast<std::size_t>(s)] =
                            static_cast<double>(rng.next_index(1000));
                    }
                }
                ct.deviants = static_cast<int>(
                    std::llround(gc.noise * static_cast<double>(n)));
                auto deviants = pick_deviants(d.row_counts, ct.deviants, gc.name, rng);

                for (int s = 0; s < n; ++s) {
                    for (int r = 0; r < d.row_counts[s]; ++r) {
                        if (gc.kind == ColumnKind::Categorical) {
                            out.s.push_back(symbol(gc.name, base_sym[static_cast<std::size_t>(s)]));
                        } else {
                            out.d.push_back(base_num[static_cast<std::size_t>(s)]);
                        }
                    }
                }
                for (int s : deviants) {
                    std::size_t row = d.row_of[static_cast<std::size_t>(s)] +
                                      rng.next_index(static_cast<std::size_t>(d.row_counts[s]));
                    if (gc.kind == ColumnKind::Categorical) {
                        int base = base_sym[static_cast<std::size_t>(s)];
                        int other = static_cast<int>(
                            (static_cast<std::size_t>(base) + 1 +
                             rng.next_index(static_cast<std::size_t>(gc.alphabet - 1))) %
                            static_cast<std::size_t>(gc.alphabet));
                        out.s[row] = symbol(gc.name, other);
                    } else {
                        out.d[row] = base_num[static_cast<std::size_t>(s)] +
                                     1.0 + static_cast<double>(rng.next_index(9));
                    }
                }
                if (si == 0 && gc.kind == ColumnKind::Categorical) {
                    given_base.emplace(gc.name, std::move(base_sym));
                }
            } else {
                const GenDependency* dep = nullptr;
                if (si == 1) {
                    for (const auto& cand : spec.dependencies) {
                        if (cand.target == gc.name) dep = &cand;
                    }
                }
                const std::vector<int>* base =
                    dep ? &given_base.at(dep->given) : nullptr;
                for (int s = 0; s < n; ++s) {
                    for (int r = 0; r < d.row_counts[s]; ++r) {
                        if (gc.kind == ColumnKind::Numeric) {
                            out.d.push_back(static_cast<double>(rng.next_index(1000)));
                        } else if (dep && rng.next_double() < dep->strength) {
                            int mapped = ((*base)[static_cast<std::size_t>(s)] + 1) % gc.alphabet;
                            out.s.push_back(symbol(gc.name, mapped));
                        } else {
                            out.s.push_back(symbol(
                                gc.name,
                                static_cast<int>(rng.next_index(
                                    static_cast<std::size_t>(gc.alphabet)))));
                        }
                    }
                }
            }
            truth.columns.push_back(std::move(ct));
        }
    }

    GenResult result{DataTable(drafts[0].schema, std::move(drafts[0].columns)),
                     DataTable(drafts[1].schema, std::move(drafts[1].columns)),
                     std::move(truth)};

    std::size_t at = 0;
    for (std::size_t si = 0; si < spec.sources.size(); ++si) {
        const DataTable& t = si == 0 ? result.a : result.b;
        for (std::size_t ci = 0; ci < spec.sources[si].columns.size(); ++ci, ++at) {
            result.truth.columns[at].fraction = constant_fraction(t, ci + 1);
        }
    }

    for (const auto& dep : spec.dependencies) {
        DependencyTruth dt;
        dt.given = dep.given;
        dt.target = dep.target;
        dt.strength = dep.strength;
        int alphabet = find_column(spec.sources[0], dep.given)->alphabet;
        for (int i = 0; i < alphabet; ++i) {
            dt.map.emplace_back(symbol(dep.given, i), symbol(dep.target, (i + 1) % alphabet));
        }
        result.truth.dependencies.push_back(std::move(dt));
    }
    return result;
}

std::pair<DataTable, DataTable> contextual_disturbance_fixture(const GenSpec& spec) {
    Rng rng(spec.seed);
    const int n = std::max(5, spec.subjects);
    const int width = std::max<int>(4, static_cast<int>(std::to_string(n).size()));

    Schema sa;
    sa.identifier = "id";
    sa.columns = {{"id", ColumnKind::Identifier},
                  {"group", ColumnKind::Categorical},
                  {"x", ColumnKind::Numeric}};
    std::vector<Column> ca(3);
    ca[0].kind = ColumnKind::Identifier;
    ca[1].kind = ColumnKind::Categorical;
    ca[2].kind = ColumnKind::Numeric;

    // the dominant subject outweighs everyone else's rows put together
    const int dominant_rows = 2 * (n - 1) + 2;
    for (int r = 0; r < dominant_rows; ++r) {
        ca[0].s.push_back(subject_id(0, width));
        ca[1].s.push_back("group_dom");
        ca[2].d.push_back(static_cast<double>(rng.next_index(1000)));
    }
    for (int s = 1; s < n; ++s) {
        for (int r = 0; r < 2; ++r) {
            ca[0].s.push_back(subject_id(s, width));
            ca[1].s.push_back(s % 2 == 1 ? "group_0" : "group_1");
            ca[2].d.push_back(static_cast<double>(rng.next_index(1000)));
        }
    }

    Schema sb;
    sb.identifier = "id";
    sb.columns = {{"id", ColumnKind::Identifier}, {"y", ColumnKind::Numeric}};
    std::vector<Column> cb(2);
    cb[0].kind = ColumnKind::Identifier;
    cb[1].kind = ColumnKind::Numeric;
    for (int s = 0; s < n; ++s) {
        for (int r = 0; r < 2; ++r) {
            cb[0].s.push_back(subject_id(s, width));
            cb[1].d.push_back(static_cast<double>(rng.next_index(1000)));
        }
    }

    return {DataTable(std::move(sa), std::move(ca)), DataTable(std::move(sb), std::move(cb))};
}

}  // namespace derec
