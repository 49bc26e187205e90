#include "derec/pipeline.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include <json.hpp>

#include "derec/csv.hpp"
#include "derec/error.hpp"
#include "derec/io.hpp"

namespace derec {

namespace {

bool contextual_in(const ContextualReport& report, const std::string& name) {
    for (const auto& cv : report.columns) {
        if (cv.name == name) return cv.contextual;
    }
    return false;
}

template <typename T>
T modal_value(const std::vector<std::size_t>& rows, const std::vector<T>& cells) {
    std::map<T, std::pair<int, std::size_t>> counts;
    for (std::size_t k = 0; k < rows.size(); ++k) {
        auto [it, inserted] = counts.try_emplace(cells[rows[k]], std::make_pair(0, k));
        it->second.first += 1;
        (void)inserted;
    }
    const T* best = nullptr;
    int best_count = -1;
    std::size_t best_first = 0;
    for (const auto& [value, info] : counts) {
        auto [count, first] = info;
        if (count > best_count || (count == best_count && first < best_first)) {
            best = &value;
            best_count = count;
            best_first = first;
        }
    }
    return *best;
}

std::unordered_map<std::string, std::size_t> one_row_index(const DataTable& parent) {
    std::unordered_map<std::string, std::size_t> index;
    const auto& ids = parent.identifier_column().s;
    for (std::size_t r = 0; r < ids.size(); ++r) index.emplace(ids[r], r);
    return index;
}

}  // namespace

std::vector<std::string> ContextualReport::contextual_columns() const {
    std::vector<std::string> out;
    for (const auto& cv : columns) {
        if (cv.contextual) out.push_back(cv.name);
    }
    return out;
}

std::vector<std::string> ContextualReport::non_contextual_columns() const {
    std::vector<std::string> out;
    for (const auto& cv : columns) {
        if (!cv.contextual) out.push_back(cv.name);
    }
    return out;
}

const DataTable* DerecBundle::child(const std::string& tag) const {
    for (const auto& [t, table] : children) {
        if (t == tag) return &table;
    }
    return nullptr;
}

const ContextualReport& DerecBundle::report_for(const std::string& tag) const {
    for (const auto& report : partition) {
        if (report.table == tag) return report;
    }
    throw PairMismatch("no partition report for source '" + tag + "'");
}

ContextualReport detect(const DataTable& t, double threshold, const std::string& table_tag) {
    if (t.empty()) throw EmptyTable("detect on empty table '" + table_tag + "'");
    if (!(threshold > 0.0) || threshold > 1.0) {
        throw InputError("contextual threshold must lie in (0, 1]");
    }
    ContextualReport report;
    report.table = table_tag;
    report.threshold = threshold;
    const auto& subjects = t.subject_order();
    for (const auto& spec : t.schema().columns) {
        if (spec.kind == ColumnKind::Identifier) continue;
        const Column& col = t.column(spec.name);
        std::size_t constant = 0;
        for (const auto& id : subjects) {
            const auto& rows = t.subject_rows(id);
            bool all_same = true;
            if (col.is_text()) {
                const std::string& first = col.s[rows[0]];
                for (std::size_t r : rows) {
                    if (col.s[r] != first) {
                        all_same = false;
                        break;
                    }
                }
            } else {
                double first = col.d[rows[0]];
                for (std::size_t r : rows) {
                    if (col.d[r] != first) {
                        all_same = false;
                        break;
                    }
                }
            }
            if (all_same) ++constant;
        }
        double fraction = static_cast<double>(constant) / static_cast<double>(subjects.size());
        report.columns.push_back({spec.name, fraction, fraction >= threshold});
    }
    return report;
}

std::string parent_column_name(const std::string& column, const std::string& tag,
                               const ContextualReport& report_a,
                               const ContextualReport& report_b) {
    if (contextual_in(report_a, column) && contextual_in(report_b, column)) {
        return column + "@" + tag;
    }
    return column;
}

DataTable recreate(const DataTable& a, const DataTable& b,
                   const ContextualReport& report_a, const ContextualReport& report_b) {
    struct Source {
        const DataTable* table;
        const ContextualReport* report;
    };
    const Source sources[2] = {{&a, &report_a}, {&b, &report_b}};

    Schema parent_schema;
    parent_schema.identifier = a.schema().identifier;
    parent_schema.columns.push_back({parent_schema.identifier, ColumnKind::Identifier});
    std::size_t contextual_total = 0;
    for (const auto& src : sources) {
        for (const auto& name : src.report->contextual_columns()) {
            ++contextual_total;
            parent_schema.columns.push_back(
                {parent_column_name(name, src.report->table, report_a, report_b),
                 src.table->schema().column(name).kind});
        }
    }
    if (contextual_total == 0) {
        throw NoContextualColumns("no contextual columns in either source");
    }

    const auto& subjects = a.subject_order();
    std::vector<Column> cols(parent_schema.columns.size());
    for (std::size_t c = 0; c < cols.size(); ++c) cols[c].kind = parent_schema.columns[c].kind;
    cols[0].s = subjects;

    std::size_t out = 1;
    for (const auto& src : sources) {
        for (const auto& name : src.report->contextual_columns()) {
            const Column& col = src.table->column(name);
            Column& dst = cols[out++];
            for (const auto& id : subjects) {
                const auto& rows = src.table->subject_rows(id);
                if (col.is_text()) {
                    dst.s.push_back(modal_value(rows, col.s));
                } else {
                    dst.d.push_back(modal_value(rows, col.d));
                }
            }
        }
    }
    return DataTable(std::move(parent_schema), std::move(cols));
}

DerecBundle connect(DataTable parent, const DataTable& a, const DataTable& b,
                    const ContextualReport& report_a, const ContextualReport& report_b) {
    DerecBundle bundle;
    bundle.parent = std::move(parent);
    bundle.partition = {report_a, report_b};

    struct Source {
        const DataTable* table;
        const ContextualReport* report;
    };
    const Source sources[2] = {{&a, &report_a}, {&b, &report_b}};
    for (const auto& src : sources) {
        auto keep = src.report->non_contextual_columns();
        if (keep.empty()) continue;
        Schema child_schema;
        child_schema.identifier = src.table->schema().identifier;
        child_schema.columns.push_back({child_schema.identifier, ColumnKind::Identifier});
        std::vector<Column> cols;
        cols.push_back(src.table->identifier_column());
        for (const auto& name : keep) {
            child_schema.columns.push_back({name, src.table->schema().column(name).kind});
            cols.push_back(src.table->column(name));
        }
        bundle.children.emplace_back(src.report->table,
                                     DataTable(std::move(child_schema), std::move(cols)));
    }
    return bundle;
}

DerecBundle run_derec(const DataTable& a, const DataTable& b, double threshold) {
    auto [ka, kb] = intersect_subjects(a, b);
    ContextualReport ra = detect(ka, threshold, "a");
    ContextualReport rb = detect(kb, threshold, "b");
    DataTable parent = recreate(ka, kb, ra, rb);
    return connect(std::move(parent), ka, kb, ra, rb);
}

std::pair<DataTable, DataTable> reassemble(const DerecBundle& bundle) {
    if (bundle.partition.size() != 2) {
        throw PairMismatch("bundle must carry exactly two partition reports");
    }
    const ContextualReport& report_a = bundle.partition[0];
    const ContextualReport& report_b = bundle.partition[1];
    auto parent_row = one_row_index(bundle.parent);

    auto rebuild = [&](const ContextualReport& report) {
        const DataTable* child = bundle.child(report.table);
        Schema schema;
        std::vector<Column> cols;

        if (child != nullptr) {
            schema.identifier = child->schema().identifier;
            schema.columns.push_back({schema.identifier, ColumnKind::Identifier});
            cols.push_back(child->identifier_column());
            const auto& ids = child->identifier_column().s;
            for (const auto& cv : report.columns) {
                if (!cv.contextual) {
                    schema.columns.push_back({cv.name, child->schema().column(cv.name).kind});
                    cols.push_back(child->column(cv.name));
                    continue;
                }
                std::string pname = parent_column_name(cv.name, report.table, report_a, report_b);
                const Column& src = bundle.parent.column(pname);
                Column out;
                out.kind = src.kind;
                for (const auto& id : ids) {
                    auto it = parent_row.find(id);
                    if (it == parent_row.end()) {
                        throw UnknownSubject("child subject '" + id + "' missing from parent");
                    }
                    if (src.is_text()) {
                        out.s.push_back(src.s[it->second]);
                    } else {
                        out.d.push_back(src.d[it->second]);
                    }
                }
                schema.columns.push_back({cv.name, src.kind});
                cols.push_back(std::move(out));
            }
        } else {
            schema.identifier = bundle.parent.schema().identifier;
            schema.columns.push_back({schema.identifier, ColumnKind::Identifier});
            cols.push_back(bundle.parent.identifier_column());
            for (const auto& cv : report.columns) {
                std::string pname = parent_column_name(cv.name, report.table, report_a, report_b);
                const Column& src = bundle.parent.column(pname);
                schema.columns.push_back({cv.name, src.kind});
                cols.push_back(src);
            }
        }
        return DataTable(std::move(schema), std::move(cols));
    };

    return {rebuild(report_a), rebuild(report_b)};
}

std::string partition_to_json_text(const std::vector<ContextualReport>& reports) {
    nlohmann::ordered_json doc;
    doc["threshold"] = reports.empty() ? 0.0 : reports[0].threshold;
    doc["sources"] = nlohmann::ordered_json::array();
    for (const auto& report : reports) {
        nlohmann::ordered_json src;
        src["table"] = report.table;
        src["columns"] = nlohmann::ordered_json::array();
        for (const auto& cv : report.columns) {
            src["columns"].push_back(
                {{"name", cv.name}, {"fraction", cv.fraction}, {"contextual", cv.contextual}});
        }
        doc["sources"].push_back(std::move(src));
    }
    return doc.dump(2) + "\n";
}

std::vector<ContextualReport> partition_from_json_text(const std::string& text,
                                                       const std::string& where) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded() || !doc.contains("threshold") || !doc.contains("sources")) {
        throw ParseError("invalid partition document " + where);
    }
    std::vector<ContextualReport> reports;
    for (const auto& src : doc["sources"]) {
        ContextualReport report;
        report.table = src.at("table").get<std::string>();
        report.threshold = doc["threshold"].get<double>();
        for (const auto& col : src.at("columns")) {
            report.columns.push_back({col.at("name").get<std::string>(),
                                      col.at("fraction").get<double>(),
                                      col.at("contextual").get<bool>()});
        }
        reports.push_back(std::move(report));
    }
    if (reports.empty()) throw ParseError("partition document lists no sources: " + where);
    return reports;
}

void save_bundle(const std::filesystem::path& dir, const DerecBundle& bundle) {
    std::filesystem::create_directories(dir);
    save_csv(dir / "parent.csv", bundle.parent);
    save_schema(dir / "parent.schema.json", bundle.parent.schema());
    for (const auto& [tag, table] : bundle.children) {
        save_csv(dir / ("child_" + tag + ".csv"), table);
        save_schema(dir / ("child_" + tag + ".schema.json"), table.schema());
    }
    atomic_write_text(dir / "partition.json", partition_to_json_text(bundle.partition));
}

DerecBundle load_bundle(const std::filesystem::path& dir) {
    auto need = [&](const std::filesystem::path& p) {
        if (!std::filesystem::exists(p)) {
            throw MissingArtifact("expected file '" + p.string() + "'");
        }
        return p;
    };
    DerecBundle bundle;
    bundle.partition =
        partition_from_json_text(read_text_file(need(dir / "partition.json")), "partition.json");
    bundle.parent = load_csv(need(dir / "parent.csv"),
                             load_schema(need(dir / "parent.schema.json")));
    for (const auto& report : bundle.partition) {
        if (report.non_contextual_columns().empty()) continue;
        std::string base = "child_" + report.table;
        Schema schema = load_schema(need(dir / (base + ".schema.json")));
        bundle.children.emplace_back(report.table,
                                     load_csv(need(dir / (base + ".csv")), schema));
    }
    return bundle;
}

}  // namespace derec
