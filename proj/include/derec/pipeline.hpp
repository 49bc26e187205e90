#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "derec/table.hpp"

namespace derec {

struct ColumnVerdict {
    std::string name;
    double fraction = 0.0;
    bool contextual = false;
};

// Per-source detection result; `columns` lists every non-identifier column
// of the source in schema order.
struct ContextualReport {
    std::string table;
    double threshold = 0.0;
    std::vector<ColumnVerdict> columns;

    std::vector<std::string> contextual_columns() const;
    std::vector<std::string> non_contextual_columns() const;
};

struct DerecBundle {
    DataTable parent;
    std::vector<std::pair<std::string, DataTable>> children;
    std::vector<ContextualReport> partition;

    const DataTable* child(const std::string& tag) const;
    const ContextualReport& report_for(const std::string& tag) const;
};

// Fraction of subjects whose rows hold a single value, per column.
ContextualReport detect(const DataTable& t, double threshold, const std::string& table_tag);

// Parent table: one row per subject, contextual columns from both sources,
// modal representative per subject (ties broken by first occurrence),
// subjects ordered by first appearance in `a`. A contextual name present in
// both sources is stored as name@<tag> on each side.
DataTable recreate(const DataTable& a, const DataTable& b,
                   const ContextualReport& report_a, const ContextualReport& report_b);

DerecBundle connect(DataTable parent, const DataTable& a, const DataTable& b,
                    const ContextualReport& report_a, const ContextualReport& report_b);

// intersect_subjects -> detect x2 -> recreate -> connect.
DerecBundle run_derec(const DataTable& a, const DataTable& b, double threshold);

// Parent column name for a source column, undoing the collision suffix.
std::string parent_column_name(const std::string& column, const std::string& tag,
                               const ContextualReport& report_a,
                               const ContextualReport& report_b);

// Broadcasts parent values back onto each source's rows: per source, one
// table with the identifier first, then that source's columns in report
// order. Sources without a child come back with one row per subject.
std::pair<DataTable, DataTable> reassemble(const DerecBundle& bundle);

std::string partition_to_json_text(const std::vector<ContextualReport>& reports);
std::vector<ContextualReport> partition_from_json_text(const std::string& text,
                                                       const std::string& where);

// Directory layout: parent.csv/.schema.json, child_<tag>.csv/.schema.json
// for sources with non-contextual columns, and partition.json.
void save_bundle(const std::filesystem::path& dir, const DerecBundle& bundle);
DerecBundle load_bundle(const std::filesystem::path& dir);

}  // namespace derec
