#pragma once

#include <cstddef>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace derec {

enum class ColumnKind { Identifier, Categorical, Numeric };

const char* column_kind_name(ColumnKind kind);
ColumnKind column_kind_from_name(const std::string& name);

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::Categorical;

    bool operator==(const ColumnSpec&) const = default;
};

struct Schema {
    std::vector<ColumnSpec> columns;
    std::string identifier;

    bool operator==(const Schema&) const = default;

    // -1 when the column is absent.
    int column_index(const std::string& name) const;
    const ColumnSpec& column(const std::string& name) const;
    int identifier_index() const;
    bool has_column(const std::string& name) const { return column_index(name) >= 0; }

    // Throws SchemaMismatch unless the identifier names exactly one
    // column of identifier kind and no other column has that kind.
    void validate() const;
};

// One column of cells. Identifier and categorical cells live in `s`,
// numeric cells in `d`; the other vector stays empty.
struct Column {
    ColumnKind kind = ColumnKind::Categorical;
    std::vector<std::string> s;
    std::vector<double> d;

    std::size_t size() const { return kind == ColumnKind::Numeric ? d.size() : s.size(); }
    bool is_text() const { return kind != ColumnKind::Numeric; }
    std::string cell_text(std::size_t row) const;
};

// Immutable columnar table with a subject index built at construction.
class DataTable {
public:
    DataTable() = default;
    DataTable(Schema schema, std::vector<Column> columns);

    const Schema& schema() const { return schema_; }
    std::size_t num_rows() const { return num_rows_; }
    std::size_t num_cols() const { return columns_.size(); }
    bool empty() const { return num_rows_ == 0; }

    const Column& column(std::size_t index) const { return columns_.at(index); }
    const Column& column(const std::string& name) const;
    const Column& identifier_column() const;

    // Subject ids in order of first appearance.
    const std::vector<std::string>& subject_order() const { return subject_order_; }
    std::size_t num_subjects() const { return subject_order_.size(); }
    bool has_subject(const std::string& id) const;
    const std::vector<std::size_t>& subject_rows(const std::string& id) const;

private:
    Schema schema_;
    std::vector<Column> columns_;
    std::size_t num_rows_ = 0;
    std::vector<std::string> subject_order_;
    std::unordered_map<std::string, std::vector<std::size_t>> subject_rows_;
};

// Shared subject ids sorted lexicographically. Throws DisjointSubjects
// when the tables have no subject in common.
std::vector<std::string> shared_subjects(const DataTable& a, const DataTable& b);

// Copies of both tables keeping only rows whose subject appears in both,
// relative row order preserved. Throws DisjointSubjects on empty intersection.
std::pair<DataTable, DataTable> intersect_subjects(const DataTable& a, const DataTable& b);

// Row subset in the given order (indices may repeat).
DataTable select_rows(const DataTable& t, const std::vector<std::size_t>& rows);

}  // namespace derec
