#include "derec/table.hpp"

#include <algorithm>

#include "derec/error.hpp"
#include "derec/num.hpp"

namespace derec {

const char* column_kind_name(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::Identifier: return "identifier";
        case ColumnKind::Categorical: return "categorical";
        case ColumnKind::Numeric: return "numeric";
    }
    return "categorical";
}

ColumnKind column_kind_from_name(const std::string& name) {
    if (name == "identifier") return ColumnKind::Identifier;
    if (name == "categorical") return ColumnKind::Categorical;
    if (name == "numeric") return ColumnKind::Numeric;
    throw SchemaMismatch("unknown column kind '" + name + "'");
}

int Schema::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (columns[i].name == name) return static_cast<int>(i);
    }
    return -1;
}

const ColumnSpec& Schema::column(const std::string& name) const {
    int idx = column_index(name);
    if (idx < 0) throw SchemaMismatch("no column named '" + name + "'");
    return columns[static_cast<std::size_t>(idx)];
}

int Schema::identifier_index() const {
    return column_index(identifier);
}

void Schema::validate() const {
    if (columns.empty()) throw SchemaMismatch("schema has no columns");
    int id_idx = column_index(identifier);
    if (identifier.empty() || id_idx < 0) {
        throw SchemaMismatch("identifier column '" + identifier + "' not present");
    }
    for (std::size_t i = 0; i < columns.size(); ++i) {
        bool is_id_kind = columns[i].kind == ColumnKind::Identifier;
        bool is_the_id = static_cast<int>(i) == id_idx;
        if (is_the_id && !is_id_kind) {
            throw SchemaMismatch("identifier column '" + identifier + "' must have identifier kind");
        }
        if (!is_the_id && is_id_kind) {
            throw SchemaMismatch("column '" + columns[i].name + "' duplicates the identifier kind");
        }
        for (std::size_t j = i + 1; j < columns.size(); ++j) {
            if (columns[i].name == columns[j].name) {
                throw SchemaMismatch("duplicate column name '" + columns[i].name + "'");
            }
        }
    }
}

std::string Column::cell_text(std::size_t row) const {
    if (kind == ColumnKind::Numeric) return format_double(d.at(row));
    return s.at(row);
}

DataTable::DataTable(Schema schema, std::vector<Column> columns)
    : schema_(std::move(schema)), columns_(std::move(columns)) {
    schema_.validate();
    if (columns_.size() != schema_.columns.size()) {
        throw SchemaMismatch("column count does not match schema");
    }
    num_rows_ = columns_.empty() ? 0 : columns_[0].size();
    for (std::size_t i = 0; i < columns_.size(); ++i) {
        if (columns_[i].kind != schema_.columns[i].kind) {
            throw SchemaMismatch("column '" + schema_.columns[i].name + "' kind does not match schema");
        }
        if (columns_[i].size() != num_rows_) {
            throw SchemaMismatch("column '" + schema_.columns[i].name + "' has ragged length");
        }
    }
    const auto& ids = columns_[static_cast<std::size_t>(schema_.identifier_index())].s;
    for (std::size_t row = 0; row < ids.size(); ++row) {
        auto [it, inserted] = subject_rows_.try_emplace(ids[row]);
        if (inserted) subject_order_.push_back(ids[row]);
        it->second.push_back(row);
    }
}

const Column& DataTable::column(const std::string& name) const {
    int idx = schema_.column_index(name);
    if (idx < 0) throw SchemaMismatch("no column named '" + name + "'");
    return columns_[static_cast<std::size_t>(idx)];
}

const Column& DataTable::identifier_column() const {
    return columns_[static_cast<std::size_t>(schema_.identifier_index())];
}

bool DataTable::has_subject(const std::string& id) const {
    return subject_rows_.find(id) != subject_rows_.end();
}

const std::vector<std::size_t>& DataTable::subject_rows(const std::string& id) const {
    auto it = subject_rows_.find(id);
    if (it == subject_rows_.end()) throw UnknownSubject("subject '" + id + "' not in table");
    return it->second;
}

std::vector<std::string> shared_subjects(const DataTable& a, const DataTable& b) {
    std::vector<std::string> shared;
    for (const auto& id : a.subject_order()) {
        if (b.has_subject(id)) shared.push_back(id);
    }
    std::sort(shared.begin(), shared.end());
    if (shared.empty()) throw DisjointSubjects("tables share no subject ids");
    return shared;
}

DataTable select_rows(const DataTable& t, const std::vector<std::size_t>& rows) {
    std::vector<Column> cols;
    cols.reserve(t.num_cols());
    for (std::size_t c = 0; c < t.num_cols(); ++c) {
        const Column& src = t.column(c);
        Column out;
        out.kind = src.kind;
        if (src.is_text()) {
            out.s.reserve(rows.size());
            for (std::size_t r : rows) out.s.push_back(src.s.at(r));
        } else {
            out.d.reserve(rows.size());
            for (std::size_t r : rows) out.d.push_back(src.d.at(r));
        }
        cols.push_back(std::move(out));
    }
    return DataTable(t.schema(), std::move(cols));
}

std::pair<DataTable, DataTable> intersect_subjects(const DataTable& a, const DataTable& b) {
    std::vector<std::string> shared = shared_subjects(a, b);
    auto keep = [&](const DataTable& t) {
        std::vector<std::size_t> rows;
        const auto& ids = t.identifier_column().s;
        for (std::size_t r = 0; r < ids.size(); ++r) {
            if (std::binary_search(shared.begin(), shared.end(), ids[r])) rows.push_back(r);
        }
        return select_rows(t, rows);
    };
    return {keep(a), keep(b)};
}

}  // namespace derec
