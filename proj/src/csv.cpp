#include "derec/csv.hpp"

#include <cmath>

#include <json.hpp>

#include "derec/error.hpp"
#include "derec/io.hpp"
#include "derec/num.hpp"

namespace derec {

namespace {

std::string cell_ref(const std::string& where, std::size_t row, std::size_t col) {
    return where + " row " + std::to_string(row) + " column " + std::to_string(col);
}

bool needs_quoting(const std::string& cell) {
    return cell.find_first_of(",\"\r\n") != std::string::npos;
}

void append_cell(std::string& out, const std::string& cell) {
    if (!needs_quoting(cell)) {
        out += cell;
        return;
    }
    out += '"';
    for (char c : cell) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

}  // namespace

std::vector<std::vector<std::string>> parse_csv_text(const std::string& text,
                                                     const std::string& where) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string cell;
    bool in_quotes = false;
    bool cell_started = false;
    std::size_t line = 1;

    auto end_cell = [&] {
        record.push_back(std::move(cell));
        cell.clear();
        cell_started = false;
    };
    auto end_record = [&] {
        end_cell();
        records.push_back(std::move(record));
        record.clear();
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line;
                cell += c;
            }
            continue;
        }
        switch (c) {
            case '"':
                if (cell_started && !cell.empty()) {
                    throw ParseError("stray quote in " + where + " line " + std::to_string(line));
                }
                in_quotes = true;
                cell_started = true;
                break;
            case ',':
                end_cell();
                break;
            case '\r':
                break;
            case '\n':
                end_record();
                ++line;
                break;
            default:
                cell += c;
                cell_started = true;
                break;
        }
    }
    if (in_quotes) throw ParseError("unterminated quoted cell in " + where);
    if (cell_started || !record.empty()) end_record();
    return records;
}

DataTable table_from_csv_text(const std::string& text, const Schema& schema,
                              const std::string& where) {
    schema.validate();
    auto records = parse_csv_text(text, where);
    if (records.empty()) throw EmptyTable(where + " has no header row");

    const auto& header = records[0];
    if (header.size() != schema.columns.size()) {
        throw SchemaMismatch(where + " header has " + std::to_string(header.size()) +
                             " columns, schema expects " + std::to_string(schema.columns.size()));
    }
    for (std::size_t c = 0; c < header.size(); ++c) {
        if (header[c] != schema.columns[c].name) {
            throw SchemaMismatch(where + " header column " + std::to_string(c + 1) + " is '" +
                                 header[c] + "', schema expects '" + schema.columns[c].name + "'");
        }
    }
    if (records.size() == 1) throw EmptyTable(where + " has zero data rows");

    std::vector<Column> columns(schema.columns.size());
    for (std::size_t c = 0; c < columns.size(); ++c) {
        columns[c].kind = schema.columns[c].kind;
        if (columns[c].is_text()) {
            columns[c].s.reserve(records.size() - 1);
        } else {
            columns[c].d.reserve(records.size() - 1);
        }
    }
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& row = records[r];
        if (row.size() != schema.columns.size()) {
            throw ParseError(where + " row " + std::to_string(r) + " has " +
                             std::to_string(row.size()) + " cells, expected " +
                             std::to_string(schema.columns.size()));
        }
        for (std::size_t c = 0; c < row.size(); ++c) {
            const std::string& cell = row[c];
            if (cell.empty()) {
                throw ParseError("blank cell at " + cell_ref(where, r, c + 1));
            }
            Column& col = columns[c];
            if (col.is_text()) {
                col.s.push_back(cell);
            } else {
                double v = parse_double(cell, cell_ref(where, r, c + 1));
                if (!std::isfinite(v)) {
                    throw ParseError("non-finite value at " + cell_ref(where, r, c + 1));
                }
                col.d.push_back(v);
            }
        }
    }
    return DataTable(schema, std::move(columns));
}

DataTable load_csv(const std::filesystem::path& path, const Schema& schema) {
    return table_from_csv_text(read_text_file(path), schema, path.filename().string());
}

std::string table_to_csv_text(const DataTable& table) {
    std::string out;
    const Schema& schema = table.schema();
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        if (c) out += ',';
        append_cell(out, schema.columns[c].name);
    }
    out += '\n';
    for (std::size_t r = 0; r < table.num_rows(); ++r) {
        for (std::size_t c = 0; c < table.num_cols(); ++c) {
            if (c) out += ',';
            append_cell(out, table.column(c).cell_text(r));
        }
        out += '\n';
    }
    return out;
}

void save_csv(const std::filesystem::path& path, const DataTable& table) {
    atomic_write_text(path, table_to_csv_text(table));
}

Schema schema_from_json_text(const std::string& text, const std::string& where) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw ParseError("invalid schema document " + where);
    if (!doc.is_object() || !doc.contains("columns") || !doc.contains("identifier")) {
        throw SchemaMismatch(where + " must carry 'columns' and 'identifier'");
    }
    Schema schema;
    schema.identifier = doc.at("identifier").get<std::string>();
    for (const auto& entry : doc.at("columns")) {
        if (!entry.contains("name") || !entry.contains("kind")) {
            throw SchemaMismatch(where + " column entries need 'name' and 'kind'");
        }
        schema.columns.push_back({entry.at("name").get<std::string>(),
                                  column_kind_from_name(entry.at("kind").get<std::string>())});
    }
    schema.validate();
    return schema;
}

Schema load_schema(const std::filesystem::path& path) {
    return schema_from_json_text(read_text_file(path), path.filename().string());
}

std::string schema_to_json_text(const Schema& schema) {
    nlohmann::ordered_json doc;
    doc["columns"] = nlohmann::ordered_json::array();
    for (const auto& col : schema.columns) {
        doc["columns"].push_back({{"name", col.name}, {"kind", column_kind_name(col.kind)}});
    }
    doc["identifier"] = schema.identifier;
    return doc.dump(2) + "\n";
}

void save_schema(const std::filesystem::path& path, const Schema& schema) {
    atomic_write_text(path, schema_to_json_text(schema));
}

}  // namespace derec
