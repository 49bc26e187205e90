#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "derec/table.hpp"

namespace derec {

// RFC 4180 cells, one vector per record. Quoted cells may contain
// commas, doubled quotes and newlines; CRLF and LF both end records.
std::vector<std::vector<std::string>> parse_csv_text(const std::string& text,
                                                     const std::string& where);

DataTable load_csv(const std::filesystem::path& path, const Schema& schema);
DataTable table_from_csv_text(const std::string& text, const Schema& schema,
                              const std::string& where);

std::string table_to_csv_text(const DataTable& table);
void save_csv(const std::filesystem::path& path, const DataTable& table);

Schema load_schema(const std::filesystem::path& path);
Schema schema_from_json_text(const std::string& text, const std::string& where);
std::string schema_to_json_text(const Schema& schema);
void save_schema(const std::filesystem::path& path, const Schema& schema);

}  // namespace derec
