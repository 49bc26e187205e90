#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "derec/table.hpp"

namespace derec {

// Column plant: contextual columns are constant within subject except for a
// chosen fraction of deviant subjects; categorical alphabets hold 2 to 20
// symbols named <column>_<i>.
struct GenColumn {
    std::string name;
    ColumnKind kind = ColumnKind::Categorical;
    bool contextual = false;
    double noise = 0.0;
    int alphabet = 4;
};

struct GenSource {
    std::string table;
    std::vector<GenColumn> columns;
};

// Cross-source link: the given column (contextual categorical, first source)
// steers the target column (plain categorical, second source). With
// probability `strength` a target cell is the permuted image of the
// subject's given value, otherwise an independent draw.
struct GenDependency {
    std::string given;
    std::string target;
    double strength = 1.0;
};

struct GenSpec {
    std::uint64_t seed = 0;
    int subjects = 0;
    int rows_min = 1;
    int rows_max = 3;
    double rows_skew = 0.0;
    std::vector<GenSource> sources;
    std::vector<GenDependency> dependencies;
};

void validate_gen_spec(const GenSpec& spec);
GenSpec gen_spec_from_json_text(const std::string& text, const std::string& where);

struct ColumnTruth {
    std::string table;
    std::string name;
    ColumnKind kind = ColumnKind::Categorical;
    bool contextual = false;
    double noise = 0.0;
    int deviants = 0;
    // realized share of subjects whose rows hold a single value
    double fraction = 0.0;
};

struct DependencyTruth {
    std::string given;
    std::string target;
    double strength = 0.0;
    std::vector<std::pair<std::string, std::string>> map;
};

struct GroundTruth {
    std::uint64_t seed = 0;
    int subjects = 0;
    std::vector<ColumnTruth> columns;
    std::vector<DependencyTruth> dependencies;
};

std::string truth_to_json_text(const GroundTruth& truth);

struct GenResult {
    DataTable a;
    DataTable b;
    GroundTruth truth;
};

// Deterministic in spec.seed. Contextual plants deviate in exactly
// round(noise * subjects) subjects, each picked among subjects with at
// least two rows and forced to hold two distinct values, so the realized
// constant fraction is (subjects - deviants) / subjects on the nose.
GenResult generate(const GenSpec& spec);

// Two tables where one subject owns more than half of all first-table rows
// under its own private contextual value. The row-level marginal of that
// column is then far from the subject-level one (total variation well over
// 0.3), while per-subject representatives recover the subject-level truth.
std::pair<DataTable, DataTable> contextual_disturbance_fixture(const GenSpec& spec);

}  // namespace derec
