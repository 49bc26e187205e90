#include "derec/synth.hpp"

#include <chrono>
#include <map>
#include <thread>
#include <unordered_map>

#include "derec/csv.hpp"
#include "derec/error.hpp"

namespace derec {

namespace {

std::string synth_id(std::size_t i) {
    std::string n = std::to_string(i + 1);
    if (n.size() < 5) n.insert(0, 5 - n.size(), '0');
    return "s" + n;
}

std::vector<std::string> fresh_ids(std::size_t count) {
    std::vector<std::string> ids;
    ids.reserve(count);
    for (std::size_t i = 0; i < count; ++i) ids.push_back(synth_id(i));
    return ids;
}

DataTable relabel_subjects(const DataTable& t,
                           const std::unordered_map<std::string, std::string>& rename) {
    std::vector<Column> cols;
    for (std::size_t c = 0; c < t.num_cols(); ++c) cols.push_back(t.column(c));
    auto& ids = cols[static_cast<std::size_t>(t.schema().identifier_index())].s;
    for (auto& id : ids) id = rename.at(id);
    return DataTable(t.schema(), std::move(cols));
}

// Key for a parent row: all non-identifier cells, unit-separated.
std::string parent_key(const DataTable& parent, std::size_t row) {
    std::string key;
    for (std::size_t c = 0; c < parent.num_cols(); ++c) {
        if (parent.schema().columns[c].kind == ColumnKind::Identifier) continue;
        key += parent.column(c).cell_text(row);
        key += '\x1f';
    }
    return key;
}

void append_row(std::vector<Column>& cols, const DataTable& src, std::size_t row,
                const std::string& new_id) {
    for (std::size_t c = 0; c < src.num_cols(); ++c) {
        const Column& in = src.column(c);
        Column& out = cols[c];
        if (in.kind == ColumnKind::Identifier) {
            out.s.push_back(new_id);
        } else if (in.is_text()) {
            out.s.push_back(in.s[row]);
        } else {
            out.d.push_back(in.d[row]);
        }
    }
}

std::vector<Column> empty_like(const DataTable& t) {
    std::vector<Column> cols(t.num_cols());
    for (std::size_t c = 0; c < t.num_cols(); ++c) cols[c].kind = t.column(c).kind;
    return cols;
}

}  // namespace

const char* synth_method_name(SynthMethod method) {
    switch (method) {
        case SynthMethod::Copy: return "copy";
        case SynthMethod::IndependentMarginal: return "independent";
        case SynthMethod::SubjectConditional: return "conditional";
        case SynthMethod::External: return "external";
    }
    return "independent";
}

SynthMethod synth_method_from_name(const std::string& name) {
    if (name == "copy") return SynthMethod::Copy;
    if (name == "independent") return SynthMethod::IndependentMarginal;
    if (name == "conditional") return SynthMethod::SubjectConditional;
    if (name == "external") return SynthMethod::External;
    throw InputError("unknown synthesizer '" + name + "'");
}

DerecBundle synth_copy(const DerecBundle& bundle) {
    const auto& subjects = bundle.parent.subject_order();
    auto ids = fresh_ids(subjects.size());
    std::unordered_map<std::string, std::string> rename;
    for (std::size_t i = 0; i < subjects.size(); ++i) rename.emplace(subjects[i], ids[i]);

    DerecBundle out;
    out.partition = bundle.partition;
    out.parent = relabel_subjects(bundle.parent, rename);
    for (const auto& [tag, child] : bundle.children) {
        out.children.emplace_back(tag, relabel_subjects(child, rename));
    }
    return out;
}

DerecBundle synth_independent(const DerecBundle& bundle, std::uint64_t seed) {
    Rng rng(seed);
    const std::size_t n_subjects = bundle.parent.num_subjects();
    auto ids = fresh_ids(n_subjects);

    DerecBundle out;
    out.partition = bundle.partition;

    auto cols = empty_like(bundle.parent);
    cols[static_cast<std::size_t>(bundle.parent.schema().identifier_index())].s = ids;
    for (std::size_t c = 0; c < bundle.parent.num_cols(); ++c) {
        const Column& src = bundle.parent.column(c);
        if (src.kind == ColumnKind::Identifier) continue;
        for (std::size_t i = 0; i < n_subjects; ++i) {
            std::size_t r = rng.next_index(bundle.parent.num_rows());
            if (src.is_text()) {
                cols[c].s.push_back(src.s[r]);
            } else {
                cols[c].d.push_back(src.d[r]);
            }
        }
    }
    out.parent = DataTable(bundle.parent.schema(), std::move(cols));

    for (const auto& [tag, child] : bundle.children) {
        std::vector<std::size_t> row_counts;
        row_counts.reserve(child.num_subjects());
        for (const auto& id : child.subject_order()) {
            row_counts.push_back(child.subject_rows(id).size());
        }
        auto child_cols = empty_like(child);
        const int id_idx = child.schema().identifier_index();
        for (std::size_t i = 0; i < n_subjects; ++i) {
            std::size_t rows = row_counts[rng.next_index(row_counts.size())];
            for (std::size_t k = 0; k < rows; ++k) {
                for (std::size_t c = 0; c < child.num_cols(); ++c) {
                    const Column& src = child.column(c);
                    if (static_cast<int>(c) == id_idx) {
                        child_cols[c].s.push_back(ids[i]);
                        continue;
                    }
                    std::size_t r = rng.next_index(child.num_rows());
                    if (src.is_text()) {
                        child_cols[c].s.push_back(src.s[r]);
                    } else {
                        child_cols[c].d.push_back(src.d[r]);
                    }
                }
            }
        }
        out.children.emplace_back(tag, DataTable(child.schema(), std::move(child_cols)));
    }
    return out;
}

std::vector<std::pair<std::string, DataTable>> sample_children(const DerecBundle& bundle,
                                                               const DataTable& syn_parent,
                                                               Rng& rng) {
    const DataTable& parent = bundle.parent;
    const auto& orig_subjects = parent.subject_order();

    // donor lookup: full tuple, then single columns
    std::unordered_map<std::string, std::vector<std::size_t>> by_tuple;
    for (std::size_t i = 0; i < orig_subjects.size(); ++i) {
        by_tuple[parent_key(parent, parent.subject_rows(orig_subjects[i])[0])].push_back(i);
    }
    std::vector<std::size_t> value_columns;
    for (std::size_t c = 0; c < parent.num_cols(); ++c) {
        if (parent.schema().columns[c].kind != ColumnKind::Identifier) value_columns.push_back(c);
    }
    std::vector<std::unordered_map<std::string, std::vector<std::size_t>>> by_column(
        value_columns.size());
    for (std::size_t i = 0; i < orig_subjects.size(); ++i) {
        std::size_t row = parent.subject_rows(orig_subjects[i])[0];
        for (std::size_t k = 0; k < value_columns.size(); ++k) {
            by_column[k][parent.column(value_columns[k]).cell_text(row)].push_back(i);
        }
    }

    const auto& syn_ids = syn_parent.subject_order();
    std::vector<std::size_t> donor_of(syn_ids.size());
    for (std::size_t s = 0; s < syn_ids.size(); ++s) {
        std::size_t row = syn_parent.subject_rows(syn_ids[s])[0];
        auto it = by_tuple.find(parent_key(syn_parent, row));
        if (it != by_tuple.end()) {
            donor_of[s] = it->second[rng.next_index(it->second.size())];
            continue;
        }
        std::vector<const std::vector<std::size_t>*> column_hits;
        for (std::size_t k = 0; k < value_columns.size(); ++k) {
            auto hit = by_column[k].find(syn_parent.column(value_columns[k]).cell_text(row));
            if (hit != by_column[k].end()) column_hits.push_back(&hit->second);
        }
        if (!column_hits.empty()) {
            const auto& donors = *column_hits[rng.next_index(column_hits.size())];
            donor_of[s] = donors[rng.next_index(donors.size())];
        } else {
            donor_of[s] = rng.next_index(orig_subjects.size());
        }
    }

    std::vector<std::pair<std::string, DataTable>> children;
    for (const auto& [tag, child] : bundle.children) {
        auto cols = empty_like(child);
        for (std::size_t s = 0; s < syn_ids.size(); ++s) {
            const auto& donor_rows = child.subject_rows(orig_subjects[donor_of[s]]);
            for (std::size_t r : donor_rows) append_row(cols, child, r, syn_ids[s]);
        }
        children.emplace_back(tag, DataTable(child.schema(), std::move(cols)));
    }
    return children;
}

DerecBundle synth_conditional(const DerecBundle& bundle, std::uint64_t seed) {
    Rng rng(seed);
    const DataTable& parent = bundle.parent;
    const std::size_t n_subjects = parent.num_subjects();
    auto ids = fresh_ids(n_subjects);

    auto cols = empty_like(parent);
    for (std::size_t i = 0; i < n_subjects; ++i) {
        std::size_t r = rng.next_index(parent.num_rows());
        append_row(cols, parent, r, ids[i]);
    }

    DerecBundle out;
    out.partition = bundle.partition;
    out.parent = DataTable(parent.schema(), std::move(cols));
    out.children = sample_children(bundle, out.parent, rng);
    return out;
}

DerecBundle external_exchange(const DerecBundle& bundle, const std::filesystem::path& dir,
                              double poll_seconds, double timeout_seconds) {
    save_bundle(dir / "original", bundle);

    const auto deadline = std::chrono::steady_clock::now() +
                          std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                              std::chrono::duration<double>(timeout_seconds));
    const auto sentinel = dir / "synthetic" / "DONE";
    while (!std::filesystem::exists(sentinel)) {
        if (std::chrono::steady_clock::now() >= deadline) {
            throw ExternalTimeout("no synthetic data under '" + (dir / "synthetic").string() +
                                  "' after " + std::to_string(timeout_seconds) + "s");
        }
        std::this_thread::sleep_for(std::chrono::duration<double>(poll_seconds));
    }

    const auto syn_dir = dir / "synthetic";
    auto need = [&](const std::filesystem::path& p) {
        if (!std::filesystem::exists(p)) {
            throw MissingArtifact("external synthesizer left no '" + p.string() + "'");
        }
        return p;
    };
    DerecBundle out;
    out.partition = bundle.partition;
    out.parent = load_csv(need(syn_dir / "parent.csv"), bundle.parent.schema());
    for (const auto& [tag, child] : bundle.children) {
        out.children.emplace_back(
            tag, load_csv(need(syn_dir / ("child_" + tag + ".csv")), child.schema()));
    }
    return out;
}

DerecBundle synthesize(const DerecBundle& bundle, const SynthesizerSpec& spec) {
    switch (spec.method) {
        case SynthMethod::Copy:
            return synth_copy(bundle);
        case SynthMethod::IndependentMarginal:
            return synth_independent(bundle, spec.seed);
        case SynthMethod::SubjectConditional:
            return synth_conditional(bundle, spec.seed);
        case SynthMethod::External:
            return external_exchange(bundle, spec.exchange_dir, spec.poll_seconds,
                                     spec.timeout_seconds);
    }
    throw InputError("unhandled synthesizer method");
}

}  // namespace derec
