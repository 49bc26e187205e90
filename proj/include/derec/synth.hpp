#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "derec/pipeline.hpp"
#include "derec/rng.hpp"

namespace derec {

enum class SynthMethod { Copy, IndependentMarginal, SubjectConditional, External };

const char* synth_method_name(SynthMethod method);
SynthMethod synth_method_from_name(const std::string& name);

struct SynthesizerSpec {
    SynthMethod method = SynthMethod::IndependentMarginal;
    std::uint64_t seed = 0;
    std::filesystem::path exchange_dir;
    double poll_seconds = 0.5;
    double timeout_seconds = 60.0;
};

// Deep copy with fresh opaque subject identifiers.
DerecBundle synth_copy(const DerecBundle& bundle);

// Every column drawn i.i.d. from its own marginal; per-subject row counts
// drawn from the original rows-per-subject histogram. Destroys cross-column
// dependence, preserves marginals in expectation.
DerecBundle synth_independent(const DerecBundle& bundle, std::uint64_t seed);

// Parent rows resampled from the original parent joint; each synthetic
// subject's child rows copied from a donor subject whose parent values
// match (full tuple, then per-column mixture, then any subject).
DerecBundle synth_conditional(const DerecBundle& bundle, std::uint64_t seed);

// Child tables for externally supplied parent rows, using the donor backoff
// above. Exposed so the backoff tiers stay reachable and testable.
std::vector<std::pair<std::string, DataTable>> sample_children(const DerecBundle& bundle,
                                                               const DataTable& syn_parent,
                                                               Rng& rng);

// Writes original/ tables into the exchange directory, polls for
// synthetic/DONE, then loads the synthetic/ mirror under the original
// schemas.
DerecBundle external_exchange(const DerecBundle& bundle, const std::filesystem::path& dir,
                              double poll_seconds, double timeout_seconds);

DerecBundle synthesize(const DerecBundle& bundle, const SynthesizerSpec& spec);

}  // namespace derec
