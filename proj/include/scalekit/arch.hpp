#pragma once

// Architecture configurations, exact parameter counts, and memory-state /
// KV-cache sizes for Transformer and xLSTM (mLSTM-based) models.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace scalekit {

enum class ArchKind { transformer, xlstm };

// Sequence-mix variants whose recurrent state / KV cache we can size.
// MLA appears only here: there are no parameter or FLOP formulas for it.
enum class SeqMixKind { mha, gqa, mla, mlstm };

struct ArchConfig {
    ArchKind kind = ArchKind::transformer;
    std::uint64_t d_model = 0;
    std::uint64_t d_ff = 0;
    std::uint64_t d_qk = 0;
    std::uint64_t d_hv = 0;
    std::uint64_t n_head_q = 0;
    // Key/value head count; must divide n_head_q (GQA grouping) and equals
    // n_head_q for MHA. For xlstm it is unused and must equal n_head_q.
    std::uint64_t n_head_kv = 0;
    std::uint64_t n_layer = 0;
    std::uint64_t n_vocab = 50257;
    // Chunk length L of the chunkwise-parallel mLSTM formulation; xlstm only.
    std::uint64_t chunk_size = 64;
};

// Returns every violated invariant; empty means the config is valid.
std::vector<std::string> validate_config(const ArchConfig& cfg);

// Throws invalid_input listing all violations.
void require_valid(const ArchConfig& cfg);

// Exact per-component parameter counts. total is the sum of the components
// with the per-layer entries multiplied by n_layer.
struct ParamBreakdown {
    std::uint64_t embeddings = 0;   // input embedding table
    std::uint64_t seqmix_layer = 0; // one attention or mLSTM layer
    std::uint64_t ff_layer = 0;     // one feedforward layer
    std::uint64_t final_norm = 0;
    std::uint64_t unembedding = 0;  // untied output matrix
    std::uint64_t total = 0;
};

ParamBreakdown count_params(const ArchConfig& cfg);

// Parameter count in millions (plain quotient, no rounding).
double params_in_millions(const ParamBreakdown& b);

// Memory-state / KV-cache size in elements for one sequence of length T.
// MHA/GQA/MLA caches grow linearly in T; the mLSTM matrix state is constant.
// Multiply by a byte width externally to get bytes. MLA's 9/2 factor can
// produce half-element counts, hence the double return.
double state_size_elements(SeqMixKind kind, const ArchConfig& cfg, std::uint64_t T);

std::string_view to_string(ArchKind kind);
std::string_view to_string(SeqMixKind kind);
ArchKind arch_kind_from_string(std::string_view name);     // throws invalid_input
SeqMixKind seqmix_kind_from_string(std::string_view name); // throws invalid_input

} // namespace scalekit
