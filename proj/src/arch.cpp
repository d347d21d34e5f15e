#include "scalekit/arch.hpp"

#include "scalekit/errors.hpp"

#include <sstream>

namespace scalekit {

std::string_view to_string(ArchKind kind) {
    switch (kind) {
    case ArchKind::transformer: return "transformer";
    case ArchKind::xlstm: return "xlstm";
    }
    return "?";
}

std::string_view to_string(SeqMixKind kind) {
    switch (kind) {
    case SeqMixKind::mha: return "mha";
    case SeqMixKind::gqa: return "gqa";
    case SeqMixKind::mla: return "mla";
    case SeqMixKind::mlstm: return "mlstm";
    }
    return "?";
}

ArchKind arch_kind_from_string(std::string_view name) {
    if (name == "transformer") return ArchKind::transformer;
    if (name == "xlstm") return ArchKind::xlstm;
    throw invalid_input("unknown architecture kind: " + std::string(name));
}

SeqMixKind seqmix_kind_from_string(std::string_view name) {
    if (name == "mha") return SeqMixKind::mha;
    if (name == "gqa") return SeqMixKind::gqa;
    if (name == "mla") return SeqMixKind::mla;
    if (name == "mlstm") return SeqMixKind::mlstm;
    throw invalid_input("unknown sequence-mix kind: " + std::string(name));
}

std::vector<std::string> validate_config(const ArchConfig& cfg) {
    std::vector<std::string> errors;
    auto positive = [&errors](std::uint64_t v, const char* name) {
        if (v == 0) errors.push_back(std::string("positive-dimension: ") + name + " must be >= 1");
    };
    positive(cfg.d_model, "d_model");
    positive(cfg.d_ff, "d_ff");
    positive(cfg.d_qk, "d_qk");
    positive(cfg.d_hv, "d_hv");
    positive(cfg.n_head_q, "n_head_q");
    positive(cfg.n_layer, "n_layer");
    positive(cfg.n_vocab, "n_vocab");
    if (cfg.kind == ArchKind::transformer) {
        positive(cfg.n_head_kv, "n_head_kv");
        if (cfg.n_head_kv != 0 && cfg.n_head_q != 0 && cfg.n_head_q % cfg.n_head_kv != 0)
            errors.push_back("GQA divisibility: n_head_kv must divide n_head_q");
    } else {
        // n_head_kv is unused for xlstm; 0 means unset, anything else must
        // agree with n_head_q.
        if (cfg.n_head_kv != 0 && cfg.n_head_kv != cfg.n_head_q)
            errors.push_back("xlstm has no separate kv heads: n_head_kv must equal n_head_q");
        positive(cfg.chunk_size, "chunk_size");
    }
    return errors;
}

void require_valid(const ArchConfig& cfg) {
    auto errors = validate_config(cfg);
    if (errors.empty()) return;
    std::ostringstream msg;
    msg << "invalid config:";
    for (const auto& e : errors) msg << " [" << e << "]";
    throw invalid_input(msg.str());
}

ParamBreakdown count_params(const ArchConfig& cfg) {
    require_valid(cfg);
    const std::uint64_t d_model = cfg.d_model, d_ff = cfg.d_ff;
    const std::uint64_t d_qk = cfg.d_qk, d_hv = cfg.d_hv;
    const std::uint64_t n_q = cfg.n_head_q, n_kv = cfg.n_head_kv;

    ParamBreakdown b;
    b.embeddings = cfg.n_vocab * d_model;
    if (cfg.kind == ArchKind::xlstm) {
        const std::uint64_t prenorm = d_model;
        const std::uint64_t qkv = d_model * n_q * (2 * d_qk + d_hv);
        const std::uint64_t gates = 2 * d_model * n_q + 2 * n_q; // weights + biases
        const std::uint64_t out_gate = d_model * n_q * d_hv;
        const std::uint64_t out_norm = n_q * d_hv;
        const std::uint64_t out_proj = d_model * n_q * d_hv;
        b.seqmix_layer = prenorm + qkv + gates + out_gate + out_norm + out_proj;
    } else {
        const std::uint64_t prenorm = d_model;
        const std::uint64_t qkv = d_model * (d_qk * n_q + (d_qk + d_hv) * n_kv);
        const std::uint64_t out_proj = d_model * n_q * d_hv;
        b.seqmix_layer = prenorm + qkv + out_proj;
    }
    b.ff_layer = 3 * d_model * d_ff + d_model; // gated MLP + prenorm
    b.final_norm = d_model;
    b.unembedding = d_model * cfg.n_vocab;
    b.total = cfg.n_layer * (b.seqmix_layer + b.ff_layer) + b.embeddings + b.final_norm +
              b.unembedding;
    return b;
}

double params_in_millions(const ParamBreakdown& b) {
    return static_cast<double>(b.total) / 1e6;
}

double state_size_elements(SeqMixKind kind, const ArchConfig& cfg, std::uint64_t T) {
    require_valid(cfg);
    const double d_hv = static_cast<double>(cfg.d_hv);
    const double d_qk = static_cast<double>(cfg.d_qk);
    const double t = static_cast<double>(T);
    switch (kind) {
    case SeqMixKind::mha:
        return 2.0 * static_cast<double>(cfg.n_head_q) * d_hv * t;
    case SeqMixKind::gqa:
        return 2.0 * static_cast<double>(cfg.n_head_kv) * d_hv * t;
    case SeqMixKind::mla:
        return 4.5 * d_hv * t;
    case SeqMixKind::mlstm:
        // Matrix state plus normalizer and max-state scalars, per head;
        // independent of T.
        return static_cast<double>(cfg.n_head_q) * (d_hv * d_qk + d_qk + 1.0);
    }
    throw invalid_input("unknown sequence-mix kind");
}

} // namespace scalekit
