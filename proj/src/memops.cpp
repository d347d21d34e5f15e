#include "scalekit/memops.hpp"

#include "scalekit/errors.hpp"

#include <cmath>
#include <string>

namespace scalekit {

namespace {

double dm(std::uint64_t v) { return static_cast<double>(v); }

}  // namespace

void require_valid(const ByteWidths& w) {
    if (w.qkv < 0 || w.if_ < 0 || w.Cmn < 0 || w.act < 0 || w.act_norm < 0 ||
        w.W.emb < 0 || w.W.norm < 0 || w.W.qkv < 0 || w.W.if_ < 0 || w.W.o < 0 ||
        w.W.out < 0 || w.W.ff < 0)
        throw invalid_input("byte widths must be non-negative");
}

double bytes_linear(double n_tokens, double d_in, double d_out, double bytes_act,
                    double bytes_weight) {
    if (n_tokens < 0 || d_in < 0 || d_out < 0 || bytes_act < 0 || bytes_weight < 0)
        throw invalid_input("bytes_linear: negative argument");
    return n_tokens * (d_in + d_out) * bytes_act + d_in * d_out * bytes_weight;
}

namespace {

// Chunkwise-parallel mLSTM traffic, one head, one chunk of length L. The
// published closed form carries an extra n_head factor on the state term
// that contradicts this per-head table total; the table version is used.
double chunkwise_per_chunk(double L, double d_qk, double d_hv, const ByteWidths& w) {
    return 4.0 * L * w.if_ + 3.0 * L * (d_hv + d_qk) * w.qkv +
           2.0 * (L + d_hv * d_qk + d_qk + 1.0) * w.Cmn;
}

}  // namespace

double bytes_mlstm_chunkwise(const ArchConfig& cfg, double T, double L,
                             const ByteWidths& w) {
    require_valid(cfg);
    require_valid(w);
    if (cfg.kind != ArchKind::xlstm)
        throw invalid_input("bytes_mlstm_chunkwise: config is not an xlstm");
    if (T < 1 || L < 1) throw invalid_input("bytes_mlstm_chunkwise: need T, L >= 1");
    const double d_qk = dm(cfg.d_qk), d_hv = dm(cfg.d_hv);
    const double n_full = std::floor(T / L);
    const double rem = T - n_full * L;
    double per_head = n_full * chunkwise_per_chunk(L, d_qk, d_hv, w);
    if (rem > 0) per_head += chunkwise_per_chunk(rem, d_qk, d_hv, w);
    return dm(cfg.n_head_q) * per_head;
}

double bytes_mlstm_recurrent(const ArchConfig& cfg, const ByteWidths& w) {
    require_valid(cfg);
    require_valid(w);
    if (cfg.kind != ArchKind::xlstm)
        throw invalid_input("bytes_mlstm_recurrent: config is not an xlstm");
    const double d_qk = dm(cfg.d_qk), d_hv = dm(cfg.d_hv);
    return dm(cfg.n_head_q) *
           (2.0 * w.if_ + 2.0 * (d_hv + d_qk) * w.qkv + 2.0 * d_hv * d_qk * w.Cmn);
}

double bytes_attention_prefill(const ArchConfig& cfg, double T, const ByteWidths& w) {
    require_valid(cfg);
    require_valid(w);
    if (T < 0) throw invalid_input("bytes_attention_prefill: T must be >= 0");
    return T * (dm(cfg.d_qk) + dm(cfg.d_hv)) * (dm(cfg.n_head_q) + dm(cfg.n_head_kv)) *
           w.qkv;
}

double bytes_attention_gen_step(const ArchConfig& cfg, double T_p, double t_g,
                                const ByteWidths& w) {
    require_valid(cfg);
    require_valid(w);
    if (T_p < 0 || t_g < 1)
        throw invalid_input("bytes_attention_gen_step: need T_p >= 0 and t_g >= 1");
    const double d = dm(cfg.d_qk) + dm(cfg.d_hv);
    return (d * dm(cfg.n_head_q) + (T_p + t_g) * d * dm(cfg.n_head_kv)) * w.qkv;
}

double bytes_attention_gen_seq(const ArchConfig& cfg, double T_p, double T_g,
                               const ByteWidths& w) {
    require_valid(cfg);
    require_valid(w);
    if (T_p < 0 || T_g < 1)
        throw invalid_input("bytes_attention_gen_seq: need T_p >= 0 and T_g >= 1");
    const double d = dm(cfg.d_qk) + dm(cfg.d_hv);
    return w.qkv * (T_g * d * dm(cfg.n_head_q) +
                    (T_p * T_g + 0.5 * T_g * (T_g + 1.0)) * d * dm(cfg.n_head_kv));
}

double MemBreakdown::activation_total() const {
    double s = 0;
    for (const auto& [key, value] : activations) s += value;
    return s;
}

double MemBreakdown::weight_total() const {
    double s = 0;
    for (const auto& [key, value] : weights) s += value;
    return s;
}

MemBreakdown bytes_model(const ArchConfig& cfg, const Workload& w,
                         const ByteWidths& widths) {
    require_valid(cfg);
    require_valid(w);
    require_valid(widths);

    const bool is_xlstm = cfg.kind == ArchKind::xlstm;
    double tokens = 0;      // tokens moved through the per-token backbone rows
    double cell_per_seq = 0;  // sequence-mix traffic per layer per sequence
    double weight_passes = 1;
    switch (w.mode) {
    case WorkloadMode::forward:
    case WorkloadMode::train:
        tokens = w.B * w.T;
        cell_per_seq = is_xlstm
                           ? bytes_mlstm_chunkwise(cfg, w.T, dm(cfg.chunk_size), widths)
                           : bytes_attention_prefill(cfg, w.T, widths);
        break;
    case WorkloadMode::prefill:
        tokens = w.B * w.T_p;
        cell_per_seq =
            is_xlstm ? bytes_mlstm_chunkwise(cfg, w.T_p, dm(cfg.chunk_size), widths)
                     : bytes_attention_prefill(cfg, w.T_p, widths);
        break;
    case WorkloadMode::gen_step:
        tokens = w.B;
        cell_per_seq = is_xlstm ? bytes_mlstm_recurrent(cfg, widths)
                                : bytes_attention_gen_step(cfg, w.T_p, w.t_g, widths);
        break;
    case WorkloadMode::gen_seq:
        tokens = w.B * w.T_g;
        cell_per_seq = is_xlstm
                           ? bytes_mlstm_recurrent(cfg, widths) * w.T_g
                           : bytes_attention_gen_seq(cfg, w.T_p, w.T_g, widths);
        weight_passes = w.T_g;  // weights stream once per generation step
        break;
    }

    const double d_model = dm(cfg.d_model), d_ff = dm(cfg.d_ff);
    const double d_qk = dm(cfg.d_qk), d_hv = dm(cfg.d_hv);
    const double n_q = dm(cfg.n_head_q), n_kv = dm(cfg.n_head_kv);
    const double layers = dm(cfg.n_layer), n_vocab = dm(cfg.n_vocab);

    MemBreakdown out;
    out.weight_passes = weight_passes;
    out.embedding_gather = true;
    auto act = [&](const std::string& key, double per_token_per_layer, double mult) {
        out.activations[key] = per_token_per_layer * mult * tokens;
    };
    auto wgt = [&](const std::string& key, double per_layer, double mult) {
        out.weights[key] = per_layer * mult;
    };

    // Embedding traffic is a row gather, not a full-table stream; its weight
    // class is therefore absent on purpose.
    out.activations["embeddings"] = tokens * d_model * widths.act;

    if (is_xlstm) {
        act("mlstm.prenorm", d_model * widths.act_norm, layers);
        wgt("mlstm.prenorm", d_model * widths.W.norm, layers);
        act("mlstm.qkv", (d_model + n_q * (2.0 * d_qk + d_hv)) * widths.qkv, layers);
        wgt("mlstm.qkv", d_model * n_q * (2.0 * d_qk + d_hv) * widths.W.qkv, layers);
        act("mlstm.gates", 2.0 * (d_model + n_q) * widths.if_, layers);
        wgt("mlstm.gates", (2.0 * d_model * n_q + 2.0 * n_q) * widths.W.if_, layers);
        out.activations["mlstm.cell"] = w.B * layers * cell_per_seq;
        act("mlstm.outgate", (d_model + n_q * d_hv) * widths.act, layers);
        wgt("mlstm.outgate", d_model * n_q * d_hv * widths.W.o, layers);
        act("mlstm.outnorm", n_q * d_hv * widths.act_norm, layers);
        wgt("mlstm.outnorm", n_q * d_hv * widths.W.norm, layers);
        act("mlstm.outproj", (d_model + n_q * d_hv) * widths.act, layers);
        wgt("mlstm.outproj", d_model * n_q * d_hv * widths.W.out, layers);
    } else {
        act("attn.prenorm", d_model * widths.act_norm, layers);
        wgt("attn.prenorm", d_model * widths.W.norm, layers);
        act("attn.qkv", (d_model + n_q * d_qk + n_kv * (d_qk + d_hv)) * widths.qkv,
            layers);
        wgt("attn.qkv", d_model * (d_qk * n_q + (d_qk + d_hv) * n_kv) * widths.W.qkv,
            layers);
        out.activations["attn.attention"] = w.B * layers * cell_per_seq;
        act("attn.outproj", (d_model + n_q * d_hv) * widths.act, layers);
        wgt("attn.outproj", d_model * n_q * d_hv * widths.W.out, layers);
    }
    act("ff.prenorm", d_model * widths.act_norm, layers);
    wgt("ff.prenorm", d_model * widths.W.norm, layers);
    act("ff.mlps", 3.0 * (d_model + d_ff) * widths.act, layers);
    wgt("ff.mlps", 3.0 * d_model * d_ff * widths.W.ff, layers);
    act("final_norm", d_model * widths.act_norm, 1.0);
    wgt("final_norm", d_model * widths.W.norm, 1.0);
    act("unembedding", (d_model + n_vocab) * widths.act, 1.0);
    wgt("unembedding", d_model * n_vocab * widths.W.emb, 1.0);

    out.total = out.activation_total() + out.weight_passes * out.weight_total();
    return out;
}

}  // namespace scalekit
