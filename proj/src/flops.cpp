#include "scalekit/flops.hpp"

#include "scalekit/errors.hpp"

#include <cmath>
#include <string>

namespace scalekit {

namespace {

double dm(std::uint64_t v) { return static_cast<double>(v); }

} // namespace

bool CostFactors::elementwise_defaults() const {
    return F_exp == 1 && F_log == 1 && F_sig == 1 && F_max == 1 && F_abs == 1;
}

void require_valid(const CostFactors& f) {
    if (f.F_exp < 0 || f.F_log < 0 || f.F_sig < 0 || f.F_max < 0 || f.F_abs < 0 ||
        f.F_swish < 0 || f.F_softmax < 0 || f.F_norm < 0 || f.F_skip < 0)
        throw invalid_input("cost factors must be non-negative");
    if (!(f.F_causal > 0 && f.F_causal <= 1))
        throw invalid_input("F_causal must lie in (0, 1]");
}

void require_valid(const Workload& w) {
    if (w.B < 1) throw invalid_input("workload: B must be >= 1");
    if (w.T < 0 || w.T_p < 0) throw invalid_input("workload: T and T_p must be >= 0");
    switch (w.mode) {
    case WorkloadMode::forward:
    case WorkloadMode::train:
        if (w.T <= 0) throw invalid_input("workload: T must be positive for forward/train");
        break;
    case WorkloadMode::prefill:
        if (w.T_p <= 0) throw invalid_input("workload: T_p must be positive for prefill");
        break;
    case WorkloadMode::gen_step:
        if (w.T_g < 1) throw invalid_input("workload: T_g must be >= 1 for generation");
        if (w.t_g < 1 || w.t_g > w.T_g)
            throw invalid_input("workload: t_g must lie in [1, T_g]");
        break;
    case WorkloadMode::gen_seq:
        if (w.T_g < 1) throw invalid_input("workload: T_g must be >= 1 for generation");
        break;
    }
}

std::string_view to_string(WorkloadMode mode) {
    switch (mode) {
    case WorkloadMode::forward: return "forward";
    case WorkloadMode::train: return "train";
    case WorkloadMode::prefill: return "prefill";
    case WorkloadMode::gen_step: return "gen_step";
    case WorkloadMode::gen_seq: return "gen_seq";
    }
    return "?";
}

WorkloadMode workload_mode_from_string(std::string_view name) {
    if (name == "forward") return WorkloadMode::forward;
    if (name == "train") return WorkloadMode::train;
    if (name == "prefill") return WorkloadMode::prefill;
    if (name == "gen_step" || name == "gen-step") return WorkloadMode::gen_step;
    if (name == "gen_seq" || name == "gen-seq") return WorkloadMode::gen_seq;
    throw invalid_input("unknown workload mode: " + std::string(name));
}

double flops_linear(double n_tokens, double d_in, double d_out) {
    if (n_tokens < 0 || d_in < 0 || d_out < 0)
        throw invalid_input("flops_linear: negative argument");
    return 2.0 * n_tokens * d_in * d_out;
}

namespace {

// Chunkwise-parallel mLSTM, one head, one chunk of length L, simplified
// closed form (elementwise factors folded at 1, F_causal symbolic):
//   L^2 Fc (2 (d_qk + d_hv) + 8) + L^2 + 2 L Fc
//   + L (4 d_qk d_hv + 6 d_qk + 4 d_hv + 13)
//   + (2 d_qk d_hv + 2 d_qk + 5)
double chunkwise_simplified_per_chunk(double L, double d_qk, double d_hv, double Fc) {
    return L * L * Fc * (2.0 * (d_qk + d_hv) + 8.0) + L * L + 2.0 * L * Fc +
           L * (4.0 * d_qk * d_hv + 6.0 * d_qk + 4.0 * d_hv + 13.0) +
           (2.0 * d_qk * d_hv + 2.0 * d_qk + 5.0);
}

// Chunkwise-parallel mLSTM, one head, one chunk, exact per-term table. Note
// this sums to 2 L d_hv less than the simplified closed form at unit
// factors; both columns are kept as published and selected by whether the
// elementwise factors are at their defaults.
double chunkwise_exact_per_chunk(double L, double d_qk, double d_hv, const CostFactors& f) {
    const double Fc = f.F_causal;
    const double gates = 2.0 * L + 0.5 * L * (L + 1.0) +
                         L * (1.0 + f.F_exp + f.F_log + f.F_sig) + 3.0 + f.F_max + f.F_exp;
    const double numerator = 2.0 * d_qk * d_hv + 2.0 * L * d_qk * d_hv + L * d_qk;
    const double denominator = 2.0 * d_qk + 2.0 * L * d_qk;
    const double cum_forget = 0.5 * L * (L + 1.0) + L * (f.F_log + f.F_sig);
    const double gate_matrix =
        Fc * (L * L * (3.0 + f.F_exp + f.F_max) + L * (1.0 + f.F_max));
    const double intra_outputs = Fc * (2.0 * L * L * (d_qk + d_hv) + 3.0 * L * L);
    const double inter_outputs = 2.0 * L * d_qk * d_hv + 3.0 * L * d_qk;
    const double output_comb =
        2.0 * L * d_hv + L * (1.0 + f.F_max + f.F_abs + f.F_exp);
    return gates + numerator + denominator + cum_forget + gate_matrix + intra_outputs +
           inter_outputs + output_comb;
}

// Splits T into full chunks of length L plus one partial chunk costed with
// its own length.
template <class PerChunk>
double per_chunk_sum(double T, double L, PerChunk per_chunk) {
    const double n_full = std::floor(T / L);
    const double rem = T - n_full * L;
    double total = n_full * per_chunk(L);
    if (rem > 0) total += per_chunk(rem);
    return total;
}

} // namespace

double flops_mlstm_chunkwise(const ArchConfig& cfg, double T, const CostFactors& f) {
    require_valid(cfg);
    require_valid(f);
    if (cfg.kind != ArchKind::xlstm)
        throw invalid_input("flops_mlstm_chunkwise: config is not an xlstm");
    if (T <= 0) throw invalid_input("flops_mlstm_chunkwise: T must be positive");
    const double L = dm(cfg.chunk_size);
    const double d_qk = dm(cfg.d_qk), d_hv = dm(cfg.d_hv);
    auto per_chunk = [&](double chunk_len) {
        return f.elementwise_defaults()
                   ? chunkwise_simplified_per_chunk(chunk_len, d_qk, d_hv, f.F_causal)
                   : chunkwise_exact_per_chunk(chunk_len, d_qk, d_hv, f);
    };
    return dm(cfg.n_head_q) * per_chunk_sum(T, L, per_chunk);
}

double flops_mlstm_recurrent(const ArchConfig& cfg, const CostFactors& f) {
    require_valid(cfg);
    require_valid(f);
    if (cfg.kind != ArchKind::xlstm)
        throw invalid_input("flops_mlstm_recurrent: config is not an xlstm");
    const double d_qk = dm(cfg.d_qk), d_hv = dm(cfg.d_hv);
    if (f.elementwise_defaults())
        return dm(cfg.n_head_q) * (6.0 * d_qk * d_hv + 7.0 * d_qk + d_hv + 12.0);
    const double gates = 4.0 + 2.0 * f.F_exp + f.F_log + f.F_sig + f.F_max;
    const double cell_update = 4.0 * d_qk * d_hv;
    const double denom_scale = 6.0 * d_qk + d_hv + 1.0 + f.F_abs + f.F_max;
    const double output = 2.0 * d_hv * d_qk + d_qk;
    return dm(cfg.n_head_q) * (gates + cell_update + denom_scale + output);
}

namespace {

// Per-step attention slope: 2 Fc n_head_q (d_qk + d_hv + 0.5 F_softmax).
double attention_a(const ArchConfig& cfg, const CostFactors& f) {
    return 2.0 * f.F_causal * dm(cfg.n_head_q) *
           (dm(cfg.d_qk) + dm(cfg.d_hv) + 0.5 * f.F_softmax);
}

} // namespace

double flops_attention_prefill(const ArchConfig& cfg, double T, const CostFactors& f) {
    require_valid(cfg);
    require_valid(f);
    if (T < 0) throw invalid_input("flops_attention_prefill: T must be >= 0");
    return attention_a(cfg, f) * T * T;
}

double flops_attention_gen_step(const ArchConfig& cfg, double T_p, double t_g,
                                const CostFactors& f) {
    require_valid(cfg);
    require_valid(f);
    if (T_p < 0 || t_g < 1)
        throw invalid_input("flops_attention_gen_step: need T_p >= 0 and t_g >= 1");
    return attention_a(cfg, f) * (T_p + t_g);
}

double flops_attention_gen_seq(const ArchConfig& cfg, double T_p, double T_g,
                               const CostFactors& f) {
    require_valid(cfg);
    require_valid(f);
    if (T_p < 0 || T_g < 1)
        throw invalid_input("flops_attention_gen_seq: need T_p >= 0 and T_g >= 1");
    return attention_a(cfg, f) * (T_p * T_g + 0.5 * T_g * (T_g + 1.0));
}

namespace {

struct TokenCount {
    double tokens;  // tokens processed by the per-token backbone rows
    double seqmix;  // per-sequence cell/attention FLOPs for one layer
};

// Per-token backbone rows (everything except the sequence-mix cell), per
// layer where applicable. Keys carry the layer block prefix.
void add_backbone_rows(const ArchConfig& cfg, const CostFactors& f, double tokens,
                       FlopBreakdown& out) {
    const double d_model = dm(cfg.d_model), d_ff = dm(cfg.d_ff);
    const double d_qk = dm(cfg.d_qk), d_hv = dm(cfg.d_hv);
    const double n_q = dm(cfg.n_head_q), n_kv = dm(cfg.n_head_kv);
    const double layers = dm(cfg.n_layer);
    auto put = [&](const std::string& key, double per_token_per_layer, double layer_mult) {
        out.components[key] = per_token_per_layer * layer_mult * tokens;
    };

    out.components["embeddings"] = 0; // lookup only

    if (cfg.kind == ArchKind::xlstm) {
        put("mlstm.prenorm_skip", d_model * (f.F_skip + f.F_norm), layers);
        put("mlstm.qkv", 2.0 * d_model * n_q * (2.0 * d_qk + d_hv), layers);
        put("mlstm.gates", 2.0 * d_model * n_q + 2.0 * n_q, layers);
        put("mlstm.outgate", 2.0 * d_model * n_q * d_hv + n_q * d_hv * f.F_sig, layers);
        put("mlstm.outnorm", n_q * d_hv * f.F_norm, layers);
        put("mlstm.outproj", 2.0 * d_model * n_q * d_hv, layers);
    } else {
        put("attn.prenorm_skip", d_model * (f.F_skip + f.F_norm), layers);
        put("attn.qkv", 2.0 * d_model * (d_qk * n_q + (d_qk + d_hv) * n_kv), layers);
        put("attn.outproj", 2.0 * d_model * n_q * d_hv, layers);
    }
    put("ff.prenorm_skip", d_model * (f.F_skip + f.F_norm), layers);
    put("ff.mlps", 6.0 * d_model * d_ff, layers);
    put("ff.activations", d_ff * (1.0 + f.F_swish), layers);
    put("final_norm", d_model * f.F_norm, 1.0);
    put("unembedding", 2.0 * d_model * dm(cfg.n_vocab), 1.0);
}

} // namespace

FlopBreakdown flops_model_forward(const ArchConfig& cfg, const Workload& w,
                                  const CostFactors& f) {
    require_valid(cfg);
    require_valid(f);
    require_valid(w);

    const bool is_xlstm = cfg.kind == ArchKind::xlstm;
    double tokens = 0;
    double seqmix_per_seq = 0; // one layer, one sequence (or one step for gen_step)
    switch (w.mode) {
    case WorkloadMode::forward:
    case WorkloadMode::train:
        tokens = w.B * w.T;
        seqmix_per_seq = is_xlstm ? flops_mlstm_chunkwise(cfg, w.T, f)
                                  : flops_attention_prefill(cfg, w.T, f);
        break;
    case WorkloadMode::prefill:
        tokens = w.B * w.T_p;
        seqmix_per_seq = is_xlstm ? flops_mlstm_chunkwise(cfg, w.T_p, f)
                                  : flops_attention_prefill(cfg, w.T_p, f);
        break;
    case WorkloadMode::gen_step:
        tokens = w.B;
        seqmix_per_seq = is_xlstm ? flops_mlstm_recurrent(cfg, f)
                                  : flops_attention_gen_step(cfg, w.T_p, w.t_g, f);
        break;
    case WorkloadMode::gen_seq:
        tokens = w.B * w.T_g;
        seqmix_per_seq = is_xlstm ? flops_mlstm_recurrent(cfg, f) * w.T_g
                                  : flops_attention_gen_seq(cfg, w.T_p, w.T_g, f);
        break;
    }

    FlopBreakdown out;
    out.tokens = tokens;
    add_backbone_rows(cfg, f, tokens, out);
    const std::string cell_key = is_xlstm ? "mlstm.cell" : "attn.attention";
    out.components[cell_key] = w.B * dm(cfg.n_layer) * seqmix_per_seq;

    double total = 0;
    for (const auto& [key, value] : out.components) total += value;
    out.total = total;
    return out;
}

double training_compute(const ArchConfig& cfg, double T, double D, const CostFactors& f,
                        double backward_multiplier) {
    if (T <= 0) throw invalid_input("training_compute: T must be positive");
    if (D < T) throw invalid_input("training_compute: D must be >= T");
    if (backward_multiplier <= 0)
        throw invalid_input("training_compute: multiplier must be positive");
    Workload w;
    w.mode = WorkloadMode::forward;
    w.B = 1;
    w.T = T;
    const double per_seq = flops_model_forward(cfg, w, f).total;
    return (D / T) * per_seq * backward_multiplier;
}

} // namespace scalekit
