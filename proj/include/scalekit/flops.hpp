#pragma once

// Forward-pass, training, prefill, and generation FLOP counts for both
// architectures, built from per-operation closed forms. Counts are real
// valued because the causality factor introduces halves.

#include "scalekit/arch.hpp"

#include <map>
#include <string>

namespace scalekit {

// Per-operation FLOP factors. Elementwise ops (exp, log, sigmoid, max, abs,
// swish) are charged per element and default to 1; softmax is charged per
// logit; normalization per element (mean, variance, division); F_causal
// discounts attention-style work under causal masking; F_skip is 1 to count
// residual adds or 0 to neglect them.
struct CostFactors {
    double F_exp = 1;
    double F_log = 1;
    double F_sig = 1;
    double F_max = 1;
    double F_abs = 1;
    double F_swish = 1;
    double F_softmax = 5;
    double F_norm = 3;
    double F_causal = 0.5; // in (0, 1]
    double F_skip = 1;     // 0 or 1

    // True when every elementwise factor that appears in the mLSTM cell
    // tables (exp, log, sig, max, abs) equals 1, so the simplified closed
    // forms apply. F_causal stays symbolic in those forms.
    bool elementwise_defaults() const;
};

void require_valid(const CostFactors& f); // throws invalid_input

enum class WorkloadMode { forward, train, prefill, gen_step, gen_seq };

// One batched invocation of the model. forward/train/prefill process B
// sequences of T (or T_p) tokens in parallel; gen_step produces the t_g-th
// token per sequence at prompt length T_p; gen_seq produces T_g tokens.
struct Workload {
    WorkloadMode mode = WorkloadMode::forward;
    double B = 1;   // sequences, >= 1
    double T = 0;   // sequence length (forward/train modes)
    double T_p = 0; // prefill/prompt length (prefill and generation modes)
    double T_g = 1; // tokens to generate in total (gen modes)
    double t_g = 1; // 1-based index of the current generated token (gen_step)
};

void require_valid(const Workload& w); // throws invalid_input

// 2 * tokens * d_in * d_out multiply-accumulate FLOPs of one linear layer.
double flops_linear(double n_tokens, double d_in, double d_out);

// Chunkwise-parallel mLSTM cell, per sequence of length T, all heads of one
// layer. With default elementwise factors this evaluates the simplified
// closed form; otherwise the exact per-term table. If the chunk length does
// not divide T, the trailing partial chunk is costed with its own length.
double flops_mlstm_chunkwise(const ArchConfig& cfg, double T, const CostFactors& f = {});

// Recurrent mLSTM cell, per generated token, all heads of one layer.
double flops_mlstm_recurrent(const ArchConfig& cfg, const CostFactors& f = {});

// Self-attention over a full sequence (training forward or prefill), all
// query heads of one layer: 2 F_causal T^2 n_head_q (d_qk + d_hv + 0.5 F_sm).
double flops_attention_prefill(const ArchConfig& cfg, double T, const CostFactors& f = {});

// Self-attention for the t_g-th generated token at prompt length T_p.
double flops_attention_gen_step(const ArchConfig& cfg, double T_p, double t_g,
                                const CostFactors& f = {});

// Closed-form sum of gen_step over t_g = 1..T_g.
double flops_attention_gen_seq(const ArchConfig& cfg, double T_p, double T_g,
                               const CostFactors& f = {});

// Whole-model FLOPs with a per-component breakdown. Component values are
// batch totals: per-token backbone rows are scaled by the processed token
// count, per-sequence cell/attention terms by B and n_layer. Embeddings are
// a lookup and cost zero FLOPs.
struct FlopBreakdown {
    std::map<std::string, double> components;
    double total = 0;
    double tokens = 0; // token count the per-token rows were scaled by
};

FlopBreakdown flops_model_forward(const ArchConfig& cfg, const Workload& w,
                                  const CostFactors& f = {});

// Training compute C for D total tokens at context length T: (D / T)
// sequences times per-sequence forward FLOPs times the backward multiplier
// (3 means backward = 2x forward). Fractional sequence counts are allowed.
double training_compute(const ArchConfig& cfg, double T, double D,
                        const CostFactors& f = {}, double backward_multiplier = 3.0);

std::string_view to_string(WorkloadMode mode);
WorkloadMode workload_mode_from_string(std::string_view name); // throws invalid_input

} // namespace scalekit
