#pragma once

// Bytes loaded and stored per operation and per model invocation: the
// memory-bound counterpart of the FLOP counts. Weights are modeled as a
// one-time streaming cost per forward pass (perfect on-chip reuse);
// activation traffic scales with the processed token count.

#include "scalekit/arch.hpp"
#include "scalekit/flops.hpp"

#include <map>
#include <string>

namespace scalekit {

// Bytes per element for each weight class.
struct WeightWidths {
    double emb = 2;  // embedding / unembedding tables
    double norm = 2; // all normalization weights
    double qkv = 2;  // query/key/value projections
    double if_ = 2;  // input and forget gate projections (xlstm)
    double o = 2;    // output gate projection (xlstm)
    double out = 2;  // output projection
    double ff = 2;   // feedforward MLPs
};

// Bytes per element for each tensor class. Defaults are 16-bit everywhere.
// Norm traffic can be dropped by zeroing act_norm and W.norm.
struct ByteWidths {
    double qkv = 2;      // q/k/v and sequence-mix output activations
    double if_ = 2;      // input/forget gate preactivations (xlstm)
    double Cmn = 2;      // mLSTM state tensors (C, m, n)
    double act = 2;      // generic activations
    double act_norm = 2; // normalization activations
    WeightWidths W;
};

void require_valid(const ByteWidths& w); // throws invalid_input

// tokens (d_in + d_out) * bytes_act activation traffic plus a one-time
// d_in * d_out * bytes_weight weight stream.
double bytes_linear(double n_tokens, double d_in, double d_out,
                    double bytes_act = 2, double bytes_weight = 2);

// Chunkwise-parallel mLSTM cell traffic per sequence of length T, all heads
// of one layer, chunk length L. A trailing partial chunk is costed with its
// own length.
double bytes_mlstm_chunkwise(const ArchConfig& cfg, double T, double L,
                             const ByteWidths& w = {});

// Recurrent mLSTM cell traffic per generated token, all heads of one layer.
// States are materialized every timestep.
double bytes_mlstm_recurrent(const ArchConfig& cfg, const ByteWidths& w = {});

// FlashAttention-style prefill traffic per sequence: q/k/v inputs and the
// attention output, logits never touch HBM.
double bytes_attention_prefill(const ArchConfig& cfg, double T, const ByteWidths& w = {});

// KV-cache reads plus current-token traffic for the t_g-th generated token.
double bytes_attention_gen_step(const ArchConfig& cfg, double T_p, double t_g,
                                const ByteWidths& w = {});

// Closed-form sum of gen_step over t_g = 1..T_g.
double bytes_attention_gen_seq(const ArchConfig& cfg, double T_p, double T_g,
                               const ByteWidths& w = {});

// Whole-model memory traffic split into activation and weight components.
// Activation values are batch totals; weight values are bytes per forward
// pass before multiplying by weight_passes (1 for single-pass modes, T_g for
// gen_seq which runs one forward pass per generated token). The embedding
// row is charged as a row gather, B*T*d_model*bytes_act, not as a stream of
// the whole table; embedding_gather records that substitution.
struct MemBreakdown {
    std::map<std::string, double> activations;
    std::map<std::string, double> weights;
    double weight_passes = 1;
    bool embedding_gather = true;
    double total = 0; // sum(activations) + weight_passes * sum(weights)

    double activation_total() const;
    double weight_total() const; // per pass
};

MemBreakdown bytes_model(const ArchConfig& cfg, const Workload& w,
                         const ByteWidths& widths = {});

} // namespace scalekit
