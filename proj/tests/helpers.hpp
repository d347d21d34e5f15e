#pragma once

// Shared construction helpers for the test suite.

#include <scalekit/arch.hpp>

#include <cstdint>

namespace testkit {

inline scalekit::ArchConfig xlstm_cfg(std::uint64_t d_model, std::uint64_t d_ff,
                                      std::uint64_t d_qk, std::uint64_t d_hv,
                                      std::uint64_t n_head, std::uint64_t n_layer,
                                      std::uint64_t n_vocab = 50257,
                                      std::uint64_t chunk_size = 64) {
    scalekit::ArchConfig c;
    c.kind = scalekit::ArchKind::xlstm;
    c.d_model = d_model;
    c.d_ff = d_ff;
    c.d_qk = d_qk;
    c.d_hv = d_hv;
    c.n_head_q = n_head;
    c.n_head_kv = n_head;
    c.n_layer = n_layer;
    c.n_vocab = n_vocab;
    c.chunk_size = chunk_size;
    return c;
}

inline scalekit::ArchConfig transformer_cfg(std::uint64_t d_model, std::uint64_t d_ff,
                                            std::uint64_t d_qk, std::uint64_t d_hv,
                                            std::uint64_t n_head_q, std::uint64_t n_head_kv,
                                            std::uint64_t n_layer,
                                            std::uint64_t n_vocab = 50257) {
    scalekit::ArchConfig c;
    c.kind = scalekit::ArchKind::transformer;
    c.d_model = d_model;
    c.d_ff = d_ff;
    c.d_qk = d_qk;
    c.d_hv = d_hv;
    c.n_head_q = n_head_q;
    c.n_head_kv = n_head_kv;
    c.n_layer = n_layer;
    c.n_vocab = n_vocab;
    return c;
}

// Minimal unit-dimension configs used by the hand-checkable examples.
inline scalekit::ArchConfig unit_xlstm() { return xlstm_cfg(1, 1, 1, 1, 1, 1, 1, 1); }
inline scalekit::ArchConfig unit_transformer() { return transformer_cfg(1, 1, 1, 1, 1, 1, 1, 1); }

} // namespace testkit
