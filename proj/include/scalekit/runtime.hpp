#pragma once

// Roofline-based inference runtime model: compute/memory times, regime
// classification, effective-rate fits against measured latencies, and TTFT /
// step-time predictions. Prefill is treated as compute bound and generation
// as memory bound, matching how the fits are intended to be used.

#include "scalekit/arch.hpp"
#include "scalekit/flops.hpp"
#include "scalekit/memops.hpp"

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scalekit {

// One accelerator's spec-sheet numbers. intensity is the vendor-sheet
// FLOPs/byte value stored verbatim; it is not always the alpha_acc/beta_acc
// quotient (the A100 row pairs its dense-compute rate with a higher printed
// intensity), so regime classification uses the quotient while the registry
// reports the sheet value.
struct AcceleratorSpec {
    std::string name;
    int year = 0;
    double alpha_acc = 0;   // peak bfloat16 FLOPs/s, dense
    double beta_acc = 0;    // memory bandwidth, bytes/s
    double intensity = 0;   // spec-sheet arithmetic intensity, FLOPs/byte
    double gamma_comm = 0;  // interconnect bandwidth, bytes/s (never fitted)

    double intensity_quotient() const; // alpha_acc / beta_acc
};

// Built-in registry: V100 SXM2, A100 SXM, H100 SXM, B200 HGX.
const std::vector<AcceleratorSpec>& accelerator_registry();

// Case-insensitive lookup in the built-in registry; nullptr when absent.
const AcceleratorSpec* find_accelerator(std::string_view name);

enum class RuntimeMode { compute_bound, memory_bound };

// Fitted effective-rate model t = cost / rate_eff + epsilon, optionally
// plus batch_const * B (transformer step time).
struct RuntimeFit {
    RuntimeMode mode = RuntimeMode::compute_bound;
    double rate_eff = 0; // FLOPs/s (compute bound) or bytes/s (memory bound)
    double epsilon = 0;  // constant overhead, seconds, >= 0
    std::optional<double> batch_const; // seconds per sequence
    double residual_rms = 0;
    std::vector<std::string> warnings;
};

enum class LatencyMetric { ttft, step_time };

// One pre-averaged latency measurement.
struct LatencyMeasurement {
    std::string config_id;
    LatencyMetric metric = LatencyMetric::ttft;
    double B = 1;
    double T_p = 0;
    double seconds = 0; // > 0
};

double time_flops(double flops, double rate_eff, double epsilon);
double time_mem(double bytes, double rate_eff, double epsilon);

// FLOPs per byte; throws invalid_input when bytes == 0.
double arithmetic_intensity(double flops, double bytes);

// compute_bound iff intensity >= alpha_acc / beta_acc (boundary inclusive).
RuntimeMode classify_regime(double intensity, const AcceleratorSpec& accel);

// (lower, upper) = (max, sum): overlapped vs fully serialized execution.
std::pair<double, double> runtime_bounds(double t_flops, double t_mem);

// Ordinary least squares of t = cost / rate_eff + epsilon (+ batch_const * B
// when with_batch_const). cost_fn maps a measurement to its analytic FLOPs
// or bytes. Requires >= 3 measurements spanning >= 2 distinct costs; a
// non-positive fitted rate is rejected. A negative fitted overhead is
// clamped to zero, the remaining coefficients refit, and a warning recorded.
RuntimeFit fit_runtime(const std::vector<LatencyMeasurement>& measurements,
                       const std::function<double(const LatencyMeasurement&)>& cost_fn,
                       RuntimeMode mode, bool with_batch_const = false);

// Prefill-stage latency: forward FLOPs at (B, T_p) / alpha_eff + epsilon.
// Requires a compute-bound fit.
double predict_ttft(const ArchConfig& cfg, double B, double T_p,
                    const RuntimeFit& fit, const CostFactors& f = {});

// Generation-step latency: one-token bytes at context T_p / beta_eff +
// epsilon + batch_const * B. Requires a memory-bound fit.
double predict_step_time(const ArchConfig& cfg, double B, double T_p,
                         const RuntimeFit& fit, const ByteWidths& w = {});

// rate_eff over the matching hardware peak; values above 1 get a warning
// appended when warnings is non-null.
double hardware_utilization(const RuntimeFit& fit, const AcceleratorSpec& accel,
                            std::vector<std::string>* warnings = nullptr);

std::string_view to_string(RuntimeMode mode);
std::string_view to_string(LatencyMetric metric);
RuntimeMode runtime_mode_from_string(std::string_view name);     // throws invalid_input
LatencyMetric latency_metric_from_string(std::string_view name); // throws invalid_input

} // namespace scalekit
