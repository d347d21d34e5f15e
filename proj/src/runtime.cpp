#include "scalekit/runtime.hpp"

#include "scalekit/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <string>

namespace scalekit {

double AcceleratorSpec::intensity_quotient() const { return alpha_acc / beta_acc; }

const std::vector<AcceleratorSpec>& accelerator_registry() {
    // Vendor-sheet values; intensity is stored as printed, which for the
    // A100 is not the alpha/beta quotient.
    static const std::vector<AcceleratorSpec> registry = {
        {"V100 SXM2", 2017, 120e12, 0.9e12, 133, 0.3e12},
        {"A100 SXM", 2020, 312e12, 2.039e12, 161, 0.6e12},
        {"H100 SXM", 2022, 989e12, 3.35e12, 295, 0.9e12},
        {"B200 HGX", 2025, 2250e12, 7.7e12, 292, 1.8e12},
    };
    return registry;
}

namespace {

std::string lowercase(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

} // namespace

const AcceleratorSpec* find_accelerator(std::string_view name) {
    const std::string query = lowercase(name);
    for (const auto& spec : accelerator_registry()) {
        const std::string full = lowercase(spec.name);
        if (query == full || query == full.substr(0, full.find(' '))) return &spec;
    }
    return nullptr;
}

double time_flops(double flops, double rate_eff, double epsilon) {
    if (!(rate_eff > 0)) throw invalid_input("time_flops: rate must be positive");
    if (flops < 0 || epsilon < 0) throw invalid_input("time_flops: negative argument");
    return flops / rate_eff + epsilon;
}

double time_mem(double bytes, double rate_eff, double epsilon) {
    if (!(rate_eff > 0)) throw invalid_input("time_mem: rate must be positive");
    if (bytes < 0 || epsilon < 0) throw invalid_input("time_mem: negative argument");
    return bytes / rate_eff + epsilon;
}

double arithmetic_intensity(double flops, double bytes) {
    if (!(bytes > 0)) throw invalid_input("arithmetic_intensity: undefined at zero bytes");
    if (flops < 0) throw invalid_input("arithmetic_intensity: negative FLOPs");
    return flops / bytes;
}

RuntimeMode classify_regime(double intensity, const AcceleratorSpec& accel) {
    return intensity >= accel.intensity_quotient() ? RuntimeMode::compute_bound
                                                   : RuntimeMode::memory_bound;
}

std::pair<double, double> runtime_bounds(double t_flops, double t_mem) {
    return {std::max(t_flops, t_mem), t_flops + t_mem};
}

namespace {

struct LinearFitResult {
    double slope = 0;
    double intercept = 0;
    double batch_coef = 0;
};

// OLS for t = slope * cost + intercept (+ batch_coef * B), with any of the
// optional columns dropped.
LinearFitResult solve_ols(const std::vector<double>& costs, const std::vector<double>& bs,
                          const std::vector<double>& ts, bool with_intercept,
                          bool with_batch) {
    const auto n = static_cast<Eigen::Index>(ts.size());
    const int cols = 1 + (with_intercept ? 1 : 0) + (with_batch ? 1 : 0);
    Eigen::MatrixXd X(n, cols);
    Eigen::VectorXd y(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        int col = 0;
        X(i, col++) = costs[k];
        if (with_intercept) X(i, col++) = 1.0;
        if (with_batch) X(i, col++) = bs[k];
        y(i) = ts[k];
    }
    const auto qr = X.colPivHouseholderQr();
    if (qr.rank() < cols)
        throw insufficient_data("fit_runtime: design matrix is rank deficient");
    const Eigen::VectorXd c = qr.solve(y);
    LinearFitResult out;
    int col = 0;
    out.slope = c(col++);
    if (with_intercept) out.intercept = c(col++);
    if (with_batch) out.batch_coef = c(col++);
    return out;
}

} // namespace

RuntimeFit fit_runtime(const std::vector<LatencyMeasurement>& measurements,
                       const std::function<double(const LatencyMeasurement&)>& cost_fn,
                       RuntimeMode mode, bool with_batch_const) {
    if (!cost_fn) throw invalid_input("fit_runtime: cost_fn is required");
    if (measurements.size() < 3)
        throw insufficient_data("fit_runtime: need >= 3 measurements");

    std::vector<double> costs, bs, ts;
    costs.reserve(measurements.size());
    bs.reserve(measurements.size());
    ts.reserve(measurements.size());
    for (const auto& m : measurements) {
        if (!(m.seconds > 0))
            throw invalid_input("fit_runtime: measured seconds must be positive");
        costs.push_back(cost_fn(m));
        bs.push_back(m.B);
        ts.push_back(m.seconds);
    }
    if (std::set<double>(costs.begin(), costs.end()).size() < 2)
        throw insufficient_data("fit_runtime: need >= 2 distinct cost values");

    RuntimeFit fit;
    fit.mode = mode;
    LinearFitResult ls = solve_ols(costs, bs, ts, true, with_batch_const);
    if (ls.intercept < 0) {
        // Negative overhead is unphysical: pin it at zero and refit the rest.
        ls = solve_ols(costs, bs, ts, false, with_batch_const);
        ls.intercept = 0;
        fit.warnings.push_back("fitted overhead was negative; clamped to 0 and refit");
    }
    if (!(ls.slope > 0))
        throw data_error("fit_runtime: fitted rate is not positive; "
                         "measurements are inconsistent with the model");

    fit.rate_eff = 1.0 / ls.slope;
    fit.epsilon = ls.intercept;
    if (with_batch_const) fit.batch_const = ls.batch_coef;

    double ss = 0;
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const double pred = ls.slope * costs[i] + ls.intercept +
                            (with_batch_const ? ls.batch_coef * bs[i] : 0.0);
        ss += (ts[i] - pred) * (ts[i] - pred);
    }
    fit.residual_rms = std::sqrt(ss / static_cast<double>(ts.size()));
    return fit;
}

double predict_ttft(const ArchConfig& cfg, double B, double T_p, const RuntimeFit& fit,
                    const CostFactors& f) {
    if (fit.mode != RuntimeMode::compute_bound)
        throw invalid_input("predict_ttft: requires a compute-bound fit");
    Workload w;
    w.mode = WorkloadMode::prefill;
    w.B = B;
    w.T_p = T_p;
    return time_flops(flops_model_forward(cfg, w, f).total, fit.rate_eff, fit.epsilon);
}

double predict_step_time(const ArchConfig& cfg, double B, double T_p,
                         const RuntimeFit& fit, const ByteWidths& widths) {
    if (fit.mode != RuntimeMode::memory_bound)
        throw invalid_input("predict_step_time: requires a memory-bound fit");
    Workload w;
    w.mode = WorkloadMode::gen_step;
    w.B = B;
    w.T_p = T_p;
    w.T_g = 1;
    w.t_g = 1;
    double t = time_mem(bytes_model(cfg, w, widths).total, fit.rate_eff, fit.epsilon);
    if (fit.batch_const) t += *fit.batch_const * B;
    return t;
}

double hardware_utilization(const RuntimeFit& fit, const AcceleratorSpec& accel,
                            std::vector<std::string>* warnings) {
    const double peak =
        fit.mode == RuntimeMode::compute_bound ? accel.alpha_acc : accel.beta_acc;
    const double util = fit.rate_eff / peak;
    if (util > 1.0 && warnings)
        warnings->push_back("effective rate exceeds the hardware peak of " + accel.name);
    return util;
}

std::string_view to_string(RuntimeMode mode) {
    return mode == RuntimeMode::compute_bound ? "compute_bound" : "memory_bound";
}

std::string_view to_string(LatencyMetric metric) {
    return metric == LatencyMetric::ttft ? "ttft" : "step_time";
}

RuntimeMode runtime_mode_from_string(std::string_view name) {
    if (name == "compute_bound" || name == "compute-bound") return RuntimeMode::compute_bound;
    if (name == "memory_bound" || name == "memory-bound") return RuntimeMode::memory_bound;
    throw invalid_input("unknown runtime mode: " + std::string(name));
}

LatencyMetric latency_metric_from_string(std::string_view name) {
    if (name == "ttft") return LatencyMetric::ttft;
    if (name == "step_time" || name == "step-time") return LatencyMetric::step_time;
    throw invalid_input("unknown latency metric: " + std::string(name));
}

} // namespace scalekit
