#include "scalekit/cli.hpp"

#include "scalekit/arch.hpp"
#include "scalekit/errors.hpp"
#include "scalekit/fit.hpp"
#include "scalekit/flops.hpp"
#include "scalekit/io.hpp"
#include "scalekit/memops.hpp"
#include "scalekit/plan.hpp"
#include "scalekit/runtime.hpp"
#include "scalekit/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <vector>

namespace scalekit {

namespace {

using nlohmann::ordered_json;

constexpr double k_ln2 = 0.6931471805599453;

// Shortest representation that parses back to the same double.
std::string exact_repr(double v) { return nlohmann::json(v).dump(); }

std::string eng(double v) {
    std::ostringstream ss;
    ss << std::scientific << std::setprecision(4) << v;
    return ss.str();
}

void print_count(std::ostream& out, const std::string& key, double v) {
    out << key << ": " << exact_repr(v) << " (" << eng(v) << ")\n";
}

void emit(bool json_mode, const ordered_json& payload, std::ostream& out,
          const std::function<void()>& human) {
    if (json_mode)
        out << payload.dump(2) << "\n";
    else
        human();
}

void add_factor_options(CLI::App* cmd, CostFactors& f) {
    cmd->add_option("--F-exp", f.F_exp, "FLOPs per exp element");
    cmd->add_option("--F-log", f.F_log, "FLOPs per log element");
    cmd->add_option("--F-sig", f.F_sig, "FLOPs per sigmoid element");
    cmd->add_option("--F-max", f.F_max, "FLOPs per max element");
    cmd->add_option("--F-abs", f.F_abs, "FLOPs per abs element");
    cmd->add_option("--F-swish", f.F_swish, "FLOPs per swish element");
    cmd->add_option("--F-softmax", f.F_softmax, "FLOPs per softmax logit");
    cmd->add_option("--F-norm", f.F_norm, "FLOPs per normalized element");
    cmd->add_option("--F-causal", f.F_causal, "causal-masking work fraction in (0,1]");
    cmd->add_option("--F-skip", f.F_skip, "FLOPs per skip-connection element");
}

void add_width_options(CLI::App* cmd, ByteWidths& w, double& uniform_weight) {
    cmd->add_option("--bytes-qkv", w.qkv, "bytes per q/k/v element");
    cmd->add_option("--bytes-if", w.if_, "bytes per input/forget-gate element");
    cmd->add_option("--bytes-cmn", w.Cmn, "bytes per recurrent-state element");
    cmd->add_option("--bytes-act", w.act, "bytes per activation element");
    cmd->add_option("--bytes-act-norm", w.act_norm, "bytes per norm activation element");
    cmd->add_option("--bytes-weights", uniform_weight,
                    "bytes per weight element, all weight classes");
}

void apply_uniform_weight(ByteWidths& w, double uniform_weight) {
    if (uniform_weight < 0) return;
    w.W.emb = w.W.norm = w.W.qkv = w.W.if_ = w.W.o = w.W.out = w.W.ff = uniform_weight;
}

Workload make_workload(const std::string& mode, double B, double T, double T_p,
                       double T_g, double t_g) {
    Workload w;
    w.mode = workload_mode_from_string(mode);
    w.B = B;
    w.T = T;
    w.T_p = T_p;
    w.T_g = T_g;
    w.t_g = t_g;
    require_valid(w);
    return w;
}

void write_fit_artifact(const std::string& out_path, const std::string& kind,
                        ordered_json payload,
                        const std::vector<std::string>& input_paths) {
    ArtifactFile artifact;
    artifact.kind = kind;
    artifact.payload = std::move(payload);
    artifact.tool_version = std::string(k_tool_id);
    for (const auto& p : input_paths) artifact.inputs.emplace_back(p, sha256_file(p));
    write_artifact(artifact, out_path);
}

void report_load_errors(const LoadReport& report, std::ostream& err) {
    for (const auto& e : report.errors) err << "warning: " << e << "\n";
}

RecordFormat record_format_from_string(const std::string& name) {
    if (name == "csv") return RecordFormat::csv;
    if (name == "jsonl") return RecordFormat::jsonl;
    throw invalid_input("unknown record format: " + name);
}

ordered_json run_record_to_json(const RunRecord& r) {
    ordered_json j;
    j["kind"] = std::string(to_string(r.kind));
    j["N"] = r.N;
    j["D"] = r.D;
    j["T_ctx"] = r.T_ctx;
    j["C"] = r.C;
    j["loss"] = r.loss;
    j["M"] = r.M;
    return j;
}

} // namespace

int run_command(const std::vector<std::string>& args, std::ostream& out,
                std::ostream& err) {
    CLI::App app{"analytic scaling toolkit for transformer and xlstm models"};
    app.name("scalekit");
    app.set_version_flag("--version", std::string(k_tool_id));
    app.require_subcommand(1);

    // ---- count ----------------------------------------------------------
    auto* count_cmd = app.add_subcommand("count", "parameter, FLOP, and memory-op counts");
    count_cmd->require_subcommand(1);

    std::string cp_config;
    bool cp_json = false;
    auto* count_params_cmd = count_cmd->add_subcommand("params", "exact parameter counts");
    count_params_cmd->add_option("--config", cp_config, "architecture config JSON")->required();
    count_params_cmd->add_flag("--json", cp_json, "machine-readable output");
    count_params_cmd->callback([&] {
        const ArchConfig cfg = load_arch_config(cp_config);
        const ParamBreakdown b = count_params(cfg);
        ordered_json payload;
        payload["embeddings"] = b.embeddings;
        payload["seqmix_layer"] = b.seqmix_layer;
        payload["ff_layer"] = b.ff_layer;
        payload["final_norm"] = b.final_norm;
        payload["unembedding"] = b.unembedding;
        payload["total"] = b.total;
        payload["total_millions"] = params_in_millions(b);
        emit(cp_json, payload, out, [&] {
            out << "embeddings: " << b.embeddings << " (" << eng(double(b.embeddings)) << ")\n";
            out << "seqmix_layer: " << b.seqmix_layer << " (" << eng(double(b.seqmix_layer)) << ")\n";
            out << "ff_layer: " << b.ff_layer << " (" << eng(double(b.ff_layer)) << ")\n";
            out << "final_norm: " << b.final_norm << " (" << eng(double(b.final_norm)) << ")\n";
            out << "unembedding: " << b.unembedding << " (" << eng(double(b.unembedding)) << ")\n";
            out << "total: " << b.total << " (" << eng(double(b.total)) << ")\n";
            out << "total_millions: " << exact_repr(params_in_millions(b)) << "\n";
        });
    });

    std::string cf_config, cf_mode = "forward";
    double cf_B = 1, cf_T = 0, cf_Tp = 0, cf_Tg = 1, cf_tg = 1;
    bool cf_json = false;
    CostFactors cf_factors;
    auto* count_flops_cmd = count_cmd->add_subcommand("flops", "forward/prefill/generation FLOPs");
    count_flops_cmd->add_option("--config", cf_config, "architecture config JSON")->required();
    count_flops_cmd->add_option("--mode", cf_mode, "forward|train|prefill|gen-step|gen-seq");
    count_flops_cmd->add_option("--B", cf_B, "batch size in sequences");
    count_flops_cmd->add_option("--T", cf_T, "sequence length");
    count_flops_cmd->add_option("--Tp", cf_Tp, "prefill length");
    count_flops_cmd->add_option("--Tg", cf_Tg, "generation length");
    count_flops_cmd->add_option("--tg", cf_tg, "generation step index, 1-based");
    count_flops_cmd->add_flag("--json", cf_json, "machine-readable output");
    add_factor_options(count_flops_cmd, cf_factors);
    count_flops_cmd->callback([&] {
        const ArchConfig cfg = load_arch_config(cf_config);
        const Workload w = make_workload(cf_mode, cf_B, cf_T, cf_Tp, cf_Tg, cf_tg);
        const FlopBreakdown b = flops_model_forward(cfg, w, cf_factors);
        ordered_json payload;
        payload["mode"] = std::string(to_string(w.mode));
        payload["tokens"] = b.tokens;
        payload["components"] = ordered_json::object();
        for (const auto& [key, value] : b.components) payload["components"][key] = value;
        payload["total"] = b.total;
        emit(cf_json, payload, out, [&] {
            for (const auto& [key, value] : b.components) print_count(out, key, value);
            print_count(out, "tokens", b.tokens);
            print_count(out, "total", b.total);
        });
    });

    std::string cm_config, cm_mode = "forward";
    double cm_B = 1, cm_T = 0, cm_Tp = 0, cm_Tg = 1, cm_tg = 1, cm_uniform_weight = -1;
    bool cm_json = false;
    ByteWidths cm_widths;
    auto* count_memops_cmd = count_cmd->add_subcommand("memops", "loaded/stored bytes");
    count_memops_cmd->add_option("--config", cm_config, "architecture config JSON")->required();
    count_memops_cmd->add_option("--mode", cm_mode, "forward|train|prefill|gen-step|gen-seq");
    count_memops_cmd->add_option("--B", cm_B, "batch size in sequences");
    count_memops_cmd->add_option("--T", cm_T, "sequence length");
    count_memops_cmd->add_option("--Tp", cm_Tp, "prefill length");
    count_memops_cmd->add_option("--Tg", cm_Tg, "generation length");
    count_memops_cmd->add_option("--tg", cm_tg, "generation step index, 1-based");
    count_memops_cmd->add_flag("--json", cm_json, "machine-readable output");
    add_width_options(count_memops_cmd, cm_widths, cm_uniform_weight);
    count_memops_cmd->callback([&] {
        const ArchConfig cfg = load_arch_config(cm_config);
        apply_uniform_weight(cm_widths, cm_uniform_weight);
        const Workload w = make_workload(cm_mode, cm_B, cm_T, cm_Tp, cm_Tg, cm_tg);
        const MemBreakdown b = bytes_model(cfg, w, cm_widths);
        ordered_json payload;
        payload["mode"] = std::string(to_string(w.mode));
        payload["activations"] = ordered_json::object();
        for (const auto& [key, value] : b.activations) payload["activations"][key] = value;
        payload["weights"] = ordered_json::object();
        for (const auto& [key, value] : b.weights) payload["weights"][key] = value;
        payload["weight_passes"] = b.weight_passes;
        payload["embedding_gather"] = b.embedding_gather;
        payload["activation_total"] = b.activation_total();
        payload["weight_total"] = b.weight_total();
        payload["total"] = b.total;
        emit(cm_json, payload, out, [&] {
            for (const auto& [key, value] : b.activations)
                print_count(out, "act." + key, value);
            for (const auto& [key, value] : b.weights)
                print_count(out, "weight." + key, value);
            print_count(out, "weight_passes", b.weight_passes);
            print_count(out, "activation_total", b.activation_total());
            print_count(out, "weight_total", b.weight_total());
            print_count(out, "total", b.total);
        });
    });

    // ---- cache-size ------------------------------------------------------
    std::string cs_config, cs_kind;
    double cs_T = 0, cs_bytes_per_element = 0;
    bool cs_json = false;
    auto* cache_cmd = app.add_subcommand("cache-size", "recurrent-state / KV-cache size");
    cache_cmd->add_option("--config", cs_config, "architecture config JSON")->required();
    cache_cmd->add_option("--kind", cs_kind, "mha|gqa|mla|mlstm")->required();
    cache_cmd->add_option("--T", cs_T, "sequence length");
    cache_cmd->add_option("--bytes-per-element", cs_bytes_per_element,
                          "also report bytes at this element width");
    cache_cmd->add_flag("--json", cs_json, "machine-readable output");
    cache_cmd->callback([&] {
        const ArchConfig cfg = load_arch_config(cs_config);
        if (cs_T < 0) throw invalid_input("cache-size: T must be >= 0");
        const double elements = state_size_elements(seqmix_kind_from_string(cs_kind), cfg,
                                                    static_cast<std::uint64_t>(cs_T));
        ordered_json payload;
        payload["kind"] = cs_kind;
        payload["T"] = cs_T;
        payload["elements"] = elements;
        if (cs_bytes_per_element > 0)
            payload["bytes"] = elements * cs_bytes_per_element;
        emit(cs_json, payload, out, [&] {
            print_count(out, "elements", elements);
            if (cs_bytes_per_element > 0)
                print_count(out, "bytes", elements * cs_bytes_per_element);
        });
    });

    // ---- fit -------------------------------------------------------------
    auto* fit_cmd = app.add_subcommand("fit", "fit scaling laws and runtime models");
    fit_cmd->require_subcommand(1);

    std::string fs_in, fs_format = "csv", fs_out;
    double fs_delta = 1e-3;
    int fs_threads = 0;
    bool fs_freeze_gamma = false, fs_strict = false, fs_json = false;
    auto* fit_surface_cmd = fit_cmd->add_subcommand("surface", "parametric loss surface");
    fit_surface_cmd->add_option("--in", fs_in, "run records file")->required();
    fit_surface_cmd->add_option("--format", fs_format, "csv|jsonl");
    fit_surface_cmd->add_option("--delta", fs_delta, "Huber delta on log residuals");
    fit_surface_cmd->add_flag("--freeze-gamma", fs_freeze_gamma, "pin the outer exponent to 1");
    fit_surface_cmd->add_option("--threads", fs_threads, "optimizer threads, 0 = all cores");
    fit_surface_cmd->add_flag("--strict", fs_strict, "abort on the first bad input row");
    fit_surface_cmd->add_option("--out", fs_out, "write a fit artifact here");
    fit_surface_cmd->add_flag("--json", fs_json, "machine-readable output");
    fit_surface_cmd->callback([&] {
        LoadReport report;
        const auto runs = load_runs(fs_in, record_format_from_string(fs_format), fs_strict,
                                    &report);
        report_load_errors(report, err);
        SurfaceFitOptions options;
        options.freeze_gamma = fs_freeze_gamma;
        options.threads = fs_threads;
        const LossSurfaceFit fit = fit_loss_surface(runs, fs_delta, options);
        const ordered_json payload = to_payload(fit);
        if (!fs_out.empty()) write_fit_artifact(fs_out, "loss_surface", payload, {fs_in});
        emit(fs_json, payload, out, [&] {
            out << "logE: " << exact_repr(fit.logE) << "\n";
            out << "logA: " << exact_repr(fit.logA) << "\n";
            out << "logB: " << exact_repr(fit.logB) << "\n";
            out << "alpha: " << exact_repr(fit.alpha) << "\n";
            out << "beta: " << exact_repr(fit.beta) << "\n";
            out << "gamma: " << exact_repr(fit.gamma)
                << (fit.gamma_frozen ? " (frozen)" : "") << "\n";
            out << "fit_mse: " << exact_repr(fit.fit_mse) << "\n";
            out << "grid_index: " << fit.grid_index << "\n";
        });
    });

    std::string fi_in, fi_out;
    bool fi_json = false, fi_bits = false;
    auto* fit_isoflop_cmd = fit_cmd->add_subcommand("isoflop", "quadratic IsoFLOP profile");
    fit_isoflop_cmd->add_option("--in", fi_in, "two-column CSV: x, loss")->required();
    fit_isoflop_cmd->add_option("--out", fi_out, "write a fit artifact here");
    fit_isoflop_cmd->add_flag("--json", fi_json, "machine-readable output");
    fit_isoflop_cmd->add_flag("--bits", fi_bits, "display losses in bits instead of nats");
    fit_isoflop_cmd->callback([&] {
        const ParabolaFit fit = fit_isoflop_profile(load_xy_csv(fi_in));
        const ordered_json payload = to_payload(fit);
        if (!fi_out.empty()) write_fit_artifact(fi_out, "parabola", payload, {fi_in});
        emit(fi_json, payload, out, [&] {
            out << "c2: " << exact_repr(fit.c2) << "\n";
            out << "c1: " << exact_repr(fit.c1) << "\n";
            out << "c0: " << exact_repr(fit.c0) << "\n";
            if (fit.optimum_x) {
                out << "optimum_x: " << exact_repr(*fit.optimum_x) << " ("
                    << eng(*fit.optimum_x) << ")\n";
                const double loss =
                    fi_bits ? *fit.optimum_loss / k_ln2 : *fit.optimum_loss;
                out << "optimum_loss: " << exact_repr(loss)
                    << (fi_bits ? " bits" : " nats") << "\n";
            }
            out << "interior: " << (fit.interior ? "true" : "false") << "\n";
        });
    });

    std::string fp_in, fp_out;
    bool fp_json = false;
    auto* fit_powerlaw_cmd = fit_cmd->add_subcommand("powerlaw", "log-log power law");
    fit_powerlaw_cmd->add_option("--in", fp_in, "two-column CSV: x, y")->required();
    fit_powerlaw_cmd->add_option("--out", fp_out, "write a fit artifact here");
    fit_powerlaw_cmd->add_flag("--json", fp_json, "machine-readable output");
    fit_powerlaw_cmd->callback([&] {
        const auto points = load_xy_csv(fp_in);
        std::vector<double> xs, ys;
        xs.reserve(points.size());
        ys.reserve(points.size());
        for (const auto& [x, y] : points) {
            xs.push_back(x);
            ys.push_back(y);
        }
        const PowerLawFit fit = fit_power_law(xs, ys);
        const ordered_json payload = to_payload(fit);
        if (!fp_out.empty()) write_fit_artifact(fp_out, "power_law", payload, {fp_in});
        emit(fp_json, payload, out, [&] {
            out << "coefficient: " << exact_repr(fit.coefficient) << "\n";
            out << "exponent: " << exact_repr(fit.exponent) << "\n";
            out << "r_squared: " << exact_repr(fit.r_squared) << "\n";
        });
    });

    std::string fo_in, fo_format = "csv", fo_out;
    double fo_tolerance = 0.02;
    bool fo_strict = false, fo_json = false;
    auto* fit_overtrain_cmd =
        fit_cmd->add_subcommand("overtrain", "per-ratio loss-vs-compute power laws");
    fit_overtrain_cmd->add_option("--in", fo_in, "run records file")->required();
    fit_overtrain_cmd->add_option("--format", fo_format, "csv|jsonl");
    fit_overtrain_cmd->add_option("--tolerance", fo_tolerance,
                                  "relative tolerance of the ratio buckets");
    fit_overtrain_cmd->add_flag("--strict", fo_strict, "abort on the first bad input row");
    fit_overtrain_cmd->add_option("--out", fo_out, "write a fit artifact here");
    fit_overtrain_cmd->add_flag("--json", fo_json, "machine-readable output");
    fit_overtrain_cmd->callback([&] {
        LoadReport report;
        const auto runs = load_runs(fo_in, record_format_from_string(fo_format), fo_strict,
                                    &report);
        report_load_errors(report, err);
        const OvertrainingFit fit = fit_overtraining(runs, fo_tolerance);
        ordered_json payload;
        payload["groups"] = ordered_json::array();
        for (const auto& [ratio, law] : fit.by_ratio) {
            ordered_json g;
            g["M"] = ratio;
            g["coefficient"] = law.coefficient;
            g["exponent"] = law.exponent;
            g["eta"] = overtraining_eta(law);
            g["r_squared"] = law.r_squared;
            payload["groups"].push_back(std::move(g));
        }
        payload["warnings"] = fit.warnings;
        if (!fo_out.empty()) write_fit_artifact(fo_out, "overtraining", payload, {fo_in});
        for (const auto& w : fit.warnings) err << "warning: " << w << "\n";
        emit(fo_json, payload, out, [&] {
            for (const auto& [ratio, law] : fit.by_ratio)
                out << "M=" << exact_repr(ratio) << ": eta " << exact_repr(overtraining_eta(law))
                    << ", coefficient " << exact_repr(law.coefficient) << ", r_squared "
                    << exact_repr(law.r_squared) << "\n";
        });
    });

    std::string fr_in, fr_config, fr_metric = "ttft", fr_accel, fr_out;
    bool fr_batch_const = false, fr_strict = false, fr_json = false;
    CostFactors fr_factors;
    ByteWidths fr_widths;
    double fr_uniform_weight = -1;
    auto* fit_runtime_cmd = fit_cmd->add_subcommand("runtime", "effective-rate latency model");
    fit_runtime_cmd->add_option("--in", fr_in, "latency measurements CSV")->required();
    fit_runtime_cmd->add_option("--config", fr_config, "architecture config JSON")->required();
    fit_runtime_cmd->add_option("--metric", fr_metric, "ttft|step-time");
    fit_runtime_cmd->add_flag("--batch-const", fr_batch_const,
                              "fit an extra per-sequence constant (step time)");
    fit_runtime_cmd->add_option("--accel", fr_accel, "report utilization against this device");
    fit_runtime_cmd->add_flag("--strict", fr_strict, "abort on the first bad input row");
    fit_runtime_cmd->add_option("--out", fr_out, "write a fit artifact here");
    fit_runtime_cmd->add_flag("--json", fr_json, "machine-readable output");
    add_factor_options(fit_runtime_cmd, fr_factors);
    add_width_options(fit_runtime_cmd, fr_widths, fr_uniform_weight);
    fit_runtime_cmd->callback([&] {
        const ArchConfig cfg = load_arch_config(fr_config);
        apply_uniform_weight(fr_widths, fr_uniform_weight);
        const LatencyMetric metric = latency_metric_from_string(fr_metric);
        LoadReport report;
        auto measurements = load_latencies(fr_in, fr_strict, &report);
        report_load_errors(report, err);
        std::erase_if(measurements,
                      [&](const LatencyMeasurement& m) { return m.metric != metric; });
        const RuntimeMode mode = metric == LatencyMetric::ttft ? RuntimeMode::compute_bound
                                                               : RuntimeMode::memory_bound;
        const auto cost_fn = [&](const LatencyMeasurement& m) {
            if (metric == LatencyMetric::ttft) {
                Workload w;
                w.mode = WorkloadMode::prefill;
                w.B = m.B;
                w.T_p = m.T_p;
                return flops_model_forward(cfg, w, fr_factors).total;
            }
            Workload w;
            w.mode = WorkloadMode::gen_step;
            w.B = m.B;
            w.T_p = m.T_p;
            return bytes_model(cfg, w, fr_widths).total;
        };
        RuntimeFit fit = fit_runtime(measurements, cost_fn, mode, fr_batch_const);
        std::optional<double> utilization;
        if (!fr_accel.empty()) {
            const AcceleratorSpec* accel = find_accelerator(fr_accel);
            if (!accel) throw data_error("unknown accelerator: " + fr_accel);
            utilization = hardware_utilization(fit, *accel, &fit.warnings);
        }
        ordered_json payload = to_payload(fit);
        if (utilization) payload["utilization"] = *utilization;
        if (!fr_out.empty())
            write_fit_artifact(fr_out, "runtime_fit", to_payload(fit), {fr_in, fr_config});
        for (const auto& w : fit.warnings) err << "warning: " << w << "\n";
        emit(fr_json, payload, out, [&] {
            out << "mode: " << to_string(fit.mode) << "\n";
            out << "rate_eff: " << exact_repr(fit.rate_eff) << " (" << eng(fit.rate_eff)
                << ")\n";
            out << "epsilon: " << exact_repr(fit.epsilon) << "\n";
            if (fit.batch_const)
                out << "batch_const: " << exact_repr(*fit.batch_const) << "\n";
            out << "residual_rms: " << exact_repr(fit.residual_rms) << "\n";
            if (utilization) out << "utilization: " << exact_repr(*utilization) << "\n";
        });
    });

    // ---- plan ------------------------------------------------------------
    std::string pl_fits, pl_configs, pl_out;
    double pl_budget = 0, pl_T_ctx = 8192, pl_multiplier = 3.0;
    bool pl_json = false;
    auto* plan_cmd = app.add_subcommand("plan", "compute-optimal allocation for a budget");
    plan_cmd->add_option("--budget", pl_budget, "compute budget H in FLOPs");
    plan_cmd->add_option("--fits", pl_fits, "JSON with fit_N and fit_D power-law payloads");
    plan_cmd->add_option("--configs", pl_configs, "model config table for realized compute");
    plan_cmd->add_option("--T-ctx", pl_T_ctx, "context length for realized compute");
    plan_cmd->add_option("--multiplier", pl_multiplier, "training FLOPs per forward FLOP");
    plan_cmd->add_option("--out", pl_out, "write a plan artifact here");
    plan_cmd->add_flag("--json", pl_json, "machine-readable output");

    std::vector<double> pg_N, pg_M;
    std::string pg_configs, pg_out;
    double pg_T_ctx = 8192, pg_multiplier = 3.0;
    bool pg_json = false;
    auto* plan_grid_cmd =
        plan_cmd->add_subcommand("grid", "token-to-parameter experiment grid");
    plan_grid_cmd->add_option("--N", pg_N, "parameter counts")->required()->delimiter(',');
    plan_grid_cmd->add_option("--M", pg_M, "token-to-parameter ratios")->delimiter(',');
    plan_grid_cmd->add_option("--configs", pg_configs, "model config table");
    plan_grid_cmd->add_option("--T-ctx", pg_T_ctx, "context length");
    plan_grid_cmd->add_option("--multiplier", pg_multiplier, "training FLOPs per forward FLOP");
    plan_grid_cmd->add_option("--out", pg_out, "write a plan artifact here");
    plan_grid_cmd->add_flag("--json", pg_json, "machine-readable output");
    plan_grid_cmd->callback([&] {
        ConfigLookup lookup;
        if (!pg_configs.empty()) lookup = make_nearest_lookup(load_config_table(pg_configs));
        const auto ratios = pg_M.empty() ? default_token_param_ratios() : pg_M;
        const auto grid =
            plan_token_param_grid(pg_N, ratios, lookup, {}, pg_T_ctx, pg_multiplier);
        ordered_json payload;
        payload["points"] = ordered_json::array();
        for (const auto& p : grid) {
            ordered_json row;
            row["N"] = p.N;
            row["M"] = p.M;
            row["D"] = p.D;
            if (p.C) row["C"] = *p.C;
            if (p.config_id) row["config_id"] = *p.config_id;
            if (p.warning) row["warning"] = *p.warning;
            payload["points"].push_back(std::move(row));
        }
        if (!pg_out.empty())
            write_fit_artifact(pg_out, "plan", payload,
                               pg_configs.empty() ? std::vector<std::string>{}
                                                  : std::vector<std::string>{pg_configs});
        emit(pg_json, payload, out, [&] {
            for (const auto& p : grid) {
                out << "N=" << eng(p.N) << " M=" << exact_repr(p.M) << " D=" << eng(p.D);
                if (p.C) out << " C=" << eng(*p.C);
                if (p.config_id) out << " config=" << *p.config_id;
                if (p.warning) out << " [" << *p.warning << "]";
                out << "\n";
            }
        });
    });

    plan_cmd->callback([&] {
        if (plan_grid_cmd->parsed()) return;
        if (!(pl_budget > 0) || pl_fits.empty())
            throw CLI::RequiredError("plan: --budget and --fits");
        std::ifstream in(pl_fits, std::ios::binary);
        if (!in) throw data_error("cannot open file: " + pl_fits);
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::exception& e) {
            throw data_error(pl_fits + ": " + e.what());
        }
        const PowerLawFit fit_N = power_law_from_payload(j.at("fit_N"));
        const PowerLawFit fit_D = power_law_from_payload(j.at("fit_D"));
        AllocationPlan plan;
        if (!pl_configs.empty()) {
            const auto lookup = make_nearest_lookup(load_config_table(pl_configs));
            plan = compute_optimal_alloc(fit_N, fit_D, pl_budget, lookup, {}, pl_T_ctx,
                                         pl_multiplier);
        } else {
            plan = compute_optimal_alloc(fit_N, fit_D, pl_budget);
        }
        const ordered_json payload = to_payload(plan);
        if (!pl_out.empty()) write_fit_artifact(pl_out, "plan", payload, {pl_fits});
        emit(pl_json, payload, out, [&] {
            out << "H: " << eng(plan.H) << "\n";
            out << "N_star: " << exact_repr(plan.N_star) << " (" << eng(plan.N_star) << ")\n";
            out << "D_star: " << exact_repr(plan.D_star) << " (" << eng(plan.D_star) << ")\n";
            out << "M_star: " << exact_repr(plan.M_star) << "\n";
            if (plan.realized_C) {
                out << "realized_C: " << eng(*plan.realized_C) << "\n";
                out << "realized_dev: " << exact_repr(*plan.realized_dev) << "\n";
            }
        });
    });

    // ---- predict ---------------------------------------------------------
    auto* predict_cmd = app.add_subcommand("predict", "latency predictions from a runtime fit");
    predict_cmd->require_subcommand(1);

    std::string pt_config, pt_fit;
    double pt_B = 1, pt_Tp = 0;
    bool pt_json = false;
    CostFactors pt_factors;
    auto* predict_ttft_cmd = predict_cmd->add_subcommand("ttft", "time to first token");
    predict_ttft_cmd->add_option("--config", pt_config, "architecture config JSON")->required();
    predict_ttft_cmd->add_option("--fit", pt_fit, "runtime fit artifact")->required();
    predict_ttft_cmd->add_option("--B", pt_B, "batch size in sequences");
    predict_ttft_cmd->add_option("--Tp", pt_Tp, "prefill length")->required();
    predict_ttft_cmd->add_flag("--json", pt_json, "machine-readable output");
    add_factor_options(predict_ttft_cmd, pt_factors);
    predict_ttft_cmd->callback([&] {
        const ArchConfig cfg = load_arch_config(pt_config);
        const ArtifactFile artifact = read_artifact(pt_fit);
        if (artifact.kind != "runtime_fit")
            throw data_error("expected a runtime_fit artifact, got '" + artifact.kind + "'");
        const RuntimeFit fit = runtime_fit_from_payload(artifact.payload);
        const double seconds = predict_ttft(cfg, pt_B, pt_Tp, fit, pt_factors);
        ordered_json payload;
        payload["metric"] = "ttft";
        payload["seconds"] = seconds;
        emit(pt_json, payload, out,
             [&] { out << "ttft_seconds: " << exact_repr(seconds) << "\n"; });
    });

    std::string ps_config, ps_fit;
    double ps_B = 1, ps_Tp = 0, ps_uniform_weight = -1;
    bool ps_json = false;
    ByteWidths ps_widths;
    auto* predict_step_cmd = predict_cmd->add_subcommand("step-time", "per-token generation latency");
    predict_step_cmd->add_option("--config", ps_config, "architecture config JSON")->required();
    predict_step_cmd->add_option("--fit", ps_fit, "runtime fit artifact")->required();
    predict_step_cmd->add_option("--B", ps_B, "batch size in sequences");
    predict_step_cmd->add_option("--Tp", ps_Tp, "context length at the step")->required();
    predict_step_cmd->add_flag("--json", ps_json, "machine-readable output");
    add_width_options(predict_step_cmd, ps_widths, ps_uniform_weight);
    predict_step_cmd->callback([&] {
        const ArchConfig cfg = load_arch_config(ps_config);
        apply_uniform_weight(ps_widths, ps_uniform_weight);
        const ArtifactFile artifact = read_artifact(ps_fit);
        if (artifact.kind != "runtime_fit")
            throw data_error("expected a runtime_fit artifact, got '" + artifact.kind + "'");
        const RuntimeFit fit = runtime_fit_from_payload(artifact.payload);
        const double seconds = predict_step_time(cfg, ps_B, ps_Tp, fit, ps_widths);
        ordered_json payload;
        payload["metric"] = "step_time";
        payload["seconds"] = seconds;
        emit(ps_json, payload, out,
             [&] { out << "step_time_seconds: " << exact_repr(seconds) << "\n"; });
    });

    // ---- roofline ----------------------------------------------------------
    std::string rf_accel;
    double rf_flops = 0, rf_bytes = 0;
    bool rf_json = false;
    auto* roofline_cmd = app.add_subcommand("roofline", "regime classification for a workload");
    roofline_cmd->add_option("--accel", rf_accel, "V100|A100|H100|B200")->required();
    roofline_cmd->add_option("--flops", rf_flops, "workload FLOPs")->required();
    roofline_cmd->add_option("--bytes", rf_bytes, "workload bytes moved")->required();
    roofline_cmd->add_flag("--json", rf_json, "machine-readable output");
    roofline_cmd->callback([&] {
        const AcceleratorSpec* accel = find_accelerator(rf_accel);
        if (!accel) throw data_error("unknown accelerator: " + rf_accel);
        const double intensity = arithmetic_intensity(rf_flops, rf_bytes);
        const RuntimeMode regime = classify_regime(intensity, *accel);
        const double t_flops = rf_flops / accel->alpha_acc;
        const double t_mem = rf_bytes / accel->beta_acc;
        const auto [lower, upper] = runtime_bounds(t_flops, t_mem);
        ordered_json payload;
        payload["accelerator"] = accel->name;
        payload["intensity"] = intensity;
        payload["regime"] = std::string(to_string(regime));
        payload["t_flops"] = t_flops;
        payload["t_mem"] = t_mem;
        payload["bound_lower"] = lower;
        payload["bound_upper"] = upper;
        emit(rf_json, payload, out, [&] {
            out << "accelerator: " << accel->name << "\n";
            out << "intensity: " << exact_repr(intensity) << "\n";
            out << "regime: " << to_string(regime) << "\n";
            out << "t_flops: " << exact_repr(t_flops) << "\n";
            out << "t_mem: " << exact_repr(t_mem) << "\n";
            out << "bound_lower: " << exact_repr(lower) << "\n";
            out << "bound_upper: " << exact_repr(upper) << "\n";
        });
    });

    // ---- pareto ------------------------------------------------------------
    std::string pa_in, pa_format = "csv";
    bool pa_strict = false, pa_json = false;
    auto* pareto_cmd = app.add_subcommand("pareto", "non-dominated runs in (compute, loss)");
    pareto_cmd->add_option("--in", pa_in, "run records file")->required();
    pareto_cmd->add_option("--format", pa_format, "csv|jsonl");
    pareto_cmd->add_flag("--strict", pa_strict, "abort on the first bad input row");
    pareto_cmd->add_flag("--json", pa_json, "machine-readable output");
    pareto_cmd->callback([&] {
        LoadReport report;
        const auto runs = load_runs(pa_in, record_format_from_string(pa_format), pa_strict,
                                    &report);
        report_load_errors(report, err);
        const auto frontier = pareto_frontier(runs);
        ordered_json payload;
        payload["frontier"] = ordered_json::array();
        for (const auto& r : frontier) payload["frontier"].push_back(run_record_to_json(r));
        emit(pa_json, payload, out, [&] {
            out << "kind,N,D,T_ctx,C,loss\n";
            for (const auto& r : frontier)
                out << to_string(r.kind) << "," << exact_repr(r.N) << "," << exact_repr(r.D)
                    << "," << exact_repr(r.T_ctx) << "," << exact_repr(r.C) << ","
                    << exact_repr(r.loss) << "\n";
        });
    });

    // ---- parse -------------------------------------------------------------
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("scalekit");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}

int run_command(int argc, const char* const* argv) {
    std::vector<std::string> args;
    args.reserve(argc > 0 ? static_cast<std::size_t>(argc - 1) : 0);
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return run_command(args, std::cout, std::cerr);
}

} // namespace scalekit
