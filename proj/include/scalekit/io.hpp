#pragma once

// File ingestion and persistence: run-record and latency CSV/JSONL loading,
// architecture config (de)serialization, shipped config tables, and JSON
// fit artifacts with content-digest provenance.

#include "scalekit/arch.hpp"
#include "scalekit/fit.hpp"
#include "scalekit/flops.hpp"
#include "scalekit/plan.hpp"
#include "scalekit/runtime.hpp"

#include <json.hpp>

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace scalekit {

enum class RecordFormat { csv, jsonl };

// Line-tagged ingestion diagnostics. In strict mode loading aborts on the
// first problem instead.
struct LoadReport {
    std::vector<std::string> errors;
};

// Loads `kind,N,D,T_ctx,C,loss` rows (CSV with that header, or JSON lines
// with those keys). C may be empty/absent; it is then computed via
// training_compute when a config lookup is supplied, otherwise the row is an
// invariant violation. Invalid rows are reported with their line numbers
// and skipped unless strict.
std::vector<RunRecord> load_runs(const std::string& path, RecordFormat format,
                                 bool strict = false, LoadReport* report = nullptr,
                                 const ConfigLookup& lookup = nullptr,
                                 const CostFactors& f = {},
                                 double backward_multiplier = 3.0);

// Loads `config_id,metric,B,T_p,seconds` CSV rows.
std::vector<LatencyMeasurement> load_latencies(const std::string& path, bool strict = false,
                                               LoadReport* report = nullptr);

// Loads a two-column numeric CSV (header required, any column names).
std::vector<std::pair<double, double>> load_xy_csv(const std::string& path);

// Flat JSON object with the ArchConfig field names; unknown fields are
// rejected. n_head_kv defaults to n_head_q; chunk_size is xlstm-only.
ArchConfig arch_config_from_json(const nlohmann::json& j);
nlohmann::ordered_json arch_config_to_json(const ArchConfig& cfg);
ArchConfig load_arch_config(const std::string& path);

// One row of a shipped model-config table.
struct NamedConfig {
    std::string id;
    std::string family; // token_param | isoflop
    double params_listed_m = 0;
    ArchConfig config;
};

std::vector<NamedConfig> load_config_table(const std::string& path);

// Nearest-parameter-count lookup over a config table; resolves when the
// nearest row's exact count is within max_rel_dev of the requested N.
ConfigLookup make_nearest_lookup(std::vector<NamedConfig> table, double max_rel_dev = 0.25);

// Persisted fit/plan/count result. Round-trips byte-identically:
// write(read(file)) equals file. Provenance carries input-file digests and
// the tool version, never wall-clock.
struct ArtifactFile {
    std::string schema_version = "1";
    std::string kind; // loss_surface | power_law | parabola | runtime_fit |
                      // overtraining | plan
    nlohmann::ordered_json payload;
    std::vector<std::pair<std::string, std::string>> inputs; // (path, sha256)
    std::string tool_version;
};

void write_artifact(const ArtifactFile& artifact, const std::string& path);
ArtifactFile read_artifact(const std::string& path); // checks schema_version
nlohmann::ordered_json artifact_to_json(const ArtifactFile& artifact);
ArtifactFile artifact_from_json(const nlohmann::ordered_json& j);

std::string sha256_hex(std::string_view bytes);
std::string sha256_file(const std::string& path);

// Payload (de)serializers for the fit types.
nlohmann::ordered_json to_payload(const LossSurfaceFit& fit);
nlohmann::ordered_json to_payload(const PowerLawFit& fit);
nlohmann::ordered_json to_payload(const ParabolaFit& fit);
nlohmann::ordered_json to_payload(const RuntimeFit& fit);
nlohmann::ordered_json to_payload(const AllocationPlan& plan);
LossSurfaceFit loss_surface_from_payload(const nlohmann::json& j);
PowerLawFit power_law_from_payload(const nlohmann::json& j);
ParabolaFit parabola_from_payload(const nlohmann::json& j);
RuntimeFit runtime_fit_from_payload(const nlohmann::json& j);

} // namespace scalekit
