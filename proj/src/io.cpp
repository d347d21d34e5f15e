#include "scalekit/io.hpp"

#include "scalekit/errors.hpp"
#include "scalekit/version.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <memory>
#include <sstream>

namespace scalekit {

namespace {

using nlohmann::json;
using nlohmann::ordered_json;

std::string trim(std::string_view s) {
    const auto begin = s.find_first_not_of(" \t\r\n");
    if (begin == std::string_view::npos) return {};
    const auto end = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(begin, end - begin + 1));
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(trim(std::string_view(line).substr(start)));
            break;
        }
        fields.push_back(trim(std::string_view(line).substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

// Locale-independent decimal parse; the whole field must be consumed.
double parse_double(const std::string& field, const char* what) {
    double value = 0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last)
        throw data_error(std::string("not a number for ") + what + ": '" + field + "'");
    return value;
}

std::ifstream open_or_throw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw data_error("cannot open file: " + path);
    return in;
}

// Shared per-line error policy: strict throws, lenient collects.
struct ErrorSink {
    bool strict;
    LoadReport* report;

    void operator()(std::size_t line_no, const std::string& message) const {
        std::ostringstream msg;
        msg << "line " << line_no << ": " << message;
        if (strict) throw data_error(msg.str());
        if (report) report->errors.push_back(msg.str());
    }
};

std::optional<RunRecord> parse_run_fields(
    ArchKind kind, double N, double D, double T_ctx, std::optional<double> C,
    double loss, const ConfigLookup& lookup, const CostFactors& f,
    double backward_multiplier) {
    if (!C) {
        if (lookup && T_ctx > 0 && D >= T_ctx) {
            if (auto resolved = lookup(N))
                C = training_compute(resolved->second, T_ctx, D, f, backward_multiplier);
        }
        if (!C) throw data_error("C missing and not computable from a config lookup");
    }
    return make_run_record(kind, N, D, T_ctx, *C, loss);
}

} // namespace

std::vector<RunRecord> load_runs(const std::string& path, RecordFormat format,
                                 bool strict, LoadReport* report,
                                 const ConfigLookup& lookup, const CostFactors& f,
                                 double backward_multiplier) {
    std::ifstream in = open_or_throw(path);
    const ErrorSink fail{strict, report};
    std::vector<RunRecord> runs;
    std::string line;
    std::size_t line_no = 0;

    if (format == RecordFormat::csv) {
        if (!std::getline(in, line)) return runs;
        ++line_no;
        const auto header = split_csv(line);
        const std::vector<std::string> expected = {"kind", "N", "D", "T_ctx", "C", "loss"};
        if (header != expected)
            throw data_error(path + ": expected header kind,N,D,T_ctx,C,loss");
        while (std::getline(in, line)) {
            ++line_no;
            if (trim(line).empty()) continue;
            try {
                const auto fields = split_csv(line);
                if (fields.size() != expected.size())
                    throw data_error("expected 6 fields");
                std::optional<double> C;
                if (!fields[4].empty()) C = parse_double(fields[4], "C");
                auto record = parse_run_fields(
                    arch_kind_from_string(fields[0]), parse_double(fields[1], "N"),
                    parse_double(fields[2], "D"), parse_double(fields[3], "T_ctx"), C,
                    parse_double(fields[5], "loss"), lookup, f, backward_multiplier);
                if (record) runs.push_back(*record);
            } catch (const std::exception& e) {
                fail(line_no, e.what());
            }
        }
        return runs;
    }

    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const json j = json::parse(line);
            if (!j.is_object()) throw data_error("expected a JSON object");
            std::optional<double> C;
            if (j.contains("C") && !j.at("C").is_null()) C = j.at("C").get<double>();
            auto record = parse_run_fields(
                arch_kind_from_string(j.at("kind").get<std::string>()),
                j.at("N").get<double>(), j.at("D").get<double>(),
                j.at("T_ctx").get<double>(), C, j.at("loss").get<double>(), lookup, f,
                backward_multiplier);
            if (record) runs.push_back(*record);
        } catch (const std::exception& e) {
            fail(line_no, e.what());
        }
    }
    return runs;
}

std::vector<LatencyMeasurement> load_latencies(const std::string& path, bool strict,
                                               LoadReport* report) {
    std::ifstream in = open_or_throw(path);
    const ErrorSink fail{strict, report};
    std::vector<LatencyMeasurement> out;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) return out;
    ++line_no;
    const std::vector<std::string> expected = {"config_id", "metric", "B", "T_p", "seconds"};
    if (split_csv(line) != expected)
        throw data_error(path + ": expected header config_id,metric,B,T_p,seconds");
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        try {
            const auto fields = split_csv(line);
            if (fields.size() != expected.size()) throw data_error("expected 5 fields");
            LatencyMeasurement m;
            m.config_id = fields[0];
            m.metric = latency_metric_from_string(fields[1]);
            m.B = parse_double(fields[2], "B");
            m.T_p = parse_double(fields[3], "T_p");
            m.seconds = parse_double(fields[4], "seconds");
            if (!(m.B >= 1)) throw data_error("B must be >= 1");
            if (m.T_p < 0) throw data_error("T_p must be >= 0");
            if (!(m.seconds > 0)) throw data_error("seconds must be positive");
            out.push_back(std::move(m));
        } catch (const std::exception& e) {
            fail(line_no, e.what());
        }
    }
    return out;
}

std::vector<std::pair<double, double>> load_xy_csv(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::vector<std::pair<double, double>> out;
    std::string line;
    std::size_t line_no = 0;
    if (!std::getline(in, line)) throw data_error(path + ": missing header");
    ++line_no;
    if (split_csv(line).size() != 2)
        throw data_error(path + ": expected a two-column CSV header");
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != 2) {
            std::ostringstream msg;
            msg << path << " line " << line_no << ": expected 2 fields";
            throw data_error(msg.str());
        }
        out.emplace_back(parse_double(fields[0], "x"), parse_double(fields[1], "y"));
    }
    return out;
}

ArchConfig arch_config_from_json(const json& j) {
    if (!j.is_object()) throw data_error("config: expected a JSON object");
    static const std::vector<std::string> known = {
        "kind",      "d_model", "d_ff",    "d_qk",    "d_hv",
        "n_head_q",  "n_head_kv", "n_layer", "n_vocab", "chunk_size"};
    for (const auto& [key, value] : j.items()) {
        (void)value;
        if (std::find(known.begin(), known.end(), key) == known.end())
            throw data_error("config: unknown field '" + key + "'");
    }
    ArchConfig cfg;
    try {
        cfg.kind = arch_kind_from_string(j.at("kind").get<std::string>());
        cfg.d_model = j.at("d_model").get<std::uint64_t>();
        cfg.d_ff = j.at("d_ff").get<std::uint64_t>();
        cfg.d_qk = j.at("d_qk").get<std::uint64_t>();
        cfg.d_hv = j.at("d_hv").get<std::uint64_t>();
        cfg.n_head_q = j.at("n_head_q").get<std::uint64_t>();
        cfg.n_layer = j.at("n_layer").get<std::uint64_t>();
        cfg.n_head_kv = j.value("n_head_kv", cfg.n_head_q);
        cfg.n_vocab = j.value("n_vocab", std::uint64_t{50257});
        cfg.chunk_size = j.value("chunk_size", std::uint64_t{64});
    } catch (const json::exception& e) {
        throw data_error(std::string("config: ") + e.what());
    }
    require_valid(cfg);
    return cfg;
}

ordered_json arch_config_to_json(const ArchConfig& cfg) {
    ordered_json j;
    j["kind"] = std::string(to_string(cfg.kind));
    j["d_model"] = cfg.d_model;
    j["d_ff"] = cfg.d_ff;
    j["d_qk"] = cfg.d_qk;
    j["d_hv"] = cfg.d_hv;
    j["n_head_q"] = cfg.n_head_q;
    if (cfg.kind == ArchKind::transformer) j["n_head_kv"] = cfg.n_head_kv;
    j["n_layer"] = cfg.n_layer;
    j["n_vocab"] = cfg.n_vocab;
    if (cfg.kind == ArchKind::xlstm) j["chunk_size"] = cfg.chunk_size;
    return j;
}

ArchConfig load_arch_config(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw data_error(path + ": " + e.what());
    }
    return arch_config_from_json(j);
}

std::vector<NamedConfig> load_config_table(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw data_error(path + ": " + e.what());
    }
    if (!j.is_array()) throw data_error(path + ": expected a top-level array");
    std::vector<NamedConfig> table;
    table.reserve(j.size());
    for (const auto& row : j) {
        try {
            NamedConfig named;
            named.id = row.at("id").get<std::string>();
            named.family = row.at("family").get<std::string>();
            named.params_listed_m = row.at("params_m").get<double>();
            named.config = arch_config_from_json(row.at("config"));
            table.push_back(std::move(named));
        } catch (const json::exception& e) {
            throw data_error(path + ": bad row: " + e.what());
        }
    }
    return table;
}

ConfigLookup make_nearest_lookup(std::vector<NamedConfig> table, double max_rel_dev) {
    if (!(max_rel_dev >= 0))
        throw invalid_input("make_nearest_lookup: deviation bound must be >= 0");
    struct Entry {
        NamedConfig named;
        double exact_params;
    };
    auto entries = std::make_shared<std::vector<Entry>>();
    entries->reserve(table.size());
    for (auto& named : table) {
        const double exact = static_cast<double>(count_params(named.config).total);
        entries->push_back({std::move(named), exact});
    }
    return [entries, max_rel_dev](double N)
               -> std::optional<std::pair<std::string, ArchConfig>> {
        if (!(N > 0) || entries->empty()) return std::nullopt;
        const Entry* best = nullptr;
        for (const auto& e : *entries)
            if (!best || std::abs(e.exact_params - N) < std::abs(best->exact_params - N))
                best = &e;
        if (std::abs(best->exact_params - N) > max_rel_dev * N) return std::nullopt;
        return std::make_pair(best->named.id, best->named.config);
    };
}

ordered_json artifact_to_json(const ArtifactFile& artifact) {
    ordered_json j;
    j["schema_version"] = artifact.schema_version;
    j["kind"] = artifact.kind;
    j["payload"] = artifact.payload;
    ordered_json inputs = ordered_json::array();
    for (const auto& [path, digest] : artifact.inputs) {
        ordered_json entry;
        entry["path"] = path;
        entry["sha256"] = digest;
        inputs.push_back(std::move(entry));
    }
    j["provenance"]["inputs"] = std::move(inputs);
    j["provenance"]["tool_version"] = artifact.tool_version;
    return j;
}

ArtifactFile artifact_from_json(const ordered_json& j) {
    ArtifactFile artifact;
    try {
        artifact.schema_version = j.at("schema_version").get<std::string>();
        artifact.kind = j.at("kind").get<std::string>();
        artifact.payload = j.at("payload");
        const auto& prov = j.at("provenance");
        for (const auto& entry : prov.at("inputs"))
            artifact.inputs.emplace_back(entry.at("path").get<std::string>(),
                                         entry.at("sha256").get<std::string>());
        artifact.tool_version = prov.at("tool_version").get<std::string>();
    } catch (const json::exception& e) {
        throw data_error(std::string("artifact: ") + e.what());
    }
    if (artifact.schema_version != "1")
        throw data_error("artifact: unsupported schema_version '" +
                         artifact.schema_version + "'");
    return artifact;
}

void write_artifact(const ArtifactFile& artifact, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw data_error("cannot write file: " + path);
    out << artifact_to_json(artifact).dump(2) << "\n";
}

ArtifactFile read_artifact(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    ordered_json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw data_error(path + ": " + e.what());
    }
    return artifact_from_json(j);
}

std::string sha256_hex(std::string_view bytes) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int length = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(), nullptr) != 1)
        throw data_error("sha256 digest failed");
    static const char* hex = "0123456789abcdef";
    std::string out;
    out.reserve(2 * length);
    for (unsigned int i = 0; i < length; ++i) {
        out.push_back(hex[digest[i] >> 4]);
        out.push_back(hex[digest[i] & 0xf]);
    }
    return out;
}

std::string sha256_file(const std::string& path) {
    std::ifstream in = open_or_throw(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();
    return sha256_hex(bytes);
}

namespace {

ordered_json optional_number(const std::optional<double>& v) {
    return v ? ordered_json(*v) : ordered_json(nullptr);
}

std::optional<double> number_or_null(const json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<double>();
}

} // namespace

ordered_json to_payload(const LossSurfaceFit& fit) {
    ordered_json j;
    j["logE"] = fit.logE;
    j["logA"] = fit.logA;
    j["logB"] = fit.logB;
    j["alpha"] = fit.alpha;
    j["beta"] = fit.beta;
    j["gamma"] = fit.gamma;
    j["huber_delta"] = fit.huber_delta;
    j["fit_mse"] = fit.fit_mse;
    j["gamma_frozen"] = fit.gamma_frozen;
    j["grid_index"] = fit.grid_index;
    return j;
}

ordered_json to_payload(const PowerLawFit& fit) {
    ordered_json j;
    j["coefficient"] = fit.coefficient;
    j["exponent"] = fit.exponent;
    j["r_squared"] = fit.r_squared;
    return j;
}

ordered_json to_payload(const ParabolaFit& fit) {
    ordered_json j;
    j["c2"] = fit.c2;
    j["c1"] = fit.c1;
    j["c0"] = fit.c0;
    j["optimum_x"] = optional_number(fit.optimum_x);
    j["optimum_loss"] = optional_number(fit.optimum_loss);
    j["interior"] = fit.interior;
    return j;
}

ordered_json to_payload(const RuntimeFit& fit) {
    ordered_json j;
    j["mode"] = std::string(to_string(fit.mode));
    j["rate_eff"] = fit.rate_eff;
    j["epsilon"] = fit.epsilon;
    j["batch_const"] = optional_number(fit.batch_const);
    j["residual_rms"] = fit.residual_rms;
    j["warnings"] = fit.warnings;
    return j;
}

ordered_json to_payload(const AllocationPlan& plan) {
    ordered_json j;
    j["H"] = plan.H;
    j["N_star"] = plan.N_star;
    j["D_star"] = plan.D_star;
    j["M_star"] = plan.M_star;
    j["fit_N"] = to_payload(plan.fit_N);
    j["fit_D"] = to_payload(plan.fit_D);
    j["realized_C"] = optional_number(plan.realized_C);
    j["realized_dev"] = optional_number(plan.realized_dev);
    return j;
}

LossSurfaceFit loss_surface_from_payload(const json& j) {
    LossSurfaceFit fit;
    try {
        fit.logE = j.at("logE").get<double>();
        fit.logA = j.at("logA").get<double>();
        fit.logB = j.at("logB").get<double>();
        fit.alpha = j.at("alpha").get<double>();
        fit.beta = j.at("beta").get<double>();
        fit.gamma = j.at("gamma").get<double>();
        fit.huber_delta = j.at("huber_delta").get<double>();
        fit.fit_mse = j.at("fit_mse").get<double>();
        fit.gamma_frozen = j.at("gamma_frozen").get<bool>();
        fit.grid_index = j.at("grid_index").get<std::size_t>();
    } catch (const json::exception& e) {
        throw data_error(std::string("loss_surface payload: ") + e.what());
    }
    return fit;
}

PowerLawFit power_law_from_payload(const json& j) {
    PowerLawFit fit;
    try {
        fit.coefficient = j.at("coefficient").get<double>();
        fit.exponent = j.at("exponent").get<double>();
        fit.r_squared = j.at("r_squared").get<double>();
    } catch (const json::exception& e) {
        throw data_error(std::string("power_law payload: ") + e.what());
    }
    return fit;
}

ParabolaFit parabola_from_payload(const json& j) {
    ParabolaFit fit;
    try {
        fit.c2 = j.at("c2").get<double>();
        fit.c1 = j.at("c1").get<double>();
        fit.c0 = j.at("c0").get<double>();
        fit.optimum_x = number_or_null(j, "optimum_x");
        fit.optimum_loss = number_or_null(j, "optimum_loss");
        fit.interior = j.at("interior").get<bool>();
    } catch (const json::exception& e) {
        throw data_error(std::string("parabola payload: ") + e.what());
    }
    return fit;
}

RuntimeFit runtime_fit_from_payload(const json& j) {
    RuntimeFit fit;
    try {
        fit.mode = runtime_mode_from_string(j.at("mode").get<std::string>());
        fit.rate_eff = j.at("rate_eff").get<double>();
        fit.epsilon = j.at("epsilon").get<double>();
        fit.batch_const = number_or_null(j, "batch_const");
        fit.residual_rms = j.at("residual_rms").get<double>();
        fit.warnings = j.at("warnings").get<std::vector<std::string>>();
    } catch (const json::exception& e) {
        throw data_error(std::string("runtime_fit payload: ") + e.what());
    }
    return fit;
}

} // namespace scalekit
