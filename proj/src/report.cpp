#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "clusterval/harness.hpp"

namespace clusterval {

namespace {

using nlohmann::json;

// 6 significant digits for CSV cells; JSON keeps full precision.
std::string fmt6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string cell(const std::optional<double>& v) { return v ? fmt6(*v) : "NA"; }

std::string cal_cell(const IndexReport& row, const std::string& name) {
    const auto it = row.calibrated.find(name);
    return it == row.calibrated.end() ? "NA" : fmt6(it->second);
}

void open_or_throw(std::ofstream& out, const std::filesystem::path& path) {
    out.open(path, std::ios::binary);  // binary: identical bytes on every platform
    if (!out) throw std::runtime_error("cannot write " + path.string());
}

constexpr std::array<std::string_view, 6> kExternalNames = {"ari",      "vi",       "neg_vi",
                                                            "bcubed_p", "bcubed_r", "bcubed_f"};

std::optional<double> external_value(const IndexReport& row, std::string_view name) {
    if (name == "ari") return row.ari;
    if (name == "vi") return row.vi;
    if (name == "neg_vi") return row.neg_vi;
    if (name == "bcubed_p") return row.bcubed_p;
    if (name == "bcubed_r") return row.bcubed_r;
    return row.bcubed_f;
}

void write_wide_csv(const DatasetRun& run, const std::filesystem::path& path) {
    std::ofstream out;
    open_or_throw(out, path);
    out << "method";
    for (const auto name : kInternalIndexNames) out << ",raw_" << name;
    for (const auto name : kInternalIndexNames) out << ",cal_" << name;
    out << ",cal_dmode";
    for (const auto name : kExternalNames) out << "," << name;
    out << "\n";
    for (const auto& row : run.rows) {
        out << row.method;
        for (const auto name : kInternalIndexNames) out << "," << cell(row.raw.get(name));
        for (const auto name : kInternalIndexNames)
            out << "," << cal_cell(row, std::string(name));
        out << "," << cell(row.dmode);
        for (const auto name : kExternalNames) out << "," << cell(external_value(row, name));
        out << "\n";
    }
}

json config_echo(const BenchmarkConfig& cfg) {
    json j;
    j["master_seed"] = cfg.master_seed;
    j["methods"] = cfg.methods;
    j["kmeans_restarts"] = cfg.kmeans_restarts;
    j["ensemble"] = {{"per_algorithm", cfg.ensemble_per_algorithm}};
    if (cfg.ensemble_seed) j["ensemble"]["seed"] = *cfg.ensemble_seed;
    // threads deliberately omitted: parallelism must not influence output bytes
    j["index_params"] = {{"sindex_p", cfg.index_params.sindex_p},
                         {"kernel_p", cfg.index_params.kernel_p},
                         {"cvnnd_k", cfg.index_params.cvnnd_k}};
    j["datasets"] = json::array();
    for (const auto& ds : cfg.datasets) {
        json dj;
        dj["id"] = ds.id;
        dj["path"] = ds.path;
        if (ds.truth_column) dj["truth_column"] = *ds.truth_column;
        dj["scale"] = ds.zscore ? "zscore" : "none";
        if (ds.K) dj["K"] = *ds.K;
        if (!ds.external_partitions.empty()) {
            dj["external_partitions"] = json::array();
            for (const auto& [name, path] : ds.external_partitions)
                dj["external_partitions"].push_back({{"name", name}, {"path", path}});
        }
        j["datasets"].push_back(dj);
    }
    return j;
}

json row_json(const IndexReport& row) {
    json rj;
    rj["method"] = row.method;
    rj["seed_used"] = row.seed_used;
    if (row.objective) rj["objective"] = *row.objective;
    json raw = json::object();
    for (const auto name : kInternalIndexNames) {
        const auto v = row.raw.get(name);
        raw[std::string(name)] = v ? json(*v) : json(nullptr);
    }
    rj["raw"] = raw;
    json cal = json::object();
    for (const auto& [name, value] : row.calibrated) cal[name] = value;
    rj["calibrated"] = cal;
    rj["dmode"] = row.dmode ? json(*row.dmode) : json(nullptr);
    if (row.ari) {
        rj["external"] = {{"ari", *row.ari},           {"vi", *row.vi},
                          {"neg_vi", *row.neg_vi},     {"bcubed_p", *row.bcubed_p},
                          {"bcubed_r", *row.bcubed_r}, {"bcubed_f", *row.bcubed_f}};
    }
    if (!row.raw.failures.empty()) {
        json f = json::object();
        for (const auto& [name, msg] : row.raw.failures) f[name] = msg;
        rj["index_failures"] = f;
    }
    return rj;
}

void write_structured_report(const BenchmarkOutcome& outcome, const BenchmarkConfig& cfg,
                             const std::filesystem::path& path) {
    json j;
    j["config"] = config_echo(cfg);
    j["datasets"] = json::array();
    for (const auto& run : outcome.runs) {
        json dj;
        dj["id"] = run.id;
        dj["n"] = run.n;
        dj["p"] = run.p;
        dj["K"] = run.K;
        dj["seed"] = run.seed;
        dj["truth_present"] = run.truth_present;
        dj["pool_size"] = run.pool_size;
        dj["preprocessing"] = run.preprocessing;
        json stats = json::object();
        for (const auto& [name, ps] : run.pool_stats)
            stats[name] = {{"mean", ps.mean},
                           {"sd", ps.sd},
                           {"count", ps.count},
                           {"orientation", ps.orientation == Orientation::smaller_better
                                               ? "smaller_better"
                                               : "larger_better"}};
        dj["pool_stats"] = stats;
        dj["rows"] = json::array();
        for (const auto& row : run.rows) dj["rows"].push_back(row_json(row));
        j["datasets"].push_back(dj);
    }
    if (!outcome.dataset_errors.empty()) {
        json errs = json::array();
        for (const auto& [id, msg] : outcome.dataset_errors)
            errs.push_back({{"dataset", id}, {"error", msg}});
        j["dataset_errors"] = errs;
    }
    j["summaries"] = json::array();
    for (const auto& s : outcome.summaries) {
        json sj;
        sj["method"] = s.method;
        sj["mean_calibrated"] = s.mean_calibrated;
        sj["count"] = s.count;
        j["summaries"].push_back(sj);
    }
    if (outcome.pca) {
        json pj;
        pj["methods"] = outcome.pca->methods;
        pj["indexes"] = outcome.pca->indexes;
        pj["explained"] = outcome.pca->explained;
        pj["coords"] = json::array();
        for (const auto& c : outcome.pca->coords) pj["coords"].push_back({c[0], c[1]});
        pj["loadings"] = json::array();
        for (const auto& l : outcome.pca->loadings) pj["loadings"].push_back({l[0], l[1]});
        if (!outcome.pca->note.empty()) pj["note"] = outcome.pca->note;
        j["pca"] = pj;
    }

    std::ofstream out;
    open_or_throw(out, path);
    out << j.dump(2) << "\n";
}

void write_long_csv(const BenchmarkOutcome& outcome, const std::filesystem::path& path) {
    std::ofstream out;
    open_or_throw(out, path);
    out << "dataset,method,index,calibrated\n";
    for (const auto& run : outcome.runs)
        for (const auto& row : run.rows) {
            for (const auto name : kInternalIndexNames) {
                const auto it = row.calibrated.find(std::string(name));
                if (it == row.calibrated.end()) continue;
                out << run.id << "," << row.method << "," << name << "," << fmt6(it->second)
                    << "\n";
            }
            if (row.dmode)
                out << run.id << "," << row.method << ",dmode," << fmt6(*row.dmode) << "\n";
        }
}

void write_pca_csv(const PcaMap& pca, const std::filesystem::path& coords_path,
                   const std::filesystem::path& loadings_path) {
    std::ofstream out;
    open_or_throw(out, coords_path);
    out << "method,pc1,pc2\n";
    for (std::size_t i = 0; i < pca.methods.size(); ++i)
        out << pca.methods[i] << "," << fmt6(pca.coords[i][0]) << "," << fmt6(pca.coords[i][1])
            << "\n";

    std::ofstream lout;
    open_or_throw(lout, loadings_path);
    lout << "index,pc1,pc2,explained_pc1,explained_pc2\n";
    const double e1 = pca.explained.size() > 0 ? pca.explained[0] : 0.0;
    const double e2 = pca.explained.size() > 1 ? pca.explained[1] : 0.0;
    for (std::size_t j = 0; j < pca.indexes.size(); ++j)
        lout << pca.indexes[j] << "," << fmt6(pca.loadings[j][0]) << ","
             << fmt6(pca.loadings[j][1]) << "," << fmt6(e1) << "," << fmt6(e2) << "\n";
}

}  // namespace

void emit_reports(const BenchmarkOutcome& outcome, const BenchmarkConfig& cfg,
                  const std::string& output_dir) {
    if (outcome.runs.empty() && outcome.dataset_errors.empty())
        throw std::invalid_argument("emit_reports: nothing to write");
    const std::filesystem::path dir(output_dir);
    std::filesystem::create_directories(dir);

    for (const auto& run : outcome.runs) write_wide_csv(run, dir / (run.id + "_indexes.csv"));
    write_structured_report(outcome, cfg, dir / "report.json");
    write_long_csv(outcome, dir / "parallel_coordinates.csv");
    if (outcome.pca) write_pca_csv(*outcome.pca, dir / "pca_map.csv", dir / "pca_loadings.csv");
}

}  // namespace clusterval
