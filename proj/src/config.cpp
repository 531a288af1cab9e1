#include <algorithm>
#include <cctype>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "clusterval/harness.hpp"

namespace clusterval {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& origin, const std::string& msg) {
    throw std::runtime_error("config " + origin + ": " + msg);
}

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& origin, const std::string& where) {
    for (const auto& [key, _] : obj.items())
        if (!allowed.count(key)) fail(origin, "unknown key '" + key + "' in " + where);
}

std::string sanitize_id(const std::string& raw) {
    std::string out;
    for (char c : raw)
        out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
    return out;
}

bool is_known_method(const std::string& m) {
    return m == "kmeans" || m == "pam" || m == "single" || m == "average" || m == "complete";
}

}  // namespace

BenchmarkConfig parse_config(const std::string& json_text, const std::string& origin) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        fail(origin, std::string("not valid JSON: ") + e.what());
    }
    if (!root.is_object()) fail(origin, "top level must be an object");
    reject_unknown_keys(root,
                        {"datasets", "methods", "kmeans_restarts", "ensemble", "index_params",
                         "output_dir", "master_seed", "threads"},
                        origin, "top level");

    BenchmarkConfig cfg;
    if (root.contains("master_seed")) {
        if (!root["master_seed"].is_number_integer()) fail(origin, "master_seed must be an integer");
        cfg.master_seed = root["master_seed"].get<std::uint64_t>();
    }
    if (root.contains("output_dir")) cfg.output_dir = root["output_dir"].get<std::string>();
    if (root.contains("threads")) {
        cfg.threads = root["threads"].get<int>();
        if (cfg.threads < 0) fail(origin, "threads must be >= 0");
    }
    if (root.contains("kmeans_restarts")) {
        cfg.kmeans_restarts = root["kmeans_restarts"].get<int>();
        if (cfg.kmeans_restarts < 1) fail(origin, "kmeans_restarts must be >= 1");
    }

    if (root.contains("ensemble")) {
        const json& e = root["ensemble"];
        if (!e.is_object()) fail(origin, "ensemble must be an object");
        reject_unknown_keys(e, {"per_algorithm", "seed"}, origin, "ensemble");
        if (e.contains("per_algorithm")) {
            cfg.ensemble_per_algorithm = e["per_algorithm"].get<int>();
            if (cfg.ensemble_per_algorithm < 1) fail(origin, "ensemble.per_algorithm must be >= 1");
        }
        if (e.contains("seed")) cfg.ensemble_seed = e["seed"].get<std::uint64_t>();
    }

    if (root.contains("index_params")) {
        const json& ip = root["index_params"];
        if (!ip.is_object()) fail(origin, "index_params must be an object");
        reject_unknown_keys(ip, {"sindex_p", "kernel_p", "cvnnd_k"}, origin, "index_params");
        if (ip.contains("sindex_p")) cfg.index_params.sindex_p = ip["sindex_p"].get<double>();
        if (ip.contains("kernel_p")) cfg.index_params.kernel_p = ip["kernel_p"].get<double>();
        if (ip.contains("cvnnd_k")) cfg.index_params.cvnnd_k = ip["cvnnd_k"].get<int>();
        if (cfg.index_params.sindex_p < 0.0 || cfg.index_params.sindex_p > 1.0)
            fail(origin, "index_params.sindex_p must be in [0,1]");
        if (cfg.index_params.kernel_p <= 0.0 || cfg.index_params.kernel_p > 1.0)
            fail(origin, "index_params.kernel_p must be in (0,1]");
        if (cfg.index_params.cvnnd_k < 1) fail(origin, "index_params.cvnnd_k must be >= 1");
    }

    if (!root.contains("methods") || !root["methods"].is_array())
        fail(origin, "methods must be a non-empty array");
    for (const auto& m : root["methods"]) {
        const auto name = m.get<std::string>();
        if (!is_known_method(name))
            fail(origin, "unknown method '" + name +
                             "' (built-ins: kmeans pam single average complete; external "
                             "partitions go in datasets[].external_partitions)");
        if (std::find(cfg.methods.begin(), cfg.methods.end(), name) != cfg.methods.end())
            fail(origin, "duplicate method '" + name + "'");
        cfg.methods.push_back(name);
    }

    if (!root.contains("datasets") || !root["datasets"].is_array() || root["datasets"].empty())
        fail(origin, "datasets must be a non-empty array");
    std::set<std::string> seen_ids;
    for (const auto& dj : root["datasets"]) {
        if (!dj.is_object()) fail(origin, "each dataset must be an object");
        reject_unknown_keys(dj, {"id", "path", "truth_column", "scale", "K", "external_partitions"},
                            origin, "dataset entry");
        DatasetSpec ds;
        if (!dj.contains("path")) fail(origin, "dataset entry without path");
        ds.path = dj["path"].get<std::string>();
        ds.id = dj.contains("id") ? sanitize_id(dj["id"].get<std::string>())
                                  : sanitize_id(std::filesystem::path(ds.path).stem().string());
        if (ds.id.empty()) fail(origin, "dataset id is empty for path " + ds.path);
        if (!seen_ids.insert(ds.id).second) fail(origin, "duplicate dataset id '" + ds.id + "'");
        if (dj.contains("truth_column")) {
            if (dj["truth_column"].is_number_integer())
                ds.truth_column = std::to_string(dj["truth_column"].get<long long>());
            else
                ds.truth_column = dj["truth_column"].get<std::string>();
        }
        if (dj.contains("scale")) {
            const auto s = dj["scale"].get<std::string>();
            if (s == "zscore")
                ds.zscore = true;
            else if (s == "none")
                ds.zscore = false;
            else
                fail(origin, "dataset scale must be 'zscore' or 'none', got '" + s + "'");
        }
        if (dj.contains("K")) {
            ds.K = dj["K"].get<int>();
            if (*ds.K < 1) fail(origin, "dataset K must be >= 1");
        }
        if (dj.contains("external_partitions")) {
            if (!dj["external_partitions"].is_array())
                fail(origin, "external_partitions must be an array");
            std::set<std::string> names;
            for (const auto& ej : dj["external_partitions"]) {
                reject_unknown_keys(ej, {"name", "path"}, origin, "external partition entry");
                if (!ej.contains("name") || !ej.contains("path"))
                    fail(origin, "external partition entries need name and path");
                const auto name = ej["name"].get<std::string>();
                if (!names.insert(name).second)
                    fail(origin, "duplicate external partition name '" + name + "'");
                ds.external_partitions.emplace_back(name, ej["path"].get<std::string>());
            }
        }
        cfg.datasets.push_back(std::move(ds));
    }

    if (cfg.methods.empty() &&
        std::all_of(cfg.datasets.begin(), cfg.datasets.end(),
                    [](const DatasetSpec& d) { return d.external_partitions.empty(); }))
        fail(origin, "no methods and no external partitions configured");

    return cfg;
}

BenchmarkConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path);
}

}  // namespace clusterval
