#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "clusterval/external.hpp"
#include "clusterval/harness.hpp"
#include "clusterval/rng.hpp"

namespace {

using namespace clusterval;

// exit codes: 0 ok, 1 validation error, 2 partial dataset failures
constexpr int kOk = 0;
constexpr int kValidationError = 1;
constexpr int kPartialFailure = 2;

int cmd_run(const std::string& config_path, const std::string& out_dir,
            std::optional<std::uint64_t> seed, std::optional<int> threads) {
    BenchmarkConfig cfg = load_config(config_path);
    if (seed) cfg.master_seed = *seed;
    if (threads) cfg.threads = *threads;
    const std::string dir = !out_dir.empty() ? out_dir
                            : !cfg.output_dir.empty() ? cfg.output_dir
                                                      : "clusterval_out";

    const BenchmarkOutcome outcome = run_benchmark(cfg);
    emit_reports(outcome, cfg, dir);
    std::cout << "wrote reports for " << outcome.runs.size() << " dataset(s) to " << dir << "\n";
    if (!outcome.dataset_errors.empty()) {
        for (const auto& [id, msg] : outcome.dataset_errors)
            std::cout << "dataset " << id << " failed: " << msg << "\n";
        return kPartialFailure;
    }
    return kOk;
}

int cmd_indexes(const std::string& data_path, const std::string& partition_path,
                const std::optional<std::string>& truth_col, const std::string& scale,
                const IndexParams& params) {
    Dataset data = load_csv(data_path, truth_col);
    if (data.has_missing()) data = impute_mean(data);
    if (scale == "zscore") data = scale_zscore(data);
    const DistanceMatrix dm = euclidean_distances(data);
    const ClusteringResult r = ingest_partition(partition_path, data.n);
    const InternalIndexVector v = all_internal(data, dm, r.partition, params);

    std::cout << "n " << data.n << "\np " << data.p << "\nK " << r.partition.K << "\n";
    for (const auto name : kInternalIndexNames) {
        const auto value = v.get(name);
        std::cout << name << " ";
        if (value)
            std::cout << *value;
        else
            std::cout << "NA";
        std::cout << "\n";
    }
    for (const auto& [name, msg] : v.failures)
        std::cerr << "note: " << name << " unavailable: " << msg << "\n";
    return kOk;
}

int cmd_compare(const std::string& pred_path, const std::string& truth_path) {
    const std::vector<std::string> pred_lines = read_label_lines(pred_path);
    const std::vector<std::string> truth_lines = read_label_lines(truth_path);
    if (pred_lines.empty() || truth_lines.empty())
        throw std::runtime_error("empty partition file");
    // tolerate a single-column header on either side
    std::vector<std::string> a = truth_lines, b = pred_lines;
    if (a.size() == b.size() + 1) a.erase(a.begin());
    if (b.size() == a.size() + 1) b.erase(b.begin());
    const Partition truth = validate_partition(a, a.size());
    const Partition pred = validate_partition(b, a.size());

    const ContingencyTable t = contingency(truth, pred);
    const double v = vi(t);
    const BCubedResult bc = bcubed(t);
    std::cout << "ari " << ari(t) << "\n"
              << "vi " << v << "\n"
              << "neg_vi " << -v << "\n"
              << "bcubed_p " << bc.precision << "\n"
              << "bcubed_r " << bc.recall << "\n"
              << "bcubed_f " << bc.f << "\n";
    return kOk;
}

int cmd_ensemble(const std::string& data_path, int K, int per_algorithm, std::uint64_t seed,
                 const std::optional<std::string>& truth_col, const std::string& scale,
                 const std::string& out_dir) {
    Dataset data = load_csv(data_path, truth_col);
    if (data.has_missing()) data = impute_mean(data);
    if (scale == "zscore") data = scale_zscore(data);
    const DistanceMatrix dm = euclidean_distances(data);

    const EnsembleSpec spec{per_algorithm, K, seed};
    const std::vector<Partition> parts = generate_ensemble(dm, spec);

    std::filesystem::create_directories(out_dir);
    std::size_t idx = 0;
    for (std::size_t a = 0; a < kEnsembleAlgorithmNames.size(); ++a) {
        for (int i = 0; i < per_algorithm; ++i, ++idx) {
            const auto name = std::string(kEnsembleAlgorithmNames[a]) + "_" +
                              std::to_string(i) + ".labels";
            std::ofstream out(std::filesystem::path(out_dir) / name, std::ios::binary);
            if (!out) throw std::runtime_error("cannot write " + name);
            for (int l : parts[idx].labels) out << l << "\n";
            std::cout << name << " K=" << parts[idx].K << "\n";
        }
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cluster validation benchmark harness"};
    app.require_subcommand(1);

    // run
    auto* run = app.add_subcommand("run", "run the benchmark pipeline from a config file");
    std::string config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> threads;
    run->add_option("--config", config_path, "JSON config file")->required();
    run->add_option("--out", out_dir, "output directory (overrides config output_dir)");
    run->add_option("--seed", seed, "master seed (overrides config)");
    run->add_option("--threads", threads, "worker threads, 0 = all cores (overrides config)");

    // indexes
    auto* indexes = app.add_subcommand("indexes", "raw internal indexes for one partition");
    std::string data_path, partition_path, scale = "zscore";
    std::optional<std::string> truth_col;
    IndexParams params;
    indexes->add_option("--data", data_path, "CSV data file")->required();
    indexes->add_option("--partition", partition_path, "partition file, one label per line")
        ->required();
    indexes->add_option("--truth-col", truth_col,
                        "truth column (name or 1-based position), excluded from features");
    indexes->add_option("--scale", scale, "zscore|none (default zscore)")
        ->check(CLI::IsMember({"zscore", "none"}));
    indexes->add_option("--sindex-p", params.sindex_p, "separation border proportion");
    indexes->add_option("--kernel-p", params.kernel_p, "kernel radius distance quantile");
    indexes->add_option("--cvnnd-k", params.cvnnd_k, "cvnnd neighbour order");

    // compare
    auto* compare = app.add_subcommand("compare", "external indexes between two partitions");
    std::string pred_path, truth_path;
    compare->add_option("--pred", pred_path, "predicted partition file")->required();
    compare->add_option("--truth", truth_path, "reference partition file")->required();

    // ensemble
    auto* ensemble = app.add_subcommand("ensemble", "emit random calibration partitions");
    std::string edata_path, eout_dir = ".", escale = "zscore";
    std::optional<std::string> etruth_col;
    int K = 0, per_algorithm = 50;
    std::uint64_t eseed = 0;
    ensemble->add_option("--data", edata_path, "CSV data file")->required();
    ensemble->add_option("--k", K, "number of clusters")->required();
    ensemble->add_option("--per-algorithm", per_algorithm, "replicates per generator");
    ensemble->add_option("--seed", eseed, "master seed");
    ensemble->add_option("--truth-col", etruth_col, "truth column, excluded from features");
    ensemble->add_option("--scale", escale, "zscore|none (default zscore)")
        ->check(CLI::IsMember({"zscore", "none"}));
    ensemble->add_option("--out", eout_dir, "output directory (default .)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);  // prints message/help; 0 for --help
        return code == 0 ? kOk : kValidationError;
    }

    try {
        if (run->parsed()) return cmd_run(config_path, out_dir, seed, threads);
        if (indexes->parsed())
            return cmd_indexes(data_path, partition_path, truth_col, scale, params);
        if (compare->parsed()) return cmd_compare(pred_path, truth_path);
        if (ensemble->parsed())
            return cmd_ensemble(edata_path, K, per_algorithm, eseed, etruth_col, escale, eout_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kValidationError;
    }
    return kValidationError;
}
