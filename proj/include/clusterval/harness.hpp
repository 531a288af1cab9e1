#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clusterval/calibration.hpp"
#include "clusterval/clusterers.hpp"
#include "clusterval/dataset.hpp"
#include "clusterval/internal.hpp"

namespace clusterval {

struct DatasetSpec {
    std::string id;
    std::string path;
    std::optional<std::string> truth_column;
    bool zscore = true;  // "scale": zscore | none
    std::optional<int> K;
    std::vector<std::pair<std::string, std::string>> external_partitions;  // name -> path
};

struct BenchmarkConfig {
    std::vector<DatasetSpec> datasets;
    std::vector<std::string> methods;  // kmeans, pam, single, average, complete
    int kmeans_restarts = 10;
    int ensemble_per_algorithm = 50;
    std::optional<std::uint64_t> ensemble_seed;  // defaults to master_seed
    IndexParams index_params;
    std::string output_dir;
    std::uint64_t master_seed = 0;
    int threads = 1;  // 0 = hardware concurrency
};

/// Parse and validate a JSON config file; unknown keys are rejected.
BenchmarkConfig load_config(const std::string& path);
BenchmarkConfig parse_config(const std::string& json_text, const std::string& origin);

/// One row of results: a method's (or the truth's) raw index values on one
/// dataset, their calibrated counterparts, and the external indexes against
/// the truth when available.
struct IndexReport {
    std::string dataset_id;
    std::string method;
    InternalIndexVector raw;
    std::map<std::string, double> calibrated;  // by index name; absent = missing
    std::optional<double> dmode;
    std::optional<double> ari;
    std::optional<double> vi;
    std::optional<double> neg_vi;
    std::optional<double> bcubed_p;
    std::optional<double> bcubed_r;
    std::optional<double> bcubed_f;
    std::optional<double> objective;
    std::uint64_t seed_used = 0;
    double seconds = 0.0;  // console diagnostics only; never written to report files
};

struct PoolStats {
    double mean = 0.0;
    double sd = 0.0;
    std::size_t count = 0;  // pooled values that were available
    Orientation orientation = Orientation::larger_better;
};

struct DatasetRun {
    std::string id;
    std::size_t n = 0, p = 0;
    int K = 0;
    bool truth_present = false;
    std::uint64_t seed = 0;
    std::size_t pool_size = 0;  // m + q
    std::vector<std::string> preprocessing;
    std::map<std::string, PoolStats> pool_stats;  // by index name
    std::vector<IndexReport> rows;                // methods in config order, then "truth"
};

struct MethodSummary {
    std::string method;
    std::map<std::string, double> mean_calibrated;  // by index name (incl. "dmode")
    std::map<std::string, int> count;               // datasets contributing per index
};

struct PcaMap {
    std::vector<std::string> methods;
    std::vector<std::string> indexes;               // columns used
    std::vector<std::array<double, 2>> coords;      // per method; [1] is 0 for rank-1 input
    std::vector<double> explained;                  // variance fractions, one per component kept
    std::vector<std::array<double, 2>> loadings;    // per index
    std::string note;                               // e.g. rank deficiency
};

struct BenchmarkOutcome {
    std::vector<DatasetRun> runs;
    std::vector<MethodSummary> summaries;
    std::optional<PcaMap> pca;
    std::vector<std::pair<std::string, std::string>> dataset_errors;  // id -> message
};

/// Run the full pipeline: per dataset load/impute/scale, distances, methods,
/// random ensemble, raw indexes for every clustering, calibration of the
/// method rows (plus the truth row) against the pooled values, and external
/// indexes against the truth. Dataset failures are isolated and reported.
BenchmarkOutcome run_benchmark(const BenchmarkConfig& cfg);

/// Calibrated index report for the ground truth of one dataset, standardized
/// against the same pool as the method rows (the truth itself is not pooled).
/// Returns the row labeled "truth".
IndexReport calibrate_reference(const DatasetRun& run, const Dataset& dataset,
                                const DistanceMatrix& dm, const Partition& truth,
                                const IndexParams& params);

/// Per-method means of calibrated values over datasets, missing-aware.
std::vector<MethodSummary> summarize(const std::vector<DatasetRun>& runs);

/// Principal component map of the methods from the summary matrix (the
/// aggregate index columns; see `kPcaIndexNames`). Columns with missing
/// means are dropped; requires >= 2 methods and >= 2 complete columns.
PcaMap pca_method_map(const std::vector<MethodSummary>& summaries);

inline constexpr std::array<std::string_view, 11> kPcaIndexNames = {
    "avewithin", "maxdiameter", "widestgap", "sindex", "pearsongamma", "dmode",
    "denscut",   "entropy",     "kdnorm",    "cvnnd",  "asw"};

/// Write the report files: per-dataset wide CSVs, the structured JSON report
/// (config echo, seeds, pool statistics, full precision values), the
/// parallel-coordinates long CSV, and the PCA map CSVs. Deterministic bytes
/// for fixed config and seed.
void emit_reports(const BenchmarkOutcome& outcome, const BenchmarkConfig& cfg,
                  const std::string& output_dir);

}  // namespace clusterval
