#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <stdexcept>
#include <thread>

#include "clusterval/external.hpp"
#include "clusterval/harness.hpp"
#include "clusterval/rng.hpp"

namespace clusterval {

namespace {

// stream ids for per-dataset seed derivation
constexpr std::uint64_t kStreamDataset = 1;
constexpr std::uint64_t kStreamMethods = 2;
constexpr std::uint64_t kStreamEnsemble = 3;

/// Run `fn(i)` for i in [0,count) on `threads` workers. Results must go into
/// pre-sized slots so the outcome is independent of scheduling.
void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads == 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const auto nworkers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::exception_ptr> errors(count);
    for (std::size_t w = 0; w < nworkers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    errors[i] = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);  // lowest index first
}

void attach_external(IndexReport& row, const Partition& truth, const Partition& pred) {
    const ContingencyTable t = contingency(truth, pred);
    row.ari = ari(t);
    row.vi = vi(t);
    row.neg_vi = -*row.vi;
    const BCubedResult b = bcubed(t);
    row.bcubed_p = b.precision;
    row.bcubed_r = b.recall;
    row.bcubed_f = b.f;
}

// Calibrate one row (shared by method rows and the truth row).
void calibrate_row(IndexReport& row, const std::map<std::string, PoolStats>& pool_stats) {
    for (const auto name : kInternalIndexNames) {
        const auto raw = row.raw.get(name);
        if (!raw) continue;
        const auto it = pool_stats.find(std::string(name));
        if (it == pool_stats.end()) continue;  // uncalibratable for this dataset
        const double sign = it->second.orientation == Orientation::smaller_better ? -1.0 : 1.0;
        row.calibrated[std::string(name)] = (sign * *raw - it->second.mean) / it->second.sd;
    }
    const auto dd = row.calibrated.find("densdec");
    const auto hg = row.calibrated.find("highdgap");
    if (dd != row.calibrated.end() && hg != row.calibrated.end())
        row.dmode = dmode_aggregate(dd->second, hg->second);
}

DatasetRun run_one_dataset(const BenchmarkConfig& cfg, const DatasetSpec& spec,
                           std::size_t dataset_index) {
    DatasetRun run;
    run.id = spec.id;
    run.seed = derive_seed(cfg.master_seed, kStreamDataset, dataset_index);

    Dataset data = load_csv(spec.path, spec.truth_column);
    if (data.has_missing()) data = impute_mean(data);
    if (spec.zscore) data = scale_zscore(data);
    run.n = data.n;
    run.p = data.p;
    run.preprocessing = data.preprocessing;
    run.truth_present = data.truth.has_value();

    if (spec.K)
        run.K = *spec.K;
    else if (data.truth)
        run.K = data.truth->K;
    else
        throw std::runtime_error(spec.id + ": no K configured and no truth column to take it from");
    if (run.K < 1 || static_cast<std::size_t>(run.K) > data.n)
        throw std::runtime_error(spec.id + ": K=" + std::to_string(run.K) + " out of range");

    const DistanceMatrix dm = euclidean_distances(data);

    // q method clusterings, in config order, then externals
    std::vector<ClusteringResult> methods;
    for (std::size_t mi = 0; mi < cfg.methods.size(); ++mi) {
        const std::string& name = cfg.methods[mi];
        const std::uint64_t seed = derive_seed(run.seed, kStreamMethods, mi);
        const auto t0 = std::chrono::steady_clock::now();
        ClusteringResult r;
        if (name == "kmeans") {
            r = kmeans(data, run.K, cfg.kmeans_restarts, seed);
        } else if (name == "pam") {
            r = pam(dm, run.K, seed);
        } else {
            const Dendrogram dg = hclust(dm, linkage_from_name(name));
            r.partition = cut(dg, run.K);
            r.method_name = name;
            r.seed_used = seed;
        }
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        std::cerr << "[" << run.id << "] " << name << ": K=" << r.partition.K << " ("
                  << dt.count() << "s)\n";
        methods.push_back(std::move(r));
    }
    for (const auto& [name, path] : spec.external_partitions)
        methods.push_back(ingest_partition(path, data.n, "external:" + name));

    const EnsembleSpec espec{cfg.ensemble_per_algorithm, run.K,
                             derive_seed(cfg.ensemble_seed.value_or(cfg.master_seed),
                                         kStreamEnsemble, dataset_index)};
    const std::vector<Partition> ensemble = generate_ensemble(dm, espec);

    const std::size_t q = methods.size();
    const std::size_t pool_size = q + ensemble.size();
    run.pool_size = pool_size;

    // raw indexes for every clustering in the pool; the kernel density only
    // depends on the distances, so it is computed once and shared
    std::optional<KernelDensity> kd;
    try {
        kd = kernel_density(dm, cfg.index_params.kernel_p);
    } catch (const std::exception& e) {
        std::cerr << "[" << run.id << "] " << e.what() << "\n";
    }
    std::vector<InternalIndexVector> raws(pool_size);
    const auto t0 = std::chrono::steady_clock::now();
    parallel_for(pool_size, cfg.threads, [&](std::size_t i) {
        const Partition& part = i < q ? methods[i].partition : ensemble[i - q];
        raws[i] = kd ? all_internal(data, dm, part, cfg.index_params, *kd)
                     : all_internal(data, dm, part, cfg.index_params);
    });
    const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
    std::cerr << "[" << run.id << "] indexes for " << pool_size << " clusterings ("
              << dt.count() << "s)\n";

    // pooled mean/sd per index over the oriented available values
    for (const auto name : kInternalIndexNames) {
        std::vector<double> values;
        values.reserve(pool_size);
        for (const auto& r : raws)
            if (const auto v = r.get(name)) values.push_back(*v);
        if (values.size() < 2) continue;
        const Orientation orient = index_orientation(name);
        const double sign = orient == Orientation::smaller_better ? -1.0 : 1.0;
        double mean = 0.0;
        for (double v : values) mean += sign * v;
        mean /= static_cast<double>(values.size());
        double ss = 0.0;
        for (double v : values) ss += (sign * v - mean) * (sign * v - mean);
        const double sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
        if (sd <= 0.0) continue;
        run.pool_stats[std::string(name)] = {mean, sd, values.size(), orient};
    }

    for (std::size_t mi = 0; mi < q; ++mi) {
        IndexReport row;
        row.dataset_id = run.id;
        row.method = methods[mi].method_name;
        row.raw = raws[mi];
        row.objective = methods[mi].objective;
        row.seed_used = methods[mi].seed_used;
        calibrate_row(row, run.pool_stats);
        if (data.truth) attach_external(row, *data.truth, methods[mi].partition);
        run.rows.push_back(std::move(row));
    }

    if (data.truth)
        run.rows.push_back(
            calibrate_reference(run, data, dm, *data.truth, cfg.index_params));
    else
        std::cerr << "[" << run.id
                  << "] no truth labels: external indexes and the truth row are skipped\n";

    return run;
}

}  // namespace

IndexReport calibrate_reference(const DatasetRun& run, const Dataset& dataset,
                                const DistanceMatrix& dm, const Partition& truth,
                                const IndexParams& params) {
    IndexReport row;
    row.dataset_id = run.id;
    row.method = "truth";
    row.raw = all_internal(dataset, dm, truth, params);
    calibrate_row(row, run.pool_stats);
    attach_external(row, truth, truth);
    return row;
}

BenchmarkOutcome run_benchmark(const BenchmarkConfig& cfg) {
    BenchmarkOutcome outcome;
    for (std::size_t di = 0; di < cfg.datasets.size(); ++di) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            outcome.runs.push_back(run_one_dataset(cfg, cfg.datasets[di], di));
        } catch (const std::exception& e) {
            std::cerr << "[" << cfg.datasets[di].id << "] FAILED: " << e.what() << "\n";
            outcome.dataset_errors.emplace_back(cfg.datasets[di].id, e.what());
            continue;
        }
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - t0;
        auto& run = outcome.runs.back();
        for (auto& row : run.rows) row.seconds = dt.count() / static_cast<double>(run.rows.size());
        std::cerr << "[" << run.id << "] done (" << dt.count() << "s)\n";
    }
    outcome.summaries = summarize(outcome.runs);
    if (outcome.summaries.size() >= 2) {
        try {
            outcome.pca = pca_method_map(outcome.summaries);
        } catch (const std::exception& e) {
            std::cerr << "PCA map skipped: " << e.what() << "\n";
        }
    }
    return outcome;
}

std::vector<MethodSummary> summarize(const std::vector<DatasetRun>& runs) {
    // method order: first appearance over runs (config order), truth last
    std::vector<std::string> order;
    auto seen = [&order](const std::string& m) {
        for (const auto& o : order)
            if (o == m) return true;
        return false;
    };
    for (const auto& run : runs)
        for (const auto& row : run.rows)
            if (row.method != "truth" && !seen(row.method)) order.push_back(row.method);
    for (const auto& run : runs)
        for (const auto& row : run.rows)
            if (row.method == "truth" && !seen(row.method)) order.push_back(row.method);

    std::vector<MethodSummary> out;
    for (const auto& m : order) {
        MethodSummary s;
        s.method = m;
        std::map<std::string, double> sums;
        for (const auto& run : runs)
            for (const auto& row : run.rows) {
                if (row.method != m) continue;
                for (const auto& [name, value] : row.calibrated) {
                    sums[name] += value;
                    ++s.count[name];
                }
                if (row.dmode) {
                    sums["dmode"] += *row.dmode;
                    ++s.count["dmode"];
                }
            }
        for (const auto& [name, sum] : sums)
            s.mean_calibrated[name] = sum / static_cast<double>(s.count[name]);
        out.push_back(std::move(s));
    }
    return out;
}

}  // namespace clusterval
