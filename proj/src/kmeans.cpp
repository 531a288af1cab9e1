#include <cmath>
#include <limits>
#include <stdexcept>

#include "clusterval/clusterers.hpp"
#include "clusterval/rng.hpp"

namespace clusterval {

namespace {

struct LloydRun {
    std::vector<int> assignment;  // 0-based
    double wcss = std::numeric_limits<double>::infinity();
};

double sq_dist(const double* a, const double* b, std::size_t p) {
    double ss = 0.0;
    for (std::size_t k = 0; k < p; ++k) {
        const double diff = a[k] - b[k];
        ss += diff * diff;
    }
    return ss;
}

// K distinct observation indices, uniform without replacement.
std::vector<std::size_t> sample_distinct(std::size_t n, std::size_t k, std::mt19937_64& rng) {
    std::vector<std::size_t> pool(n);
    for (std::size_t i = 0; i < n; ++i) pool[i] = i;
    for (std::size_t i = 0; i < k; ++i) {
        const std::size_t j = i + uniform_below(rng, n - i);
        std::swap(pool[i], pool[j]);
    }
    pool.resize(k);
    return pool;
}

LloydRun lloyd_once(const Dataset& d, std::size_t K, std::uint64_t seed) {
    const std::size_t n = d.n, p = d.p;
    std::mt19937_64 rng(seed);

    std::vector<double> centers(K * p);
    const auto init = sample_distinct(n, K, rng);
    for (std::size_t c = 0; c < K; ++c)
        for (std::size_t k = 0; k < p; ++k) centers[c * p + k] = d(init[c], k);

    std::vector<int> assignment(n, -1);
    std::vector<std::size_t> counts(K, 0);

    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        std::fill(counts.begin(), counts.end(), std::size_t{0});
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (std::size_t c = 0; c < K; ++c) {
                const double dist = sq_dist(d.row(i), &centers[c * p], p);
                if (dist < best) {
                    best = dist;
                    best_c = static_cast<int>(c);
                }
            }
            if (assignment[i] != best_c) {
                assignment[i] = best_c;
                changed = true;
            }
            ++counts[static_cast<std::size_t>(best_c)];
        }

        // Repair empty clusters: the point farthest from its center becomes a
        // singleton center. Points are never taken from singleton clusters.
        for (std::size_t c = 0; c < K; ++c) {
            while (counts[c] == 0) {
                double worst = -1.0;
                std::size_t worst_i = 0;
                for (std::size_t i = 0; i < n; ++i) {
                    const auto ci = static_cast<std::size_t>(assignment[i]);
                    if (counts[ci] <= 1) continue;
                    const double dist = sq_dist(d.row(i), &centers[ci * p], p);
                    if (dist > worst) {
                        worst = dist;
                        worst_i = i;
                    }
                }
                --counts[static_cast<std::size_t>(assignment[worst_i])];
                assignment[worst_i] = static_cast<int>(c);
                ++counts[c];
                for (std::size_t k = 0; k < p; ++k) centers[c * p + k] = d(worst_i, k);
                changed = true;
            }
        }

        if (!changed) break;

        std::fill(centers.begin(), centers.end(), 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(assignment[i]);
            for (std::size_t k = 0; k < p; ++k) centers[c * p + k] += d(i, k);
        }
        for (std::size_t c = 0; c < K; ++c)
            for (std::size_t k = 0; k < p; ++k)
                centers[c * p + k] /= static_cast<double>(counts[c]);
    }

    // WCSS against the means of the final assignment.
    std::vector<double> means(K * p, 0.0);
    std::fill(counts.begin(), counts.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
        const auto c = static_cast<std::size_t>(assignment[i]);
        ++counts[c];
        for (std::size_t k = 0; k < p; ++k) means[c * p + k] += d(i, k);
    }
    for (std::size_t c = 0; c < K; ++c)
        for (std::size_t k = 0; k < p; ++k) means[c * p + k] /= static_cast<double>(counts[c]);

    LloydRun run;
    run.assignment = std::move(assignment);
    run.wcss = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        run.wcss += sq_dist(d.row(i), &means[static_cast<std::size_t>(run.assignment[i]) * p], p);
    return run;
}

}  // namespace

ClusteringResult kmeans(const Dataset& d, int K, int restarts, std::uint64_t seed) {
    if (K < 1) throw std::invalid_argument("kmeans: K must be >= 1");
    if (static_cast<std::size_t>(K) > d.n) throw std::invalid_argument("kmeans: K > n");
    if (restarts < 1) throw std::invalid_argument("kmeans: restarts must be >= 1");
    if (d.has_missing()) throw std::invalid_argument("kmeans: dataset has missing values");

    LloydRun best;
    for (int r = 0; r < restarts; ++r) {
        LloydRun run = lloyd_once(d, static_cast<std::size_t>(K), seed + static_cast<std::uint64_t>(r));
        if (run.wcss < best.wcss) best = std::move(run);
    }

    ClusteringResult out;
    out.partition = validate_partition(best.assignment, d.n);
    out.method_name = "kmeans";
    out.objective = best.wcss;
    out.seed_used = seed;
    return out;
}

}  // namespace clusterval
