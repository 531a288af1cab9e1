#include "clusterval/calibration.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "clusterval/rng.hpp"

namespace clusterval {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

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

void check_k(const DistanceMatrix& dm, int K) {
    if (K < 1) throw std::invalid_argument("random clustering: K must be >= 1");
    if (static_cast<std::size_t>(K) > dm.n) throw std::invalid_argument("random clustering: K > n");
}

// Shared driver for the three sequential generators. `score` maps the
// per-cluster aggregate (max or sum of distances) to the attachment score.
enum class Aggregate { nearest, farthest, average };

Partition sequential_random(const DistanceMatrix& dm, int K, std::uint64_t seed, Aggregate kind) {
    check_k(dm, K);
    const std::size_t n = dm.n;
    const auto k = static_cast<std::size_t>(K);
    std::mt19937_64 rng(seed);

    std::vector<int> label(n, 0);  // 0 = unclustered
    std::vector<std::size_t> csize(k, 0);
    const auto seeds = sample_distinct(n, k, rng);
    for (std::size_t c = 0; c < k; ++c) {
        label[seeds[c]] = static_cast<int>(c) + 1;
        csize[c] = 1;
    }
    std::size_t unclustered = n - k;

    if (kind == Aggregate::nearest) {
        // nearest clustered point per unclustered observation
        std::vector<double> best_d(n, kInf);
        std::vector<std::size_t> best_y(n, 0);
        for (std::size_t i = 0; i < n; ++i) {
            if (label[i]) continue;
            for (std::size_t c = 0; c < k; ++c) {
                const double d = dm(i, seeds[c]);
                if (d < best_d[i] || (d == best_d[i] && seeds[c] < best_y[i])) {
                    best_d[i] = d;
                    best_y[i] = seeds[c];
                }
            }
        }
        while (unclustered > 0) {
            std::size_t pick = n;
            for (std::size_t i = 0; i < n; ++i) {
                if (label[i]) continue;
                if (pick == n || best_d[i] < best_d[pick]) pick = i;
            }
            label[pick] = label[best_y[pick]];
            ++csize[static_cast<std::size_t>(label[pick]) - 1];
            --unclustered;
            for (std::size_t i = 0; i < n; ++i) {
                if (label[i]) continue;
                const double d = dm(i, pick);
                if (d < best_d[i] || (d == best_d[i] && pick < best_y[i])) {
                    best_d[i] = d;
                    best_y[i] = pick;
                }
            }
        }
    } else {
        // per (observation, cluster) aggregate: max for farthest, sum for average
        std::vector<double> agg(n * k, 0.0);
        for (std::size_t i = 0; i < n; ++i) {
            if (label[i]) continue;
            for (std::size_t c = 0; c < k; ++c) {
                const double d = dm(i, seeds[c]);
                agg[i * k + c] = d;  // single member: max == sum
            }
        }
        auto score = [&](std::size_t i, std::size_t c) {
            return kind == Aggregate::farthest ? agg[i * k + c]
                                               : agg[i * k + c] / static_cast<double>(csize[c]);
        };
        while (unclustered > 0) {
            std::size_t pick = n;
            std::size_t pick_c = 0;
            double pick_score = kInf;
            for (std::size_t i = 0; i < n; ++i) {
                if (label[i]) continue;
                double best_s = kInf;
                std::size_t best_c = 0;
                for (std::size_t c = 0; c < k; ++c) {
                    const double s = score(i, c);
                    if (s < best_s) {
                        best_s = s;
                        best_c = c;
                    }
                }
                if (pick == n || best_s < pick_score) {
                    pick = i;
                    pick_c = best_c;
                    pick_score = best_s;
                }
            }
            label[pick] = static_cast<int>(pick_c) + 1;
            ++csize[pick_c];
            --unclustered;
            for (std::size_t i = 0; i < n; ++i) {
                if (label[i]) continue;
                const double d = dm(i, pick);
                if (kind == Aggregate::farthest)
                    agg[i * k + pick_c] = std::max(agg[i * k + pick_c], d);
                else
                    agg[i * k + pick_c] += d;
            }
        }
    }

    Partition p;
    p.labels = std::move(label);
    p.K = K;
    p.sizes = std::move(csize);
    return p;
}

}  // namespace

Orientation index_orientation(std::string_view index_name) {
    if (index_name == "sindex" || index_name == "min_separation" ||
        index_name == "pearsongamma" || index_name == "entropy" || index_name == "asw")
        return Orientation::larger_better;
    if (index_name == "avewithin" || index_name == "maxdiameter" || index_name == "widestgap" ||
        index_name == "densdec" || index_name == "highdgap" || index_name == "denscut" ||
        index_name == "kdnorm" || index_name == "cvnnd" || index_name == "wcss_centroid" ||
        index_name == "sumdist_medoid")
        return Orientation::smaller_better;
    throw std::invalid_argument("unknown index name: " + std::string(index_name));
}

Partition rand_kcentroids(const DistanceMatrix& dm, int K, std::uint64_t seed) {
    check_k(dm, K);
    const std::size_t n = dm.n;
    const auto k = static_cast<std::size_t>(K);
    std::mt19937_64 rng(seed);
    const auto centroids = sample_distinct(n, k, rng);

    std::vector<int> label(n, 0);
    for (std::size_t c = 0; c < k; ++c) label[centroids[c]] = static_cast<int>(c) + 1;
    for (std::size_t i = 0; i < n; ++i) {
        if (label[i]) continue;
        double best = kInf;
        std::size_t best_c = 0;
        for (std::size_t c = 0; c < k; ++c) {
            const double d = dm(i, centroids[c]);
            if (d < best) {
                best = d;
                best_c = c;
            }
        }
        label[i] = static_cast<int>(best_c) + 1;
    }

    Partition p;
    p.labels = std::move(label);
    p.K = K;
    p.sizes.assign(k, 0);
    for (int l : p.labels) ++p.sizes[static_cast<std::size_t>(l) - 1];
    return p;
}

Partition rand_nearest_neighbour(const DistanceMatrix& dm, int K, std::uint64_t seed) {
    return sequential_random(dm, K, seed, Aggregate::nearest);
}

Partition rand_farthest_neighbour(const DistanceMatrix& dm, int K, std::uint64_t seed) {
    return sequential_random(dm, K, seed, Aggregate::farthest);
}

Partition rand_average_distances(const DistanceMatrix& dm, int K, std::uint64_t seed) {
    return sequential_random(dm, K, seed, Aggregate::average);
}

std::vector<Partition> generate_ensemble(const DistanceMatrix& dm, const EnsembleSpec& spec) {
    if (spec.per_algorithm < 1)
        throw std::invalid_argument("ensemble: per_algorithm must be >= 1");
    check_k(dm, spec.K);

    using Generator = Partition (*)(const DistanceMatrix&, int, std::uint64_t);
    constexpr std::array<Generator, 4> generators = {
        rand_kcentroids, rand_nearest_neighbour, rand_farthest_neighbour, rand_average_distances};

    std::vector<Partition> out;
    out.reserve(4 * static_cast<std::size_t>(spec.per_algorithm));
    for (std::size_t a = 0; a < generators.size(); ++a)
        for (int i = 0; i < spec.per_algorithm; ++i)
            out.push_back(generators[a](dm, spec.K,
                                        derive_seed(spec.master_seed, a,
                                                    static_cast<std::uint64_t>(i))));
    return out;
}

std::vector<CalibratedIndex> calibrate(std::span<const double> method_values,
                                       std::span<const double> ensemble_values,
                                       Orientation orientation) {
    const std::size_t total = method_values.size() + ensemble_values.size();
    if (total < 2) throw std::invalid_argument("calibrate: need at least two pooled values");

    const double sign = orientation == Orientation::smaller_better ? -1.0 : 1.0;
    double mean = 0.0;
    for (double v : method_values) mean += sign * v;
    for (double v : ensemble_values) mean += sign * v;
    mean /= static_cast<double>(total);

    double ss = 0.0;
    for (double v : method_values) ss += (sign * v - mean) * (sign * v - mean);
    for (double v : ensemble_values) ss += (sign * v - mean) * (sign * v - mean);
    const double sd = std::sqrt(ss / static_cast<double>(total - 1));
    if (sd <= 0.0)
        throw std::invalid_argument("calibrate: pooled values are constant, index uncalibratable");

    std::vector<CalibratedIndex> out;
    out.reserve(method_values.size());
    for (double v : method_values)
        out.push_back({v, (sign * v - mean) / sd, mean, sd, orientation});
    return out;
}

double dmode_aggregate(double densdec_star, double highdgap_star) {
    return 0.75 * densdec_star + 0.25 * highdgap_star;
}

}  // namespace clusterval
