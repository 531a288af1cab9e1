#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "clusterval/distance.hpp"
#include "clusterval/partition.hpp"

namespace clusterval {

/// Random-clustering ensemble: per_algorithm replicates from each of the four
/// generators, m = 4 * per_algorithm partitions in total.
struct EnsembleSpec {
    int per_algorithm = 50;
    int K = 0;
    std::uint64_t master_seed = 0;
};

enum class Orientation { larger_better, smaller_better };

/// Fixed quality direction of each internal index, used to orient values
/// before standardization so that larger calibrated values are always better.
Orientation index_orientation(std::string_view index_name);

struct CalibratedIndex {
    double raw = 0.0;         // original, unoriented value
    double calibrated = 0.0;  // (oriented - pool_mean) / pool_sd
    double pool_mean = 0.0;   // mean of the oriented pooled values
    double pool_sd = 0.0;
    Orientation orientation = Orientation::larger_better;
};

/// K sampled observations become centroids; everything joins its nearest
/// centroid (ties to the lowest centroid index). Centroids anchor their own
/// clusters, so all K clusters are nonempty.
Partition rand_kcentroids(const DistanceMatrix& dm, int K, std::uint64_t seed);

/// K random seed points start clusters; repeatedly the unclustered point with
/// the smallest distance to any clustered point joins that point's cluster.
Partition rand_nearest_neighbour(const DistanceMatrix& dm, int K, std::uint64_t seed);

/// As above, but a point's score against a cluster is its largest distance to
/// the cluster's members; the point with the smallest best score joins the
/// cluster achieving it.
Partition rand_farthest_neighbour(const DistanceMatrix& dm, int K, std::uint64_t seed);

/// As above with the mean distance to the cluster's members as the score.
Partition rand_average_distances(const DistanceMatrix& dm, int K, std::uint64_t seed);

inline constexpr std::array<std::string_view, 4> kEnsembleAlgorithmNames = {
    "kcentroids", "nearest", "farthest", "average"};

/// All ensemble partitions in fixed order (algorithm-major, replicate-minor).
/// Replicate i of algorithm a is seeded with derive_seed(master_seed, a, i).
std::vector<Partition> generate_ensemble(const DistanceMatrix& dm, const EnsembleSpec& spec);

/// Standardize method index values against the pooled method + ensemble
/// values: orient (negate when smaller is better), then z-score with the
/// pooled mean and sd (denominator m+q-1). Throws when the pooled sd is zero.
std::vector<CalibratedIndex> calibrate(std::span<const double> method_values,
                                       std::span<const double> ensemble_values,
                                       Orientation orientation);

/// Weighted aggregate of the two calibrated density-mode sub-indexes.
double dmode_aggregate(double densdec_star, double highdgap_star);

}  // namespace clusterval
