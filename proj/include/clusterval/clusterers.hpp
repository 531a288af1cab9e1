#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "clusterval/dataset.hpp"
#include "clusterval/distance.hpp"
#include "clusterval/partition.hpp"

namespace clusterval {

/// Agglomerative merge tree. Leaves are observations 0..n-1; the cluster
/// created by merge step t gets id n+t. Heights are the inter-cluster
/// distances at which merges happened.
struct Dendrogram {
    struct Merge {
        int left;       // smaller node id
        int right;      // larger node id
        double height;
    };
    std::vector<Merge> merges;  // n-1 steps
    std::size_t leaf_count = 0;
};

enum class Linkage { single, average, complete };

Linkage linkage_from_name(const std::string& name);
std::string linkage_name(Linkage l);

struct ClusteringResult {
    Partition partition;
    std::string method_name;
    std::optional<double> objective;  // k-means WCSS or PAM total distance
    std::uint64_t seed_used = 0;
};

/// Lloyd k-means, best of `restarts` runs by within-cluster sum of squared
/// distances to the cluster means. Restart r is seeded with seed+r; ties on
/// the objective go to the lowest restart index. Each run initializes centers
/// at K distinct random observations, stops when assignments are unchanged or
/// after 100 iterations, and repairs an empty cluster by making the point
/// farthest from its center a singleton center.
ClusteringResult kmeans(const Dataset& d, int K, int restarts, std::uint64_t seed);

/// Partitioning around medoids on unsquared distances: classic BUILD followed
/// by SWAP steps until no swap lowers the total distance to medoids. Fully
/// deterministic; ties are broken by the lowest observation index, so the
/// seed is only recorded.
ClusteringResult pam(const DistanceMatrix& dm, int K, std::uint64_t seed);

/// Agglomerative clustering with Lance-Williams updates. Ties on the merge
/// distance are broken by the lexicographically smallest pair of node ids.
Dendrogram hclust(const DistanceMatrix& dm, Linkage linkage);

/// Partition into K groups by undoing the last K-1 merges.
Partition cut(const Dendrogram& dg, int K);

/// Read an externally produced partition (one label per line; a single
/// header line is skipped when the file has n+1 lines). The method name
/// defaults to external:<file stem>.
ClusteringResult ingest_partition(const std::string& path, std::size_t n,
                                  const std::string& method_name = "");

}  // namespace clusterval
