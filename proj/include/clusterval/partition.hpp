#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace clusterval {

/// Crisp assignment of n observations to clusters 1..K. Every cluster is
/// nonempty and the labels cover all observations.
struct Partition {
    std::vector<int> labels;        // length n, values in 1..K
    int K = 0;
    std::vector<std::size_t> sizes; // length K, sizes[k-1] = |cluster k|

    std::size_t n() const { return labels.size(); }

    /// Observation indices grouped by cluster, members in ascending order.
    std::vector<std::vector<std::size_t>> clusters() const;
};

/// Relabel raw labels to contiguous 1..K in order of first appearance and
/// compute cluster sizes. Throws std::invalid_argument on an empty vector or
/// when the length differs from `n`.
Partition validate_partition(const std::vector<long long>& raw, std::size_t n);
Partition validate_partition(const std::vector<std::string>& raw, std::size_t n);
Partition validate_partition(const std::vector<int>& raw, std::size_t n);

/// Read one label per line; an optional single-column header is handled by
/// ingest_partition, which knows the expected length.
std::vector<std::string> read_label_lines(const std::string& path);

}  // namespace clusterval
