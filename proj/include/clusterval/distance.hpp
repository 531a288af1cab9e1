#pragma once

#include <cstddef>
#include <vector>

#include "clusterval/dataset.hpp"

namespace clusterval {

/// Condensed symmetric Euclidean distance matrix: the n(n-1)/2 entries for
/// i<j stored row-major, d(i,i) = 0 implicitly.
struct DistanceMatrix {
    std::size_t n = 0;
    std::vector<double> entries;

    static std::size_t condensed_index(std::size_t n, std::size_t i, std::size_t j) {
        // requires i < j
        return i * (2 * n - i - 1) / 2 + (j - i - 1);
    }

    double operator()(std::size_t i, std::size_t j) const {
        if (i == j) return 0.0;
        if (i > j) std::swap(i, j);
        return entries[condensed_index(n, i, j)];
    }
};

/// Pairwise Euclidean distances; the dataset must be fully imputed.
DistanceMatrix euclidean_distances(const Dataset& d);

/// Distance matrix from an explicit condensed entry vector (entry count must
/// be n(n-1)/2, all entries finite and >= 0).
DistanceMatrix distance_matrix_from_condensed(std::size_t n, std::vector<double> entries);

}  // namespace clusterval
