#include "clusterval/distance.hpp"

#include <cmath>
#include <stdexcept>

namespace clusterval {

DistanceMatrix euclidean_distances(const Dataset& d) {
    if (d.has_missing())
        throw std::invalid_argument("euclidean_distances: dataset has missing values");
    DistanceMatrix dm;
    dm.n = d.n;
    dm.entries.resize(d.n * (d.n - 1) / 2);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < d.n; ++i) {
        const double* xi = d.row(i);
        for (std::size_t j = i + 1; j < d.n; ++j) {
            const double* xj = d.row(j);
            double ss = 0.0;
            for (std::size_t k = 0; k < d.p; ++k) {
                const double diff = xi[k] - xj[k];
                ss += diff * diff;
            }
            dm.entries[idx++] = std::sqrt(ss);
        }
    }
    return dm;
}

DistanceMatrix distance_matrix_from_condensed(std::size_t n, std::vector<double> entries) {
    if (n < 2) throw std::invalid_argument("distance matrix requires n >= 2");
    if (entries.size() != n * (n - 1) / 2)
        throw std::invalid_argument("condensed entry count must be n(n-1)/2");
    for (double e : entries)
        if (!(e >= 0.0) || !std::isfinite(e))
            throw std::invalid_argument("distances must be finite and nonnegative");
    DistanceMatrix dm;
    dm.n = n;
    dm.entries = std::move(entries);
    return dm;
}

}  // namespace clusterval
