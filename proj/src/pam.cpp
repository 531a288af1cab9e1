#include <limits>
#include <stdexcept>

#include "clusterval/clusterers.hpp"

namespace clusterval {

namespace {

// Total distance from every observation to its nearest medoid.
double total_cost(const DistanceMatrix& dm, const std::vector<std::size_t>& medoids) {
    double total = 0.0;
    for (std::size_t i = 0; i < dm.n; ++i) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t m : medoids) best = std::min(best, dm(i, m));
        total += best;
    }
    return total;
}

}  // namespace

ClusteringResult pam(const DistanceMatrix& dm, int K, std::uint64_t seed) {
    const std::size_t n = dm.n;
    if (K < 1) throw std::invalid_argument("pam: K must be >= 1");
    if (static_cast<std::size_t>(K) > n) throw std::invalid_argument("pam: K > n");
    const auto k = static_cast<std::size_t>(K);

    std::vector<bool> is_medoid(n, false);
    std::vector<std::size_t> medoids;
    medoids.reserve(k);

    // BUILD: start with the observation of minimum total distance, then add
    // the candidate with the largest cost reduction. Ties take the lowest index.
    {
        double best = std::numeric_limits<double>::infinity();
        std::size_t best_i = 0;
        for (std::size_t i = 0; i < n; ++i) {
            double sum = 0.0;
            for (std::size_t j = 0; j < n; ++j) sum += dm(i, j);
            if (sum < best) {
                best = sum;
                best_i = i;
            }
        }
        medoids.push_back(best_i);
        is_medoid[best_i] = true;
    }

    std::vector<double> nearest(n);  // distance to nearest chosen medoid
    for (std::size_t i = 0; i < n; ++i) nearest[i] = dm(i, medoids[0]);

    while (medoids.size() < k) {
        double best_gain = -std::numeric_limits<double>::infinity();
        std::size_t best_c = 0;
        for (std::size_t c = 0; c < n; ++c) {
            if (is_medoid[c]) continue;
            double gain = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double delta = nearest[j] - dm(j, c);
                if (delta > 0.0) gain += delta;
            }
            if (gain > best_gain) {
                best_gain = gain;
                best_c = c;
            }
        }
        medoids.push_back(best_c);
        is_medoid[best_c] = true;
        for (std::size_t j = 0; j < n; ++j) nearest[j] = std::min(nearest[j], dm(j, best_c));
    }

    // SWAP: accept the best strictly improving (medoid, candidate) exchange
    // until none remains.
    double cost = total_cost(dm, medoids);
    for (;;) {
        double best_cost = cost;
        std::size_t best_m = 0, best_h = 0;
        bool found = false;
        for (std::size_t mi = 0; mi < medoids.size(); ++mi) {
            for (std::size_t h = 0; h < n; ++h) {
                if (is_medoid[h]) continue;
                const std::size_t saved = medoids[mi];
                medoids[mi] = h;
                const double c2 = total_cost(dm, medoids);
                medoids[mi] = saved;
                if (c2 < best_cost) {
                    best_cost = c2;
                    best_m = mi;
                    best_h = h;
                    found = true;
                }
            }
        }
        if (!found) break;
        is_medoid[medoids[best_m]] = false;
        is_medoid[best_h] = true;
        medoids[best_m] = best_h;
        cost = best_cost;
    }

    // Medoids anchor their own clusters so duplicate points can never leave
    // one of the K clusters empty.
    std::vector<int> assignment(n, -1);
    for (std::size_t mi = 0; mi < medoids.size(); ++mi)
        assignment[medoids[mi]] = static_cast<int>(mi);
    for (std::size_t i = 0; i < n; ++i) {
        if (assignment[i] >= 0) continue;
        double best = std::numeric_limits<double>::infinity();
        int best_m = 0;
        for (std::size_t mi = 0; mi < medoids.size(); ++mi) {
            const double dist = dm(i, medoids[mi]);
            if (dist < best) {
                best = dist;
                best_m = static_cast<int>(mi);
            }
        }
        assignment[i] = best_m;
    }

    ClusteringResult out;
    out.partition = validate_partition(assignment, n);
    out.method_name = "pam";
    out.objective = cost;
    out.seed_used = seed;
    return out;
}

}  // namespace clusterval
