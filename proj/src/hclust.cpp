#include <algorithm>
#include <filesystem>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "clusterval/clusterers.hpp"

namespace clusterval {

Linkage linkage_from_name(const std::string& name) {
    if (name == "single") return Linkage::single;
    if (name == "average") return Linkage::average;
    if (name == "complete") return Linkage::complete;
    throw std::invalid_argument("unknown linkage: " + name);
}

std::string linkage_name(Linkage l) {
    switch (l) {
        case Linkage::single: return "single";
        case Linkage::average: return "average";
        case Linkage::complete: return "complete";
    }
    return "?";
}

Dendrogram hclust(const DistanceMatrix& dm, Linkage linkage) {
    const std::size_t n = dm.n;
    if (n < 2) throw std::invalid_argument("hclust: need n >= 2");

    // Working inter-cluster distances over slots 0..n-1; merged clusters stay
    // in the lower slot. node_id follows the convention that merge step t
    // creates node n+t.
    std::vector<double> work = dm.entries;
    std::vector<bool> active(n, true);
    std::vector<int> node_id(n);
    std::iota(node_id.begin(), node_id.end(), 0);
    std::vector<std::size_t> size(n, 1);

    auto wd = [&](std::size_t a, std::size_t b) -> double& {
        if (a > b) std::swap(a, b);
        return work[DistanceMatrix::condensed_index(n, a, b)];
    };

    Dendrogram out;
    out.leaf_count = n;
    out.merges.reserve(n - 1);

    for (std::size_t step = 0; step + 1 < n; ++step) {
        // Global minimum; ties resolved by the smallest (id, id) pair.
        double best = std::numeric_limits<double>::infinity();
        int best_lo = 0, best_hi = 0;
        std::size_t sa = 0, sb = 0;
        bool found = false;
        for (std::size_t a = 0; a < n; ++a) {
            if (!active[a]) continue;
            for (std::size_t b = a + 1; b < n; ++b) {
                if (!active[b]) continue;
                const double dist = wd(a, b);
                int lo = node_id[a], hi = node_id[b];
                if (lo > hi) std::swap(lo, hi);
                if (!found || dist < best ||
                    (dist == best && (lo < best_lo || (lo == best_lo && hi < best_hi)))) {
                    best = dist;
                    best_lo = lo;
                    best_hi = hi;
                    sa = a;
                    sb = b;
                    found = true;
                }
            }
        }

        out.merges.push_back({best_lo, best_hi, best});

        // Lance-Williams update into slot sa.
        const double na = static_cast<double>(size[sa]);
        const double nb = static_cast<double>(size[sb]);
        for (std::size_t c = 0; c < n; ++c) {
            if (!active[c] || c == sa || c == sb) continue;
            const double dac = wd(sa, c);
            const double dbc = wd(sb, c);
            double merged = 0.0;
            switch (linkage) {
                case Linkage::single: merged = std::min(dac, dbc); break;
                case Linkage::complete: merged = std::max(dac, dbc); break;
                case Linkage::average: merged = (na * dac + nb * dbc) / (na + nb); break;
            }
            wd(sa, c) = merged;
        }
        size[sa] += size[sb];
        active[sb] = false;
        node_id[sa] = static_cast<int>(n + step);
    }
    return out;
}

Partition cut(const Dendrogram& dg, int K) {
    const std::size_t n = dg.leaf_count;
    if (K < 1 || static_cast<std::size_t>(K) > n)
        throw std::invalid_argument("cut: K out of range");

    // Apply the first n-K merges with union-find over node ids.
    std::vector<int> parent(2 * n - 1);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    };
    const std::size_t applied = n - static_cast<std::size_t>(K);
    for (std::size_t t = 0; t < applied; ++t) {
        const auto& m = dg.merges[t];
        const int node = static_cast<int>(n + t);
        parent[find(m.left)] = node;
        parent[find(m.right)] = node;
    }

    std::vector<int> roots(n);
    for (std::size_t i = 0; i < n; ++i) roots[i] = find(static_cast<int>(i));
    return validate_partition(roots, n);
}

ClusteringResult ingest_partition(const std::string& path, std::size_t n,
                                  const std::string& method_name) {
    std::vector<std::string> lines = read_label_lines(path);
    if (lines.empty()) throw std::runtime_error(path + ": empty partition file");
    if (lines.size() == n + 1) {
        lines.erase(lines.begin());  // single-column header
    } else if (lines.size() != n) {
        throw std::runtime_error(path + ": " + std::to_string(lines.size()) +
                                 " labels for " + std::to_string(n) + " observations");
    }

    ClusteringResult out;
    out.partition = validate_partition(lines, n);
    out.method_name = method_name.empty()
                          ? "external:" + std::filesystem::path(path).stem().string()
                          : method_name;
    return out;
}

}  // namespace clusterval
