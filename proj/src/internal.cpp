#include "clusterval/internal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "clusterval/math.hpp"

namespace clusterval {

namespace {

void check_sizes(const DistanceMatrix& dm, const Partition& c) {
    if (dm.n != c.n())
        throw std::invalid_argument("distance matrix and partition disagree on n");
}

constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace

double avewithin(const DistanceMatrix& dm, const Partition& c) {
    check_sizes(dm, c);
    const auto groups = c.clusters();
    double total = 0.0;
    for (const auto& g : groups) {
        if (g.size() < 2) continue;
        double sum = 0.0;
        for (std::size_t a = 0; a < g.size(); ++a)
            for (std::size_t b = a + 1; b < g.size(); ++b) sum += dm(g[a], g[b]);
        // each unordered pair counts twice in the double sum over x_i != x_j
        total += 2.0 * sum / static_cast<double>(g.size() - 1);
    }
    return total / static_cast<double>(c.n());
}

double maxdiameter(const DistanceMatrix& dm, const Partition& c) {
    check_sizes(dm, c);
    double best = 0.0;
    for (const auto& g : c.clusters())
        for (std::size_t a = 0; a < g.size(); ++a)
            for (std::size_t b = a + 1; b < g.size(); ++b) best = std::max(best, dm(g[a], g[b]));
    return best;
}

double widestgap(const DistanceMatrix& dm, const Partition& c) {
    check_sizes(dm, c);
    // Prim MST per cluster; the widest gap of a cluster is its largest MST
    // edge (bottleneck duality over all two-way splits).
    double widest = 0.0;
    for (const auto& g : c.clusters()) {
        if (g.size() < 2) continue;
        std::vector<double> mindist(g.size(), kInf);
        std::vector<bool> in_tree(g.size(), false);
        mindist[0] = 0.0;
        for (std::size_t step = 0; step < g.size(); ++step) {
            std::size_t u = 0;
            double best = kInf;
            for (std::size_t i = 0; i < g.size(); ++i)
                if (!in_tree[i] && mindist[i] < best) {
                    best = mindist[i];
                    u = i;
                }
            in_tree[u] = true;
            if (step > 0) widest = std::max(widest, best);
            for (std::size_t i = 0; i < g.size(); ++i)
                if (!in_tree[i]) mindist[i] = std::min(mindist[i], dm(g[u], g[i]));
        }
    }
    return widest;
}

SeparationResult separation_index(const DistanceMatrix& dm, const Partition& c, double p) {
    check_sizes(dm, c);
    if (c.K < 2) throw std::invalid_argument("separation_index: needs K >= 2");
    if (p < 0.0 || p > 1.0) throw std::invalid_argument("separation_index: p in [0,1]");

    std::vector<double> border(c.n(), kInf);  // distance to nearest foreign point
    for (std::size_t i = 0; i < c.n(); ++i)
        for (std::size_t j = i + 1; j < c.n(); ++j) {
            if (c.labels[i] == c.labels[j]) continue;
            const double dist = dm(i, j);
            border[i] = std::min(border[i], dist);
            border[j] = std::min(border[j], dist);
        }

    const auto groups = c.clusters();
    double sum = 0.0;
    std::size_t count = 0;
    double min_sep = kInf;
    for (const auto& g : groups) {
        std::vector<double> vals;
        vals.reserve(g.size());
        for (std::size_t i : g) vals.push_back(border[i]);
        std::sort(vals.begin(), vals.end());
        const auto m = std::max<std::size_t>(
            1, static_cast<std::size_t>(p * static_cast<double>(g.size())));
        for (std::size_t i = 0; i < m; ++i) sum += vals[i];
        count += m;
        min_sep = std::min(min_sep, vals.front());
    }
    return {sum / static_cast<double>(count), min_sep};
}

double pearson_gamma(const DistanceMatrix& dm, const Partition& c) {
    check_sizes(dm, c);
    if (c.K < 2) throw std::invalid_argument("pearson_gamma: indicator vector is constant for K=1");

    const std::size_t n = c.n();
    const std::size_t total = dm.entries.size();
    double dmean = 0.0;
    std::size_t between = 0;
    {
        std::size_t idx = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j, ++idx) {
                dmean += dm.entries[idx];
                if (c.labels[i] != c.labels[j]) ++between;
            }
    }
    dmean /= static_cast<double>(total);
    const double cmean = static_cast<double>(between) / static_cast<double>(total);

    double sdd = 0.0, scc = 0.0, sdc = 0.0;
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++idx) {
            const double dd = dm.entries[idx] - dmean;
            const double cc = (c.labels[i] != c.labels[j] ? 1.0 : 0.0) - cmean;
            sdd += dd * dd;
            scc += cc * cc;
            sdc += dd * cc;
        }
    if (sdd <= 0.0) throw std::invalid_argument("pearson_gamma: all distances equal");
    if (scc <= 0.0) throw std::invalid_argument("pearson_gamma: indicator vector is constant");
    return sdc / std::sqrt(sdd * scc);
}

KernelDensity kernel_density(const DistanceMatrix& dm, double p) {
    if (p <= 0.0 || p > 1.0) throw std::invalid_argument("kernel_density: p in (0,1]");
    std::vector<double> sorted = dm.entries;
    std::sort(sorted.begin(), sorted.end());
    const double q = interpolated_quantile(sorted, p);
    if (q <= 0.0)
        throw std::invalid_argument(
            "kernel_density: kernel radius is zero (too many duplicate points); jitter the "
            "data or raise the quantile level");

    KernelDensity kd;
    kd.q = q;
    kd.p_quantile = p;
    kd.h.assign(dm.n, 1.0);  // self contribution k(0) = 1
    std::size_t idx = 0;
    for (std::size_t i = 0; i < dm.n; ++i)
        for (std::size_t j = i + 1; j < dm.n; ++j, ++idx) {
            const double d = dm.entries[idx];
            if (d <= q) {
                const double k = 1.0 - d / q;
                kd.h[i] += k;
                kd.h[j] += k;
            }
        }
    return kd;
}

DensityModeResult density_mode(const DistanceMatrix& dm, const Partition& c,
                               const KernelDensity& kd) {
    check_sizes(dm, c);
    if (kd.h.size() != dm.n)
        throw std::invalid_argument("density_mode: kernel density has wrong length");

    DensityModeResult out;
    double penalty = 0.0;

    for (const auto& g : c.clusters()) {
        if (g.size() < 2) continue;

        // start at the cluster's density mode (ties: lowest index)
        std::size_t mode = g[0];
        for (std::size_t i : g)
            if (kd.h[i] > kd.h[mode]) mode = i;

        std::vector<std::size_t> remaining;  // not yet attached
        remaining.reserve(g.size() - 1);
        for (std::size_t i : g)
            if (i != mode) remaining.push_back(i);

        // nearest attached neighbour per remaining point
        std::vector<double> near_d(remaining.size());
        std::vector<std::size_t> near_y(remaining.size(), mode);
        for (std::size_t r = 0; r < remaining.size(); ++r) near_d[r] = dm(remaining[r], mode);

        while (!remaining.empty()) {
            // argmin over (remaining, attached) pairs; ties by lowest
            // remaining index, then lowest attached index
            std::size_t pick = 0;
            for (std::size_t r = 1; r < remaining.size(); ++r) {
                if (near_d[r] < near_d[pick] ||
                    (near_d[r] == near_d[pick] && remaining[r] < remaining[pick]))
                    pick = r;
            }
            const std::size_t x = remaining[pick];
            const std::size_t y = near_y[pick];
            const double dxy = near_d[pick];

            // gap score uses the remainder before x moves
            double hmax = 0.0;
            for (std::size_t r : remaining) hmax = std::max(hmax, kd.h[r]);
            out.t_set.push_back(hmax * dxy);

            if (kd.h[x] > kd.h[y]) {
                const double diff = kd.h[x] - kd.h[y];
                penalty += diff * diff;
            }

            remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
            near_d.erase(near_d.begin() + static_cast<std::ptrdiff_t>(pick));
            near_y.erase(near_y.begin() + static_cast<std::ptrdiff_t>(pick));
            for (std::size_t r = 0; r < remaining.size(); ++r) {
                const double d = dm(remaining[r], x);
                if (d < near_d[r] || (d == near_d[r] && x < near_y[r])) {
                    near_d[r] = d;
                    near_y[r] = x;
                }
            }
        }
    }

    out.densdec = std::sqrt(penalty / static_cast<double>(c.n()));
    out.highdgap = out.t_set.empty() ? 0.0 : *std::max_element(out.t_set.begin(), out.t_set.end());
    return out;
}

double denscut(const DistanceMatrix& dm, const Partition& c, const KernelDensity& kd) {
    check_sizes(dm, c);
    if (kd.h.size() != dm.n)
        throw std::invalid_argument("denscut: kernel density has wrong length");

    std::vector<double> ho(dm.n, 0.0);
    std::size_t idx = 0;
    for (std::size_t i = 0; i < dm.n; ++i)
        for (std::size_t j = i + 1; j < dm.n; ++j, ++idx) {
            if (c.labels[i] == c.labels[j]) continue;
            const double d = dm.entries[idx];
            if (d <= kd.q) {
                const double k = 1.0 - d / kd.q;
                ho[i] += k;
                ho[j] += k;
            }
        }
    double sum = 0.0;
    for (std::size_t i = 0; i < dm.n; ++i) sum += kd.h[i] * ho[i];
    return sum / static_cast<double>(dm.n);
}

double entropy(const Partition& c) {
    const double n = static_cast<double>(c.n());
    double e = 0.0;
    for (std::size_t sz : c.sizes) {
        if (sz == 0) continue;
        const double f = static_cast<double>(sz) / n;
        e -= f * std::log(f);
    }
    return e;
}

double kdnorm(const Dataset& d, const Partition& c) {
    if (d.n != c.n()) throw std::invalid_argument("kdnorm: dataset and partition disagree on n");
    const std::size_t p = d.p;

    std::vector<double> pooled;
    for (const auto& g : c.clusters()) {
        if (g.size() <= p + 1) continue;  // singular covariance

        std::vector<double> mean(p, 0.0);
        for (std::size_t i : g)
            for (std::size_t k = 0; k < p; ++k) mean[k] += d(i, k);
        for (double& m : mean) m /= static_cast<double>(g.size());

        std::vector<double> cov(p * p, 0.0);
        for (std::size_t i : g)
            for (std::size_t a = 0; a < p; ++a) {
                const double ca = d(i, a) - mean[a];
                for (std::size_t b = a; b < p; ++b)
                    cov[a * p + b] += ca * (d(i, b) - mean[b]);
            }
        for (std::size_t a = 0; a < p; ++a)
            for (std::size_t b = a; b < p; ++b) {
                cov[a * p + b] /= static_cast<double>(g.size() - 1);
                cov[b * p + a] = cov[a * p + b];
            }

        SymmetricEigen eig = jacobi_eigen(cov, p);
        const double lmax = eig.eigenvalues.front();
        const double lmin = eig.eigenvalues.back();
        if (lmin <= 0.0 || lmax / lmin > 1e12) {
            double trace = 0.0;
            for (std::size_t a = 0; a < p; ++a) trace += cov[a * p + a];
            const double ridge = 1e-8 * trace / static_cast<double>(p);
            for (std::size_t a = 0; a < p; ++a) cov[a * p + a] += ridge;
            eig = jacobi_eigen(cov, p);
            if (eig.eigenvalues.back() <= 0.0)
                throw std::invalid_argument(
                    "kdnorm: degenerate cluster covariance (coincident points)");
        }

        std::vector<double> centered(p);
        for (std::size_t i : g) {
            for (std::size_t k = 0; k < p; ++k) centered[k] = d(i, k) - mean[k];
            double m2 = 0.0;
            for (std::size_t e = 0; e < p; ++e) {
                double proj = 0.0;
                for (std::size_t k = 0; k < p; ++k) proj += eig.eigenvectors[e][k] * centered[k];
                m2 += proj * proj / eig.eigenvalues[e];
            }
            pooled.push_back(m2);
        }
    }

    if (pooled.empty())
        throw std::invalid_argument("kdnorm: every cluster has n_j <= p+1; index undefined");

    std::sort(pooled.begin(), pooled.end());
    const double nn = static_cast<double>(pooled.size());
    double ks = 0.0;
    for (std::size_t i = 0; i < pooled.size(); ++i) {
        const double f = chi_squared_cdf(pooled[i], static_cast<double>(p));
        const double lo = static_cast<double>(i) / nn;
        const double hi = static_cast<double>(i + 1) / nn;
        ks = std::max(ks, std::max(std::fabs(f - lo), std::fabs(hi - f)));
    }
    return ks;
}

double cvnnd(const DistanceMatrix& dm, const Partition& c, int k) {
    check_sizes(dm, c);
    if (k < 1) throw std::invalid_argument("cvnnd: k must be >= 1");

    double weighted = 0.0;
    std::size_t weight = 0;
    for (const auto& g : c.clusters()) {
        if (g.size() <= static_cast<std::size_t>(k)) continue;

        std::vector<double> knn(g.size());
        std::vector<double> buf(g.size() - 1);
        for (std::size_t a = 0; a < g.size(); ++a) {
            std::size_t m = 0;
            for (std::size_t b = 0; b < g.size(); ++b)
                if (b != a) buf[m++] = dm(g[a], g[b]);
            std::nth_element(buf.begin(), buf.begin() + (k - 1), buf.end());
            knn[a] = buf[static_cast<std::size_t>(k - 1)];
        }

        double mean = 0.0;
        for (double v : knn) mean += v;
        mean /= static_cast<double>(knn.size());
        double ss = 0.0;
        for (double v : knn) ss += (v - mean) * (v - mean);
        const double sd = std::sqrt(ss / static_cast<double>(knn.size() - 1));
        if (mean <= 0.0)
            throw std::invalid_argument("cvnnd: zero mean neighbour distance (duplicate points)");
        weighted += static_cast<double>(g.size()) * (sd / mean);
        weight += g.size();
    }
    if (weight == 0)
        throw std::invalid_argument("cvnnd: no cluster has more than k members");
    return weighted / static_cast<double>(weight);
}

double asw(const DistanceMatrix& dm, const Partition& c) {
    check_sizes(dm, c);
    if (c.K < 2) throw std::invalid_argument("asw: needs K >= 2");

    const std::size_t n = c.n();
    const auto K = static_cast<std::size_t>(c.K);
    std::vector<double> sums(n * K, 0.0);  // sums[i*K + k] = total distance i -> cluster k+1
    std::size_t idx = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j, ++idx) {
            const double d = dm.entries[idx];
            sums[i * K + static_cast<std::size_t>(c.labels[j] - 1)] += d;
            sums[j * K + static_cast<std::size_t>(c.labels[i] - 1)] += d;
        }

    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto own = static_cast<std::size_t>(c.labels[i] - 1);
        if (c.sizes[own] == 1) continue;  // s_i = 0
        const double a = sums[i * K + own] / static_cast<double>(c.sizes[own] - 1);
        double b = kInf;
        for (std::size_t k = 0; k < K; ++k) {
            if (k == own) continue;
            b = std::min(b, sums[i * K + k] / static_cast<double>(c.sizes[k]));
        }
        const double denom = std::max(a, b);
        if (denom > 0.0) total += (b - a) / denom;
    }
    return total / static_cast<double>(n);
}

CentroidRepresentation centroid_representation(const Dataset& d, const DistanceMatrix& dm,
                                               const Partition& c) {
    if (d.n != c.n() || dm.n != c.n())
        throw std::invalid_argument("centroid_representation: size mismatch");

    CentroidRepresentation out;
    for (const auto& g : c.clusters()) {
        std::vector<double> mean(d.p, 0.0);
        for (std::size_t i : g)
            for (std::size_t k = 0; k < d.p; ++k) mean[k] += d(i, k);
        for (double& m : mean) m /= static_cast<double>(g.size());
        for (std::size_t i : g)
            for (std::size_t k = 0; k < d.p; ++k) {
                const double diff = d(i, k) - mean[k];
                out.wcss_centroid += diff * diff;
            }

        double best = kInf;
        for (std::size_t m : g) {
            double sum = 0.0;
            for (std::size_t i : g) sum += dm(i, m);
            best = std::min(best, sum);
        }
        out.sumdist_medoid += best;
    }
    return out;
}

std::optional<double> InternalIndexVector::get(std::string_view name) const {
    if (name == "avewithin") return avewithin;
    if (name == "maxdiameter") return maxdiameter;
    if (name == "widestgap") return widestgap;
    if (name == "sindex") return sindex;
    if (name == "min_separation") return min_separation;
    if (name == "pearsongamma") return pearsongamma;
    if (name == "densdec") return densdec;
    if (name == "highdgap") return highdgap;
    if (name == "denscut") return denscut;
    if (name == "entropy") return entropy;
    if (name == "kdnorm") return kdnorm;
    if (name == "cvnnd") return cvnnd;
    if (name == "asw") return asw;
    if (name == "wcss_centroid") return wcss_centroid;
    if (name == "sumdist_medoid") return sumdist_medoid;
    throw std::invalid_argument("unknown index name: " + std::string(name));
}

namespace {

InternalIndexVector all_internal_impl(const Dataset& d, const DistanceMatrix& dm,
                                      const Partition& c, const IndexParams& params,
                                      const KernelDensity* shared_kd) {
    InternalIndexVector v;
    auto guard = [&v](std::string_view name, auto&& fn) {
        try {
            fn();
        } catch (const std::exception& e) {
            v.failures.emplace_back(std::string(name), e.what());
        }
    };

    guard("avewithin", [&] { v.avewithin = avewithin(dm, c); });
    guard("maxdiameter", [&] { v.maxdiameter = maxdiameter(dm, c); });
    guard("widestgap", [&] { v.widestgap = widestgap(dm, c); });
    guard("sindex", [&] {
        const auto s = separation_index(dm, c, params.sindex_p);
        v.sindex = s.sindex;
        v.min_separation = s.min_separation;
    });
    guard("pearsongamma", [&] { v.pearsongamma = pearson_gamma(dm, c); });
    guard("entropy", [&] { v.entropy = entropy(c); });
    guard("kdnorm", [&] { v.kdnorm = kdnorm(d, c); });
    guard("cvnnd", [&] { v.cvnnd = cvnnd(dm, c, params.cvnnd_k); });
    guard("asw", [&] { v.asw = asw(dm, c); });
    guard("centroid_representation", [&] {
        const auto r = centroid_representation(d, dm, c);
        v.wcss_centroid = r.wcss_centroid;
        v.sumdist_medoid = r.sumdist_medoid;
    });
    try {
        const KernelDensity kd =
            shared_kd ? *shared_kd : kernel_density(dm, params.kernel_p);
        guard("density_mode", [&] {
            const auto r = density_mode(dm, c, kd);
            v.densdec = r.densdec;
            v.highdgap = r.highdgap;
        });
        guard("denscut", [&] { v.denscut = denscut(dm, c, kd); });
    } catch (const std::exception& e) {
        v.failures.emplace_back("kernel_density", e.what());
    }
    return v;
}

}  // namespace

InternalIndexVector all_internal(const Dataset& d, const DistanceMatrix& dm, const Partition& c,
                                 const IndexParams& params) {
    return all_internal_impl(d, dm, c, params, nullptr);
}

InternalIndexVector all_internal(const Dataset& d, const DistanceMatrix& dm, const Partition& c,
                                 const IndexParams& params, const KernelDensity& kd) {
    return all_internal_impl(d, dm, c, params, &kd);
}

}  // namespace clusterval
