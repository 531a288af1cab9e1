#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "clusterval/dataset.hpp"
#include "clusterval/distance.hpp"
#include "clusterval/partition.hpp"

namespace clusterval {

struct IndexParams {
    double sindex_p = 0.1;  // border proportion for the separation index
    double kernel_p = 0.1;  // distance quantile defining the kernel radius
    int cvnnd_k = 2;        // neighbour order for cvnnd
};

/// Triangular kernel density over all observations: h(x) = sum_i k(d(x,x_i))
/// with k(d) = (1 - d/q) for d <= q and 0 beyond, q the p-quantile of the
/// pairwise distances. Every point contributes k(0) = 1 to its own density.
struct KernelDensity {
    double q = 0.0;
    std::vector<double> h;
    double p_quantile = 0.0;
};

struct DensityModeResult {
    double densdec = 0.0;
    double highdgap = 0.0;
    std::vector<double> t_set;
};

struct SeparationResult {
    double sindex = 0.0;
    double min_separation = 0.0;
};

struct CentroidRepresentation {
    double wcss_centroid = 0.0;
    double sumdist_medoid = 0.0;
};

/// Mean over observations of the average distance to the other members of
/// their cluster; singletons contribute 0.
double avewithin(const DistanceMatrix& dm, const Partition& c);

/// Largest within-cluster pairwise distance; 0 when all clusters are singletons.
double maxdiameter(const DistanceMatrix& dm, const Partition& c);

/// Largest bottleneck over all two-way splits of any cluster, computed as the
/// maximum edge of each cluster's minimum spanning tree.
double widestgap(const DistanceMatrix& dm, const Partition& c);

/// Separation index: average of the [p*n_k] smallest border distances per
/// cluster (at least one per cluster), plus the overall minimum separation.
SeparationResult separation_index(const DistanceMatrix& dm, const Partition& c, double p = 0.1);

/// Pearson correlation between pairwise distances and the 0/1 indicator of
/// "pair splits across clusters". Throws when either vector is constant.
double pearson_gamma(const DistanceMatrix& dm, const Partition& c);

/// Kernel density estimate shared by the density-based indexes. Throws when
/// the kernel radius comes out zero (duplicate-heavy data).
KernelDensity kernel_density(const DistanceMatrix& dm, double p = 0.1);

/// Walk each cluster from its density mode, attaching the nearest remaining
/// member (single-linkage order). Density increases along the walk are
/// penalized into densdec; highdgap is the largest gap score collected on
/// the way.
DensityModeResult density_mode(const DistanceMatrix& dm, const Partition& c,
                               const KernelDensity& kd);

/// Mean of h(x) * h_o(x), where h_o is the part of the density contributed by
/// points of other clusters.
double denscut(const DistanceMatrix& dm, const Partition& c, const KernelDensity& kd);

/// Entropy of the cluster size distribution, natural log.
double entropy(const Partition& c);

/// Kolmogorov distance between the pooled within-cluster squared Mahalanobis
/// distances and the chi-squared distribution with p degrees of freedom.
/// Clusters with n_j <= p+1 are excluded; throws when none qualifies.
double kdnorm(const Dataset& d, const Partition& c);

/// Size-weighted coefficient of variation of the distance to the k-th
/// nearest within-cluster neighbour, over clusters with n_j > k.
double cvnnd(const DistanceMatrix& dm, const Partition& c, int k = 2);

/// Average silhouette width; singleton clusters score 0.
double asw(const DistanceMatrix& dm, const Partition& c);

/// K-means and PAM objectives of a given partition: within-cluster sum of
/// squares around the means and total distance to per-cluster best medoids.
CentroidRepresentation centroid_representation(const Dataset& d, const DistanceMatrix& dm,
                                               const Partition& c);

/// Raw values of all internal indexes; an index that cannot be computed is
/// left empty and recorded in `failures` with its error message.
struct InternalIndexVector {
    std::optional<double> avewithin;
    std::optional<double> maxdiameter;
    std::optional<double> widestgap;
    std::optional<double> sindex;
    std::optional<double> min_separation;
    std::optional<double> pearsongamma;
    std::optional<double> densdec;
    std::optional<double> highdgap;
    std::optional<double> denscut;
    std::optional<double> entropy;
    std::optional<double> kdnorm;
    std::optional<double> cvnnd;
    std::optional<double> asw;
    std::optional<double> wcss_centroid;
    std::optional<double> sumdist_medoid;
    std::vector<std::pair<std::string, std::string>> failures;

    std::optional<double> get(std::string_view name) const;
};

inline constexpr std::array<std::string_view, 15> kInternalIndexNames = {
    "avewithin",   "maxdiameter", "widestgap", "sindex",  "min_separation",
    "pearsongamma", "densdec",     "highdgap",  "denscut", "entropy",
    "kdnorm",      "cvnnd",       "asw",       "wcss_centroid", "sumdist_medoid",
};

/// Compute every internal index once, sharing the kernel density between the
/// density-based indexes. Component errors become missing values.
InternalIndexVector all_internal(const Dataset& d, const DistanceMatrix& dm,
                                 const Partition& c, const IndexParams& params = {});

/// As above with a precomputed kernel density (it depends only on the
/// distance matrix, so callers evaluating many partitions of one dataset can
/// compute it once). Must have been built from the same distances.
InternalIndexVector all_internal(const Dataset& d, const DistanceMatrix& dm, const Partition& c,
                                 const IndexParams& params, const KernelDensity& kd);

}  // namespace clusterval
