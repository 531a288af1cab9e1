#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "clusterval/internal.hpp"
#include "clusterval/math.hpp"
#include "testutil.hpp"

using namespace clusterval;

namespace {

const std::vector<double> kFourPoints{0, 1, 10, 11};

Partition two_pairs() { return validate_partition(std::vector<long long>{1, 1, 2, 2}, 4); }

Partition one_cluster(std::size_t n) {
    return validate_partition(std::vector<long long>(n, 1), n);
}

Partition singletons(std::size_t n) {
    std::vector<long long> labels(n);
    for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<long long>(i);
    return validate_partition(labels, n);
}

// ---- independent oracles ------------------------------------------------

// silhouette by direct per-point double loops
double naive_asw(const DistanceMatrix& dm, const Partition& c) {
    const std::size_t n = c.n();
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const int own = c.labels[i];
        if (c.sizes[static_cast<std::size_t>(own - 1)] == 1) continue;
        double a = 0.0;
        double b = std::numeric_limits<double>::infinity();
        for (int k = 1; k <= c.K; ++k) {
            double sum = 0.0;
            std::size_t cnt = 0;
            for (std::size_t j = 0; j < n; ++j) {
                if (c.labels[j] != k || j == i) continue;
                sum += dm(i, j);
                ++cnt;
            }
            if (k == own)
                a = sum / static_cast<double>(cnt);
            else
                b = std::min(b, sum / static_cast<double>(c.sizes[static_cast<std::size_t>(k - 1)]));
        }
        if (std::max(a, b) > 0.0) total += (b - a) / std::max(a, b);
    }
    return total / static_cast<double>(n);
}

// widest gap by exhaustive enumeration of all two-way splits
double exhaustive_widestgap(const DistanceMatrix& dm, const std::vector<std::size_t>& cluster) {
    const std::size_t s = cluster.size();
    if (s < 2) return 0.0;
    REQUIRE(s <= 16);
    double widest = 0.0;
    for (std::uint32_t mask = 1; mask + 1 < (1u << s); ++mask) {
        double min_cross = std::numeric_limits<double>::infinity();
        for (std::size_t a = 0; a < s; ++a)
            for (std::size_t b = 0; b < s; ++b) {
                if (a == b) continue;
                if ((mask >> a & 1u) && !(mask >> b & 1u))
                    min_cross = std::min(min_cross, dm(cluster[a], cluster[b]));
            }
        widest = std::max(widest, min_cross);
    }
    return widest;
}

// literal step-by-step transcription of the density-mode walk
DensityModeResult naive_density_mode(const DistanceMatrix& dm, const Partition& c,
                                     const KernelDensity& kd) {
    double id1 = 0.0;
    std::vector<double> t_set;
    for (const auto& cluster : c.clusters()) {
        std::set<std::size_t> s;
        {
            std::size_t mode = cluster[0];
            for (std::size_t i : cluster)
                if (kd.h[i] > kd.h[mode]) mode = i;
            s.insert(mode);
        }
        for (;;) {
            std::vector<std::size_t> r;
            for (std::size_t i : cluster)
                if (!s.count(i)) r.push_back(i);
            if (r.empty()) break;
            std::size_t bx = 0, by = 0;
            double bd = std::numeric_limits<double>::infinity();
            bool found = false;
            for (std::size_t z1 : r)
                for (std::size_t z2 : s) {
                    const double d = dm(z1, z2);
                    if (!found || d < bd || (d == bd && (z1 < bx || (z1 == bx && z2 < by)))) {
                        bd = d;
                        bx = z1;
                        by = z2;
                        found = true;
                    }
                }
            double hmax = 0.0;
            for (std::size_t z : r) hmax = std::max(hmax, kd.h[z]);
            t_set.push_back(hmax * bd);
            if (kd.h[bx] > kd.h[by]) id1 += (kd.h[bx] - kd.h[by]) * (kd.h[bx] - kd.h[by]);
            s.insert(bx);
        }
    }
    DensityModeResult out;
    out.densdec = std::sqrt(id1 / static_cast<double>(c.n()));
    out.highdgap = t_set.empty() ? 0.0 : *std::max_element(t_set.begin(), t_set.end());
    out.t_set = std::move(t_set);
    return out;
}

}  // namespace

TEST_CASE("quantile interpolation") {
    const std::vector<double> v{1, 1, 9, 10, 10, 11};
    CHECK(interpolated_quantile(v, 0.5) == doctest::Approx(9.5));
    CHECK(interpolated_quantile(v, 0.0) == 1.0);
    CHECK(interpolated_quantile(v, 1.0) == 11.0);
    CHECK(interpolated_quantile({3.0}, 0.7) == 3.0);
}

TEST_CASE("chi-squared CDF against closed forms") {
    for (double t : {0.01, 0.1, 0.5, 1.0, 2.0, 3.7, 8.0, 25.0}) {
        CHECK(chi_squared_cdf(t, 1) == doctest::Approx(std::erf(std::sqrt(t / 2))).epsilon(1e-10));
        CHECK(chi_squared_cdf(t, 2) == doctest::Approx(1.0 - std::exp(-t / 2)).epsilon(1e-10));
        CHECK(chi_squared_cdf(t, 4) ==
              doctest::Approx(1.0 - std::exp(-t / 2) * (1.0 + t / 2)).epsilon(1e-10));
    }
    CHECK(chi_squared_cdf(0.0, 3) == 0.0);
    CHECK(chi_squared_cdf(1e6, 3) == doctest::Approx(1.0));
}

TEST_CASE("jacobi eigendecomposition residuals") {
    std::mt19937_64 rng(42);
    const std::size_t dim = 7;
    std::vector<double> m(dim * dim);
    for (std::size_t i = 0; i < dim; ++i)
        for (std::size_t j = i; j < dim; ++j)
            m[i * dim + j] = m[j * dim + i] = testutil::normal(rng);
    const SymmetricEigen eig = jacobi_eigen(m, dim);
    for (std::size_t e = 0; e < dim; ++e) {
        for (std::size_t r = 0; r < dim; ++r) {
            double av = 0.0;
            for (std::size_t k = 0; k < dim; ++k) av += m[r * dim + k] * eig.eigenvectors[e][k];
            CHECK(av == doctest::Approx(eig.eigenvalues[e] * eig.eigenvectors[e][r])
                            .epsilon(1e-8)
                            .scale(1.0));
        }
        if (e > 0) CHECK(eig.eigenvalues[e] <= eig.eigenvalues[e - 1]);
    }
}

TEST_CASE("avewithin on the running example") {
    const DistanceMatrix dm = euclidean_distances(testutil::dataset_1d(kFourPoints));
    CHECK(avewithin(dm, two_pairs()) == doctest::Approx(1.0));
    CHECK(avewithin(dm, singletons(4)) == 0.0);

    const DistanceMatrix dm3 = euclidean_distances(testutil::dataset_1d({0, 1, 2}));
    CHECK(avewithin(dm3, one_cluster(3)) == doctest::Approx(4.0 / 3.0));
}

TEST_CASE("maxdiameter") {
    const DistanceMatrix dm = euclidean_distances(testutil::dataset_1d(kFourPoints));
    CHECK(maxdiameter(dm, two_pairs()) == doctest::Approx(1.0));
    CHECK(maxdiameter(dm, one_cluster(4)) == doctest::Approx(11.0));
    CHECK(maxdiameter(dm, singletons(4)) == 0.0);
}

TEST_CASE("widestgap examples") {
    const DistanceMatrix dm = euclidean_distances(testutil::dataset_1d(kFourPoints));
    CHECK(widestgap(dm, one_cluster(4)) == doctest::Approx(9.0));
    CHECK(widestgap(dm, two_pairs()) == doctest::Approx(1.0));
    CHECK(widestgap(dm, singletons(4)) == 0.0);
}

TEST_CASE("widestgap equals the exhaustive two-split bottleneck") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + uniform_below(rng, 11);  // up to 12
        const Dataset d = testutil::random_dataset(std::max<std::size_t>(n, 2), 2,
                                                   9000 + static_cast<std::uint64_t>(trial));
        const DistanceMatrix dm = euclidean_distances(d);
        const Partition whole = one_cluster(d.n);
        std::vector<std::size_t> all(d.n);
        for (std::size_t i = 0; i < d.n; ++i) all[i] = i;
        CHECK(widestgap(dm, whole) == exhaustive_widestgap(dm, all));
    }
}

TEST_CASE("separation index examples") {
    const DistanceMatrix dm = euclidean_distances(testutil::dataset_1d(kFourPoints));
    const auto s = separation_index(dm, two_pairs(), 0.1);
    CHECK(s.sindex == doctest::Approx(9.0));
    CHECK(s.min_separation == doctest::Approx(9.0));

    const DistanceMatrix dm2 = euclidean_distances(testutil::dataset_1d({0, 1, 2, 3}));
    const auto s2 = separation_index(dm2, two_pairs(), 0.1);
    CHECK(s2.sindex == doctest::Approx(1.0));

    CHECK_THROWS(separation_index(dm, one_cluster(4), 0.1));
}

TEST_CASE("sindex >= min_separation on random inputs") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 20; ++trial) {
        const Dataset d = testutil::random_dataset(30, 2, 500 + static_cast<std::uint64_t>(trial));
        const DistanceMatrix dm = euclidean_distances(d);
        const Partition part = testutil::random_partition(30, 4, rng);
        const auto s = separation_index(dm, part, 0.1);
        CHECK(s.sindex >= s.min_separation);
    }
}

TEST_CASE("pearson gamma") {
    const DistanceMatrix dm = euclidean_distances(testutil::dataset_1d(kFourPoints));
    CHECK(pearson_gamma(dm, two_pairs()) == doctest::Approx(0.9908).epsilon(1e-3));
    CHECK_THROWS(pearson_gamma(dm, one_cluster(4)));

    // two within-pair segments orthogonal to each other: all within distances
    // equal, all between distances equal -> perfect correlation
    Dataset d = make_dataset({-0.5, 0, 0,   0.5, 0, 0,   0, -0.5, 2,   0, 0.5, 2}, 4, 3);
    const DistanceMatrix dmo = euclidean_distances(d);
    CHECK(pearson_gamma(dmo, two_pairs()) == doctest::Approx(1.0));

    // constant distances
    const DistanceMatrix dmc = distance_matrix_from_condensed(3, {1, 1, 1});
    CHECK_THROWS(pearson_gamma(dmc, validate_partition(std::vector<long long>{1, 2, 2}, 3)));
}

TEST_CASE("kernel density radius and values") {
    const DistanceMatrix dm = euclidean_distances(testutil::dataset_1d(kFourPoints));
    const KernelDensity kd = kernel_density(dm, 0.5);
    CHECK(kd.q == doctest::Approx(9.5));
    CHECK(kd.h[0] == doctest::Approx(1.0 + (1.0 - 1.0 / 9.5)));
    CHECK(kd.h[1] == doctest::Approx(1.0 + (1.0 - 1.0 / 9.5) + (1.0 - 9.0 / 9.5)));
    CHECK(kd.h[3] == kd.h[0]);

    // n=2 at any p: the other point sits exactly on the radius, k(q) = 0
    const DistanceMatrix dm2 = euclidean_distances(testutil::dataset_1d({0, 3}));
    const KernelDensity kd2 = kernel_density(dm2, 1.0);
    CHECK(kd2.q == doctest::Approx(3.0));
    CHECK(kd2.h[0] == doctest::Approx(1.0));

    // all points identical: radius collapses
    const DistanceMatrix dm0 = distance_matrix_from_condensed(3, {0, 0, 0});
    CHECK_THROWS(kernel_density(dm0, 0.5));
}

TEST_CASE("density mode walk on a tiny cluster") {
    const DistanceMatrix dm = euclidean_distances(testutil::dataset_1d({0, 1, 2}));
    const KernelDensity kd = kernel_density(dm, 1.0);
    REQUIRE(kd.q == doctest::Approx(2.0));
    REQUIRE(kd.h[0] == doctest::Approx(1.5));
    REQUIRE(kd.h[1] == doctest::Approx(2.0));
    REQUIRE(kd.h[2] == doctest::Approx(1.5));

    const DensityModeResult r = density_mode(dm, one_cluster(3), kd);
    // walk: mode 1, attach 0 (T += 1.5*1), attach 2 (T += 1.5*1); h never rises
    CHECK(r.densdec == 0.0);
    CHECK(r.highdgap == doctest::Approx(1.5));
    REQUIRE(r.t_set.size() == 2);
    CHECK(r.t_set[0] == doctest::Approx(1.5));
    CHECK(r.t_set[1] == doctest::Approx(1.5));

    const DensityModeResult nv = naive_density_mode(dm, one_cluster(3), kd);
    CHECK(nv.densdec == r.densdec);
    CHECK(nv.highdgap == r.highdgap);
}

TEST_CASE("density mode: singletons contribute nothing") {
    const DistanceMatrix dm = euclidean_distances(testutil::dataset_1d(kFourPoints));
    const KernelDensity kd = kernel_density(dm, 0.5);
    const DensityModeResult r = density_mode(dm, singletons(4), kd);
    CHECK(r.densdec == 0.0);
    CHECK(r.highdgap == 0.0);
    CHECK(r.t_set.empty());
}

TEST_CASE("density mode matches the literal trace on random inputs") {
    std::mt19937_64 rng(99);
    bool saw_penalty = false;
    for (int trial = 0; trial < 40; ++trial) {
        // mixtures produce multimodal clusters that trigger the penalty branch
        const auto blobs = testutil::make_blobs({{0, 0}, {3, 0}, {0, 4}}, 8, 1.0,
                                                7000 + static_cast<std::uint64_t>(trial));
        const DistanceMatrix dm = euclidean_distances(blobs.data);
        const KernelDensity kd = kernel_density(dm, 0.1);
        const Partition part = testutil::random_partition(blobs.data.n, 2, rng);
        const DensityModeResult fast = density_mode(dm, part, kd);
        const DensityModeResult naive = naive_density_mode(dm, part, kd);
        CHECK(fast.densdec == doctest::Approx(naive.densdec).epsilon(1e-12));
        CHECK(fast.highdgap == doctest::Approx(naive.highdgap).epsilon(1e-12));
        REQUIRE(fast.t_set.size() == naive.t_set.size());
        if (fast.densdec > 0.0) saw_penalty = true;
    }
    CHECK(saw_penalty);
}

TEST_CASE("denscut") {
    // clusters farther apart than the kernel radius: no foreign contribution
    const DistanceMatrix dm = euclidean_distances(testutil::dataset_1d(kFourPoints));
    const KernelDensity kd = kernel_density(dm, 0.5);  // q = 9.5 < 10
    CHECK(denscut(dm, two_pairs(), kd) > 0.0);         // 9 <= q: some overlap

    KernelDensity tight;
    tight.q = 5.0;
    tight.p_quantile = 0.1;
    tight.h = {1.8, 2.0, 2.0, 1.8};
    CHECK(denscut(dm, two_pairs(), tight) == 0.0);  // all cross distances >= 9 > q

    CHECK(denscut(dm, one_cluster(4), kd) == 0.0);  // K=1

    // two overlapping singletons with q = 2: h = 1.5 each, h_o = 0.5 each
    const DistanceMatrix dm2 = euclidean_distances(testutil::dataset_1d({0, 1}));
    KernelDensity kd2;
    kd2.q = 2.0;
    kd2.p_quantile = 1.0;
    kd2.h = {1.5, 1.5};
    const Partition p2 = validate_partition(std::vector<long long>{1, 2}, 2);
    CHECK(denscut(dm2, p2, kd2) == doctest::Approx(0.75));
}

TEST_CASE("entropy") {
    CHECK(entropy(two_pairs()) == doctest::Approx(std::log(2.0)));
    CHECK(entropy(one_cluster(5)) == 0.0);

    std::vector<long long> labels(440, 1);
    labels[439] = 2;
    const Partition p = validate_partition(labels, 440);
    CHECK(entropy(p) == doctest::Approx(0.01610).epsilon(1e-3));
    // cross-check against a direct evaluation
    const double direct = -(439.0 / 440.0) * std::log(439.0 / 440.0) -
                          (1.0 / 440.0) * std::log(1.0 / 440.0);
    CHECK(entropy(p) == doctest::Approx(direct).epsilon(1e-14));
}

TEST_CASE("entropy is maximal iff sizes are equal") {
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 10; ++trial) {
        const Partition p = testutil::random_partition(24, 4, rng);
        CHECK(entropy(p) <= std::log(4.0) + 1e-12);
        const bool uniform =
            std::all_of(p.sizes.begin(), p.sizes.end(), [](std::size_t s) { return s == 6; });
        if (uniform)
            CHECK(entropy(p) == doctest::Approx(std::log(4.0)));
        else
            CHECK(entropy(p) < std::log(4.0) - 1e-12);
    }
}

TEST_CASE("kdnorm on a Gaussian cluster is small") {
    const auto blobs = testutil::make_blobs({{0, 0, 0}}, 1000, 1.0, 2024);
    const double v = kdnorm(blobs.data, one_cluster(1000));
    CHECK(v > 0.0);
    CHECK(v < 0.06);
}

TEST_CASE("kdnorm is affine invariant") {
    const auto blobs = testutil::make_blobs({{0, 0, 0}, {4, 0, 0}}, 60, 1.0, 31);
    const double base = kdnorm(blobs.data, blobs.truth);

    std::mt19937_64 rng(15);
    for (int trial = 0; trial < 3; ++trial) {
        const std::size_t p = blobs.data.p;
        std::vector<double> A(p * p);
        for (double& a : A) a = testutil::normal(rng);
        for (std::size_t i = 0; i < p; ++i) A[i * p + i] += 3.0;  // keep well-conditioned
        std::vector<double> shift(p);
        for (double& s : shift) s = testutil::normal(rng);

        Dataset mapped = blobs.data;
        for (std::size_t i = 0; i < mapped.n; ++i)
            for (std::size_t r = 0; r < p; ++r) {
                double v = shift[r];
                for (std::size_t k = 0; k < p; ++k) v += A[r * p + k] * blobs.data(i, k);
                mapped(i, r) = v;
            }
        CHECK(kdnorm(mapped, blobs.truth) == doctest::Approx(base).epsilon(1e-8));
    }
}

TEST_CASE("kdnorm exclusion rules") {
    // p = 2, cluster of exactly p+1 = 3 points is excluded
    const auto blobs = testutil::make_blobs({{0, 0}}, 20, 1.0, 5);
    std::vector<long long> labels(20, 1);
    labels[0] = labels[1] = labels[2] = 2;  // tiny cluster
    const Partition p = validate_partition(labels, 20);
    const double with_small = kdnorm(blobs.data, p);
    // must equal the value for the big cluster alone
    std::vector<std::size_t> big;
    for (std::size_t i = 3; i < 20; ++i) big.push_back(i);
    Dataset sub = make_dataset(
        [&] {
            std::vector<double> v;
            for (std::size_t i : big)
                for (std::size_t k = 0; k < blobs.data.p; ++k) v.push_back(blobs.data(i, k));
            return v;
        }(),
        big.size(), blobs.data.p);
    CHECK(with_small == doctest::Approx(kdnorm(sub, one_cluster(17))).epsilon(1e-12));

    // everything excluded
    CHECK_THROWS(kdnorm(testutil::random_dataset(6, 2, 3), singletons(6)));

    CHECK(with_small >= 0.0);
    CHECK(with_small <= 1.0);
}

TEST_CASE("cvnnd") {
    const DistanceMatrix dm = euclidean_distances(testutil::dataset_1d({0, 1, 2, 3}));
    CHECK(cvnnd(dm, one_cluster(4), 2) ==
          doctest::Approx(std::sqrt(1.0 / 3.0) / 1.5).epsilon(1e-12));

    // unit square: every 2nd-nearest neighbour distance is 1
    Dataset sq = make_dataset({0, 0, 1, 0, 0, 1, 1, 1}, 4, 2);
    CHECK(cvnnd(euclidean_distances(sq), one_cluster(4), 2) == doctest::Approx(0.0));

    CHECK_THROWS(cvnnd(dm, two_pairs(), 2));  // all clusters of size <= k
}

TEST_CASE("asw on the running example") {
    const DistanceMatrix dm = euclidean_distances(testutil::dataset_1d(kFourPoints));
    const double expected = (9.5 / 10.5 + 8.5 / 9.5) / 2.0;
    CHECK(asw(dm, two_pairs()) == doctest::Approx(expected).epsilon(1e-12));
    CHECK(asw(dm, two_pairs()) == doctest::Approx(0.8998).epsilon(1e-3));
    CHECK_THROWS(asw(dm, one_cluster(4)));
}

TEST_CASE("asw is negative for two mixed duplicate groups") {
    Dataset d = make_dataset({0, 0, 10, 10}, 4, 1);
    const Partition mixed = validate_partition(std::vector<long long>{1, 2, 1, 2}, 4);
    CHECK(asw(euclidean_distances(d), mixed) < 0.0);
}

TEST_CASE("asw equals the naive double loop") {
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 25; ++trial) {
        const Dataset d = testutil::random_dataset(40, 3, 100 + static_cast<std::uint64_t>(trial));
        const DistanceMatrix dm = euclidean_distances(d);
        const Partition part = testutil::random_partition(40, 2 + trial % 4, rng);
        const double fast = asw(dm, part);
        CHECK(std::fabs(fast - naive_asw(dm, part)) < 1e-10);
        CHECK(fast >= -1.0);
        CHECK(fast <= 1.0);
    }
}

TEST_CASE("centroid representation") {
    const Dataset d = testutil::dataset_1d(kFourPoints);
    const DistanceMatrix dm = euclidean_distances(d);
    const auto r = centroid_representation(d, dm, two_pairs());
    CHECK(r.wcss_centroid == doctest::Approx(1.0));
    CHECK(r.sumdist_medoid == doctest::Approx(2.0));

    const auto s = centroid_representation(d, dm, singletons(4));
    CHECK(s.wcss_centroid == 0.0);
    CHECK(s.sumdist_medoid == 0.0);

    const Dataset d2 = testutil::dataset_1d({0, 2});
    const auto t = centroid_representation(d2, euclidean_distances(d2), one_cluster(2));
    CHECK(t.wcss_centroid == doctest::Approx(2.0));
    CHECK(t.sumdist_medoid == doctest::Approx(2.0));
}

TEST_CASE("all_internal matches the component operations") {
    const Dataset d = testutil::dataset_1d(kFourPoints);
    const DistanceMatrix dm = euclidean_distances(d);
    const InternalIndexVector v = all_internal(d, dm, two_pairs());
    CHECK(*v.avewithin == doctest::Approx(1.0));
    CHECK(*v.maxdiameter == doctest::Approx(1.0));
    CHECK(*v.widestgap == doctest::Approx(1.0));
    CHECK(*v.sindex == doctest::Approx(9.0));
    CHECK(*v.min_separation == doctest::Approx(9.0));
    CHECK(*v.pearsongamma == doctest::Approx(0.9908).epsilon(1e-3));
    CHECK(*v.entropy == doctest::Approx(std::log(2.0)));
    CHECK(*v.asw == doctest::Approx(0.8998).epsilon(1e-3));
    CHECK(*v.wcss_centroid == doctest::Approx(1.0));
    CHECK(*v.sumdist_medoid == doctest::Approx(2.0));
    // n_j = 2 <= p+1 = 2 for kdnorm, and cvnnd needs n_j > 2
    CHECK_FALSE(v.kdnorm.has_value());
    CHECK_FALSE(v.cvnnd.has_value());
    CHECK(v.densdec.has_value());
    CHECK(v.highdgap.has_value());
    CHECK(v.denscut.has_value());
}

TEST_CASE("all_internal K=1: separation-style indexes are missing") {
    const Dataset d = testutil::random_dataset(20, 2, 55);
    const DistanceMatrix dm = euclidean_distances(d);
    const InternalIndexVector v = all_internal(d, dm, one_cluster(20));
    CHECK_FALSE(v.sindex.has_value());
    CHECK_FALSE(v.min_separation.has_value());
    CHECK_FALSE(v.pearsongamma.has_value());
    CHECK_FALSE(v.asw.has_value());
    CHECK(v.avewithin.has_value());
    CHECK(v.maxdiameter.has_value());
    CHECK(v.widestgap.has_value());
    CHECK(*v.denscut == 0.0);
    CHECK(v.entropy == 0.0);
    CHECK(v.kdnorm.has_value());
    CHECK(v.cvnnd.has_value());
    // each failure names its index
    std::set<std::string> failed;
    for (const auto& [name, msg] : v.failures) failed.insert(name);
    CHECK(failed == std::set<std::string>{"sindex", "pearsongamma", "asw"});
}

TEST_CASE("all_internal is invariant under observation reordering") {
    const Dataset d = testutil::random_dataset(30, 2, 123);
    std::mt19937_64 rng(9);
    const Partition part = testutil::random_partition(30, 3, rng);
    const InternalIndexVector base = all_internal(d, euclidean_distances(d), part);

    std::vector<std::size_t> perm(d.n);
    for (std::size_t i = 0; i < d.n; ++i) perm[i] = i;
    for (std::size_t i = 0; i + 1 < d.n; ++i)
        std::swap(perm[i], perm[i + uniform_below(rng, d.n - i)]);
    std::vector<double> pv(d.n * d.p);
    std::vector<int> plabels(d.n);
    for (std::size_t i = 0; i < d.n; ++i) {
        plabels[i] = part.labels[perm[i]];
        for (std::size_t j = 0; j < d.p; ++j) pv[i * d.p + j] = d(perm[i], j);
    }
    const Dataset pd = make_dataset(std::move(pv), d.n, d.p);
    const InternalIndexVector permuted =
        all_internal(pd, euclidean_distances(pd), validate_partition(plabels, d.n));

    for (const auto name : kInternalIndexNames) {
        const auto a = base.get(name);
        const auto b = permuted.get(name);
        REQUIRE(a.has_value() == b.has_value());
        if (a) CHECK(*a == doctest::Approx(*b).epsilon(1e-9));
    }
}

TEST_CASE("index scale equivariance") {
    const Dataset d = testutil::random_dataset(24, 2, 321);
    std::mt19937_64 rng(2);
    const Partition part = testutil::random_partition(24, 3, rng);
    const InternalIndexVector base = all_internal(d, euclidean_distances(d), part);

    const double c = 2.5;
    Dataset scaled = d;
    for (double& v : scaled.values) v *= c;
    const InternalIndexVector s = all_internal(scaled, euclidean_distances(scaled), part);

    auto rel = [](double v) { return doctest::Approx(v).epsilon(1e-9); };
    CHECK(*s.avewithin == rel(c * *base.avewithin));
    CHECK(*s.maxdiameter == rel(c * *base.maxdiameter));
    CHECK(*s.widestgap == rel(c * *base.widestgap));
    CHECK(*s.sindex == rel(c * *base.sindex));
    CHECK(*s.min_separation == rel(c * *base.min_separation));
    CHECK(*s.highdgap == rel(c * *base.highdgap));
    CHECK(*s.sumdist_medoid == rel(c * *base.sumdist_medoid));
    CHECK(*s.wcss_centroid == rel(c * c * *base.wcss_centroid));
    CHECK(*s.entropy == rel(*base.entropy));
    CHECK(*s.pearsongamma == rel(*base.pearsongamma));
    CHECK(*s.asw == rel(*base.asw));
    CHECK(*s.kdnorm == rel(*base.kdnorm));
    CHECK(*s.cvnnd == rel(*base.cvnnd));
    CHECK(*s.densdec == rel(*base.densdec));
    CHECK(*s.denscut == rel(*base.denscut));
}

TEST_CASE("widestgap never exceeds maxdiameter") {
    std::mt19937_64 rng(10);
    for (int trial = 0; trial < 20; ++trial) {
        const Dataset d = testutil::random_dataset(25, 2, 800 + static_cast<std::uint64_t>(trial));
        const DistanceMatrix dm = euclidean_distances(d);
        const Partition part = testutil::random_partition(25, 1 + trial % 5, rng);
        CHECK(widestgap(dm, part) <= maxdiameter(dm, part) + 1e-12);
        if (part.K >= 2) {
            const double pg = pearson_gamma(dm, part);
            CHECK(pg >= -1.0);
            CHECK(pg <= 1.0);
        }
    }
}
