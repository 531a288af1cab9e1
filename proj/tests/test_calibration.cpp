#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "clusterval/calibration.hpp"
#include "testutil.hpp"

using namespace clusterval;

namespace {

std::set<std::set<std::size_t>> groups_of(const Partition& p) {
    std::set<std::set<std::size_t>> out;
    for (const auto& g : p.clusters()) out.emplace(g.begin(), g.end());
    return out;
}

void check_valid(const Partition& p, int K, std::size_t n) {
    CHECK(p.K == K);
    CHECK(p.labels.size() == n);
    std::size_t total = 0;
    for (std::size_t sz : p.sizes) {
        CHECK(sz >= 1);
        total += sz;
    }
    CHECK(total == n);
}

}  // namespace

TEST_CASE("rand_kcentroids edge cases") {
    const DistanceMatrix dm = euclidean_distances(testutil::random_dataset(12, 2, 3));
    const Partition all = rand_kcentroids(dm, 12, 5);
    CHECK(all.K == 12);
    for (std::size_t sz : all.sizes) CHECK(sz == 1);

    const Partition one = rand_kcentroids(dm, 1, 5);
    CHECK(one.K == 1);
    CHECK(one.sizes[0] == 12);

    CHECK_THROWS(rand_kcentroids(dm, 13, 5));
}

TEST_CASE("rand_kcentroids assigns to the nearest centroid") {
    const DistanceMatrix dm = euclidean_distances(testutil::dataset_1d({0, 1, 10, 11}));
    // centroids drawn from different blobs must give exactly the blob split;
    // same-blob draws give a 1-vs-3 split (the far blob joins the nearer centroid)
    int blob_splits = 0;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const Partition p = rand_kcentroids(dm, 2, seed);
        check_valid(p, 2, 4);
        if (groups_of(p) == std::set<std::set<std::size_t>>{{0, 1}, {2, 3}})
            ++blob_splits;
        else
            CHECK(((p.sizes[0] == 1 && p.sizes[1] == 3) || (p.sizes[0] == 3 && p.sizes[1] == 1)));
    }
    CHECK(blob_splits > 0);
}

TEST_CASE("rand_kcentroids stays total with duplicate points") {
    std::vector<double> xs(10, 1.0);
    xs[9] = 2.0;
    const DistanceMatrix dm = euclidean_distances(testutil::dataset_1d(xs));
    for (std::uint64_t seed = 0; seed < 20; ++seed) check_valid(rand_kcentroids(dm, 4, seed), 4, 10);
}

TEST_CASE("sequential generators separate far blobs") {
    const auto blobs = testutil::make_blobs({{0, 0}, {50, 0}}, 8, 0.5, 404);
    const DistanceMatrix dm = euclidean_distances(blobs.data);
    int hits_nearest = 0, hits_farthest = 0, hits_average = 0;
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        // seeds sometimes land in the same blob; when they split, recovery is exact
        const Partition pn = rand_nearest_neighbour(dm, 2, seed);
        const Partition pf = rand_farthest_neighbour(dm, 2, seed);
        const Partition pa = rand_average_distances(dm, 2, seed);
        check_valid(pn, 2, blobs.data.n);
        check_valid(pf, 2, blobs.data.n);
        check_valid(pa, 2, blobs.data.n);
        if (groups_of(pn) == groups_of(blobs.truth)) ++hits_nearest;
        if (groups_of(pf) == groups_of(blobs.truth)) ++hits_farthest;
        if (groups_of(pa) == groups_of(blobs.truth)) ++hits_average;
    }
    CHECK(hits_nearest > 0);
    CHECK(hits_farthest > 0);
    CHECK(hits_average > 0);
}

TEST_CASE("rand_nearest_neighbour ties go to the lowest point index") {
    // all pairwise distances equal: every attachment is a tie, so every
    // non-seed point joins the cluster of the lowest-index seed, leaving the
    // higher-index seed as a singleton. Point 0 can never be the singleton.
    const DistanceMatrix dm = distance_matrix_from_condensed(4, std::vector<double>(6, 1.0));
    for (std::uint64_t seed = 0; seed < 40; ++seed) {
        const Partition p = rand_nearest_neighbour(dm, 2, seed);
        check_valid(p, 2, 4);
        REQUIRE(((p.sizes[0] == 1 && p.sizes[1] == 3) || (p.sizes[0] == 3 && p.sizes[1] == 1)));
        const int singleton_cluster = p.sizes[0] == 1 ? 1 : 2;
        CHECK(p.labels[0] != singleton_cluster);
    }
}

TEST_CASE("sequential generators: K=n gives singletons") {
    const DistanceMatrix dm = euclidean_distances(testutil::random_dataset(7, 2, 8));
    for (auto* gen : {rand_nearest_neighbour, rand_farthest_neighbour, rand_average_distances}) {
        const Partition p = gen(dm, 7, 3);
        CHECK(p.K == 7);
        for (std::size_t sz : p.sizes) CHECK(sz == 1);
    }
}

TEST_CASE("generate_ensemble counts, order, and determinism") {
    const DistanceMatrix dm = euclidean_distances(testutil::random_dataset(30, 2, 77));

    const EnsembleSpec tiny{1, 3, 42};
    CHECK(generate_ensemble(dm, tiny).size() == 4);

    const EnsembleSpec spec{50, 3, 42};
    const auto parts = generate_ensemble(dm, spec);
    CHECK(parts.size() == 200);
    for (const auto& p : parts) check_valid(p, 3, 30);

    const auto again = generate_ensemble(dm, spec);
    REQUIRE(again.size() == parts.size());
    for (std::size_t i = 0; i < parts.size(); ++i) CHECK(again[i].labels == parts[i].labels);

    // replicate i of each algorithm depends only on (master_seed, algorithm, i)
    const EnsembleSpec smaller{2, 3, 42};
    const auto few = generate_ensemble(dm, smaller);
    CHECK(few[0].labels == parts[0].labels);    // kcentroids #0
    CHECK(few[1].labels == parts[1].labels);    // kcentroids #1
    CHECK(few[2].labels == parts[50].labels);   // nearest #0
    CHECK(few[4].labels == parts[100].labels);  // farthest #0
    CHECK(few[6].labels == parts[150].labels);  // average #0
}

TEST_CASE("calibrate standardizes against the pool") {
    // pool {0,1,2,3}: mean 1.5, sd sqrt(5/3)
    const std::vector<double> method{3.0};
    const std::vector<double> ensemble{0.0, 1.0, 2.0};
    const auto out = calibrate(method, ensemble, Orientation::larger_better);
    REQUIRE(out.size() == 1);
    CHECK(out[0].pool_mean == doctest::Approx(1.5));
    CHECK(out[0].pool_sd == doctest::Approx(std::sqrt(5.0 / 3.0)));
    CHECK(out[0].calibrated == doctest::Approx(1.1619).epsilon(1e-4));
    CHECK(out[0].raw == 3.0);

    // a method value equal to the pool mean standardizes to zero
    // (pool {1,0,1,2} has mean 1)
    const auto centered = calibrate(std::vector<double>{1.0}, ensemble, Orientation::larger_better);
    CHECK(centered[0].pool_mean == doctest::Approx(1.0));
    CHECK(centered[0].calibrated == doctest::Approx(0.0));
}

TEST_CASE("calibrate orientation flips the sign") {
    // negating every value and the orientation leaves the pooled z-scores intact
    const std::vector<double> ensemble{0.0, 1.0, 2.0};
    const std::vector<double> neg_ensemble{0.0, -1.0, -2.0};
    const auto larger = calibrate(std::vector<double>{3.0}, ensemble, Orientation::larger_better);
    const auto smaller =
        calibrate(std::vector<double>{-3.0}, neg_ensemble, Orientation::smaller_better);
    CHECK(larger[0].calibrated == doctest::Approx(smaller[0].calibrated).epsilon(1e-14));
    CHECK(larger[0].pool_mean == doctest::Approx(smaller[0].pool_mean).epsilon(1e-14));

    // decreasing a smaller-better raw value strictly raises the calibrated value
    const auto hi = calibrate(std::vector<double>{2.0}, ensemble, Orientation::smaller_better);
    const auto lo = calibrate(std::vector<double>{1.0}, ensemble, Orientation::smaller_better);
    CHECK(lo[0].calibrated > hi[0].calibrated);
}

TEST_CASE("calibrate guards") {
    CHECK_THROWS(calibrate(std::vector<double>{1.0}, std::vector<double>{}, Orientation::larger_better));
    CHECK_THROWS(
        calibrate(std::vector<double>{1.0, 1.0}, std::vector<double>{1.0}, Orientation::larger_better));
}

TEST_CASE("calibrated pool has mean 0 and sd 1") {
    std::mt19937_64 rng(6);
    std::vector<double> pool(57);
    for (double& v : pool) v = testutil::normal(rng) * 3.0 + 1.0;
    const auto out = calibrate(pool, std::vector<double>{}, Orientation::smaller_better);
    double mean = 0.0;
    for (const auto& c : out) mean += c.calibrated;
    mean /= static_cast<double>(out.size());
    double ss = 0.0;
    for (const auto& c : out) ss += (c.calibrated - mean) * (c.calibrated - mean);
    const double sd = std::sqrt(ss / static_cast<double>(out.size() - 1));
    CHECK(std::fabs(mean) < 1e-9);
    CHECK(std::fabs(sd - 1.0) < 1e-9);
}

TEST_CASE("dmode aggregate") {
    CHECK(dmode_aggregate(0.0, 0.0) == 0.0);
    CHECK(dmode_aggregate(1.0, 1.0) == doctest::Approx(1.0));
    CHECK(dmode_aggregate(2.0, -2.0) == doctest::Approx(1.0));
}

TEST_CASE("index orientations") {
    CHECK(index_orientation("avewithin") == Orientation::smaller_better);
    CHECK(index_orientation("sindex") == Orientation::larger_better);
    CHECK(index_orientation("entropy") == Orientation::larger_better);
    CHECK(index_orientation("kdnorm") == Orientation::smaller_better);
    CHECK(index_orientation("asw") == Orientation::larger_better);
    CHECK_THROWS(index_orientation("nope"));
}
