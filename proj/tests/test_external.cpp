#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <map>

#include "clusterval/external.hpp"
#include "testutil.hpp"

using namespace clusterval;

TEST_CASE("contingency tables") {
    const Partition a = validate_partition(std::vector<long long>{1, 1, 2, 2}, 4);
    const ContingencyTable same = contingency(a, a);
    CHECK(same.counts[0][0] == 2);
    CHECK(same.counts[1][1] == 2);
    CHECK(same.counts[0][1] == 0);

    const Partition ones = validate_partition(std::vector<long long>{7, 7, 7}, 3);
    const ContingencyTable t = contingency(ones, ones);
    CHECK(t.counts.size() == 1);
    CHECK(t.counts[0][0] == 3);

    const Partition b = validate_partition(std::vector<long long>{1, 2}, 2);
    CHECK_THROWS(contingency(a, b));
}

TEST_CASE("the Wholesale single-linkage table") {
    const ContingencyTable t = contingency_from_counts({{297, 1}, {142, 0}});
    CHECK(t.n == 440);
    CHECK(std::fabs(vi(t) - 0.643) < 0.005);
    CHECK(std::fabs(bcubed(t).f - 0.720) < 0.005);
    CHECK(std::fabs(ari(t) - (-0.0024)) < 0.0005);
}

TEST_CASE("identical partitions score perfectly") {
    std::mt19937_64 rng(9);
    const Partition p = testutil::random_partition(30, 4, rng);
    const ContingencyTable t = contingency(p, p);
    CHECK(ari(t) == doctest::Approx(1.0));
    CHECK(vi(t) == doctest::Approx(0.0));
    const auto b = bcubed(t);
    CHECK(b.precision == doctest::Approx(1.0));
    CHECK(b.recall == doctest::Approx(1.0));
    CHECK(b.f == doctest::Approx(1.0));
}

TEST_CASE("degenerate one-cluster vs one-cluster") {
    const Partition one = validate_partition(std::vector<long long>{1, 1, 1}, 3);
    const ContingencyTable t = contingency(one, one);
    CHECK(ari(t) == 1.0);
    CHECK(vi(t) == 0.0);
}

TEST_CASE("relabeling either side leaves the indexes unchanged") {
    std::mt19937_64 rng(21);
    const Partition a = testutil::random_partition(25, 3, rng);
    const Partition b = testutil::random_partition(25, 4, rng);
    // swap labels 1 and 3 on one side
    std::vector<long long> relabeled(a.labels.begin(), a.labels.end());
    for (auto& l : relabeled) l = l == 1 ? 3 : (l == 3 ? 1 : l);
    const Partition a2 = validate_partition(relabeled, 25);

    const ContingencyTable t1 = contingency(a, b);
    const ContingencyTable t2 = contingency(a2, b);
    CHECK(ari(t1) == doctest::Approx(ari(t2)).epsilon(1e-14));
    CHECK(vi(t1) == doctest::Approx(vi(t2)).epsilon(1e-14));
    CHECK(bcubed(t1).f == doctest::Approx(bcubed(t2).f).epsilon(1e-14));
}

TEST_CASE("brute-force equivalence on random partition pairs") {
    std::mt19937_64 rng(123);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t n = 2 + uniform_below(rng, 7);  // up to 8
        const int ka = 1 + static_cast<int>(uniform_below(rng, n));
        const int kb = 1 + static_cast<int>(uniform_below(rng, n));
        const Partition a = testutil::random_partition(n, ka, rng);
        const Partition b = testutil::random_partition(n, kb, rng);
        const ContingencyTable t = contingency(a, b);

        // pair counting
        long long both = 0, a_only = 0, b_only = 0, neither = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                const bool sa = a.labels[i] == a.labels[j];
                const bool sb = b.labels[i] == b.labels[j];
                if (sa && sb)
                    ++both;
                else if (sa)
                    ++a_only;
                else if (sb)
                    ++b_only;
                else
                    ++neither;
            }
        const double sum_rows = static_cast<double>(both + a_only);
        const double sum_cols = static_cast<double>(both + b_only);
        const double all_pairs = static_cast<double>(both + a_only + b_only + neither);
        const double expected = sum_rows * sum_cols / all_pairs;
        const double maximum = 0.5 * (sum_rows + sum_cols);
        const double brute_ari =
            maximum == expected ? 1.0 : (static_cast<double>(both) - expected) / (maximum - expected);
        CHECK(ari(t) == brute_ari);  // exactly

        // direct entropy sums over label vectors
        auto hof = [n](const std::vector<int>& labels) {
            std::map<int, double> counts;
            for (int l : labels) counts[l] += 1.0;
            double h = 0.0;
            for (const auto& [_, c] : counts) h -= c / static_cast<double>(n) *
                                                  std::log(c / static_cast<double>(n));
            return h;
        };
        std::map<std::pair<int, int>, double> joint;
        for (std::size_t i = 0; i < n; ++i) joint[{a.labels[i], b.labels[i]}] += 1.0;
        double hj = 0.0;
        for (const auto& [_, c] : joint)
            hj -= c / static_cast<double>(n) * std::log(c / static_cast<double>(n));
        // VI = 2 H(A,B) - H(A) - H(B)
        const double brute_vi = 2.0 * hj - hof(a.labels) - hof(b.labels);
        CHECK(std::fabs(vi(t) - std::max(brute_vi, 0.0)) < 1e-12);

        // per-observation precision/recall averages
        double bp = 0.0, br = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            long long same_both = 0, same_b = 0, same_a = 0;
            for (std::size_t j = 0; j < n; ++j) {
                const bool sa = a.labels[i] == a.labels[j];
                const bool sb = b.labels[i] == b.labels[j];
                if (sa && sb) ++same_both;
                if (sb) ++same_b;
                if (sa) ++same_a;
            }
            bp += static_cast<double>(same_both) / static_cast<double>(same_b);
            br += static_cast<double>(same_both) / static_cast<double>(same_a);
        }
        bp /= static_cast<double>(n);
        br /= static_cast<double>(n);
        const auto bc = bcubed(t);
        CHECK(std::fabs(bc.precision - bp) < 1e-12);
        CHECK(std::fabs(bc.recall - br) < 1e-12);
        CHECK(std::fabs(bc.f - 2.0 * bp * br / (bp + br)) < 1e-12);
    }
}

TEST_CASE("vi satisfies the metric axioms on random triples") {
    std::mt19937_64 rng(55);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + uniform_below(rng, 10);
        const Partition a = testutil::random_partition(n, 1 + static_cast<int>(uniform_below(rng, n)), rng);
        const Partition b = testutil::random_partition(n, 1 + static_cast<int>(uniform_below(rng, n)), rng);
        const Partition c = testutil::random_partition(n, 1 + static_cast<int>(uniform_below(rng, n)), rng);
        const double ab = vi(contingency(a, b));
        const double ba = vi(contingency(b, a));
        const double ac = vi(contingency(a, c));
        const double bc = vi(contingency(b, c));
        CHECK(ab == doctest::Approx(ba).epsilon(1e-13));
        CHECK(ab >= 0.0);
        CHECK(ac <= ab + bc + 1e-12);
    }
}

TEST_CASE("refining the prediction to singletons gives precision 1") {
    std::mt19937_64 rng(31);
    const std::size_t n = 20;
    const Partition truth = testutil::random_partition(n, 3, rng);
    std::vector<long long> single(n);
    for (std::size_t i = 0; i < n; ++i) single[i] = static_cast<long long>(i);
    const Partition singles = validate_partition(single, n);
    const auto b = bcubed(contingency(truth, singles));
    CHECK(b.precision == doctest::Approx(1.0));
    CHECK(b.recall < 1.0);
}

TEST_CASE("recall never increases when the prediction is refined") {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 12;
        const Partition truth = testutil::random_partition(n, 3, rng);
        const Partition pred = testutil::random_partition(n, 2, rng);
        // split pred cluster 1 at a random pivot into a new cluster
        std::vector<long long> refined(pred.labels.begin(), pred.labels.end());
        bool flip = false;
        for (std::size_t i = 0; i < n; ++i) {
            if (refined[i] != 1) continue;
            if (flip) refined[i] = pred.K + 1;
            flip = !flip;
        }
        const Partition fine = validate_partition(refined, n);
        const auto coarse_b = bcubed(contingency(truth, pred));
        const auto fine_b = bcubed(contingency(truth, fine));
        CHECK(fine_b.recall <= coarse_b.recall + 1e-12);
        CHECK(fine_b.precision >= coarse_b.precision - 1e-12);
    }
}

TEST_CASE("ari guards") {
    CHECK_THROWS(ari(contingency_from_counts({{1}})));
    CHECK_THROWS(contingency_from_counts({}));
    CHECK_THROWS(contingency_from_counts({{1, 2}, {3}}));
}
