#pragma once

#include <cstdint>
#include <vector>

#include "clusterval/partition.hpp"

namespace clusterval {

/// Cross-tabulation of two partitions of the same observations. Rows follow
/// the first (reference) partition, columns the second (prediction).
struct ContingencyTable {
    std::vector<std::vector<long long>> counts;  // K1 x K2
    std::vector<long long> row_sums;
    std::vector<long long> col_sums;
    long long n = 0;
};

ContingencyTable contingency(const Partition& a, const Partition& b);
ContingencyTable contingency_from_counts(std::vector<std::vector<long long>> counts);

/// Adjusted Rand index. Pair agreement corrected for chance; 1 for identical
/// partitions (including the degenerate one-cluster vs one-cluster case).
double ari(const ContingencyTable& t);

/// Variation of information in nats: H(A) + H(B) - 2 I(A,B).
double vi(const ContingencyTable& t);

struct BCubedResult {
    double precision = 0.0;
    double recall = 0.0;
    double f = 0.0;
};

/// BCubed precision/recall averaged over observations, F their harmonic
/// mean. Rows of the table are the reference classes, columns the predicted
/// clusters.
BCubedResult bcubed(const ContingencyTable& t);

}  // namespace clusterval
