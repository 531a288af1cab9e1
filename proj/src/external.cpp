#include "clusterval/external.hpp"

#include <cmath>
#include <stdexcept>

namespace clusterval {

namespace {

double comb2(long long x) { return 0.5 * static_cast<double>(x) * static_cast<double>(x - 1); }

}  // namespace

ContingencyTable contingency(const Partition& a, const Partition& b) {
    if (a.n() != b.n()) throw std::invalid_argument("contingency: partitions disagree on n");
    ContingencyTable t;
    t.n = static_cast<long long>(a.n());
    t.counts.assign(static_cast<std::size_t>(a.K),
                    std::vector<long long>(static_cast<std::size_t>(b.K), 0));
    for (std::size_t i = 0; i < a.n(); ++i)
        ++t.counts[static_cast<std::size_t>(a.labels[i] - 1)]
                  [static_cast<std::size_t>(b.labels[i] - 1)];
    t.row_sums.assign(static_cast<std::size_t>(a.K), 0);
    t.col_sums.assign(static_cast<std::size_t>(b.K), 0);
    for (std::size_t r = 0; r < t.counts.size(); ++r)
        for (std::size_t c = 0; c < t.counts[r].size(); ++c) {
            t.row_sums[r] += t.counts[r][c];
            t.col_sums[c] += t.counts[r][c];
        }
    return t;
}

ContingencyTable contingency_from_counts(std::vector<std::vector<long long>> counts) {
    if (counts.empty() || counts.front().empty())
        throw std::invalid_argument("contingency: empty table");
    ContingencyTable t;
    const std::size_t cols = counts.front().size();
    t.row_sums.assign(counts.size(), 0);
    t.col_sums.assign(cols, 0);
    for (std::size_t r = 0; r < counts.size(); ++r) {
        if (counts[r].size() != cols) throw std::invalid_argument("contingency: ragged table");
        for (std::size_t c = 0; c < cols; ++c) {
            if (counts[r][c] < 0) throw std::invalid_argument("contingency: negative count");
            t.row_sums[r] += counts[r][c];
            t.col_sums[c] += counts[r][c];
            t.n += counts[r][c];
        }
    }
    t.counts = std::move(counts);
    return t;
}

double ari(const ContingencyTable& t) {
    if (t.n < 2) throw std::invalid_argument("ari: need n >= 2");
    double sum_cells = 0.0;
    for (const auto& row : t.counts)
        for (long long c : row) sum_cells += comb2(c);
    double sum_rows = 0.0, sum_cols = 0.0;
    for (long long r : t.row_sums) sum_rows += comb2(r);
    for (long long c : t.col_sums) sum_cols += comb2(c);
    const double expected = sum_rows * sum_cols / comb2(t.n);
    const double maximum = 0.5 * (sum_rows + sum_cols);
    if (maximum == expected) return 1.0;  // both partitions are one cluster
    return (sum_cells - expected) / (maximum - expected);
}

double vi(const ContingencyTable& t) {
    if (t.n < 1) throw std::invalid_argument("vi: empty table");
    const double n = static_cast<double>(t.n);
    auto ent = [n](const std::vector<long long>& margin) {
        double h = 0.0;
        for (long long v : margin) {
            if (v == 0) continue;
            const double f = static_cast<double>(v) / n;
            h -= f * std::log(f);
        }
        return h;
    };
    const double ha = ent(t.row_sums);
    const double hb = ent(t.col_sums);
    double mi = 0.0;
    for (std::size_t r = 0; r < t.counts.size(); ++r)
        for (std::size_t c = 0; c < t.counts[r].size(); ++c) {
            const long long v = t.counts[r][c];
            if (v == 0) continue;
            const double pij = static_cast<double>(v) / n;
            const double pi = static_cast<double>(t.row_sums[r]) / n;
            const double pj = static_cast<double>(t.col_sums[c]) / n;
            mi += pij * std::log(pij / (pi * pj));
        }
    const double v = ha + hb - 2.0 * mi;
    return v < 0.0 ? 0.0 : v;  // clamp tiny negative rounding
}

BCubedResult bcubed(const ContingencyTable& t) {
    if (t.n < 1) throw std::invalid_argument("bcubed: empty table");
    const double n = static_cast<double>(t.n);
    double precision = 0.0, recall = 0.0;
    for (std::size_t r = 0; r < t.counts.size(); ++r)
        for (std::size_t c = 0; c < t.counts[r].size(); ++c) {
            const double v = static_cast<double>(t.counts[r][c]);
            if (v == 0.0) continue;
            precision += v * v / static_cast<double>(t.col_sums[c]);
            recall += v * v / static_cast<double>(t.row_sums[r]);
        }
    precision /= n;
    recall /= n;
    BCubedResult out;
    out.precision = precision;
    out.recall = recall;
    out.f = 2.0 * precision * recall / (precision + recall);
    return out;
}

}  // namespace clusterval
