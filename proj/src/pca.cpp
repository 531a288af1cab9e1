#include <cmath>
#include <stdexcept>

#include "clusterval/harness.hpp"
#include "clusterval/math.hpp"

namespace clusterval {

PcaMap pca_method_map(const std::vector<MethodSummary>& summaries) {
    // Map the clustering methods only; the truth row is not a method.
    std::vector<const MethodSummary*> methods;
    for (const auto& s : summaries)
        if (s.method != "truth") methods.push_back(&s);
    const std::size_t rows = methods.size();
    if (rows < 2) throw std::invalid_argument("pca_method_map: need at least 2 methods");

    // Keep aggregate index columns whose mean exists for every method.
    std::vector<std::string> cols;
    for (const auto name : kPcaIndexNames) {
        bool complete = true;
        for (const auto* m : methods)
            if (!m->mean_calibrated.count(std::string(name))) {
                complete = false;
                break;
            }
        if (complete) cols.push_back(std::string(name));
    }
    if (cols.size() < 2)
        throw std::invalid_argument("pca_method_map: fewer than 2 complete index columns");

    const std::size_t dim = cols.size();
    std::vector<double> centered(rows * dim);
    for (std::size_t j = 0; j < dim; ++j) {
        double mean = 0.0;
        for (const auto* m : methods) mean += m->mean_calibrated.at(cols[j]);
        mean /= static_cast<double>(rows);
        for (std::size_t i = 0; i < rows; ++i)
            centered[i * dim + j] = methods[i]->mean_calibrated.at(cols[j]) - mean;
    }

    // sample covariance of the columns
    std::vector<double> cov(dim * dim, 0.0);
    for (std::size_t a = 0; a < dim; ++a)
        for (std::size_t b = a; b < dim; ++b) {
            double s = 0.0;
            for (std::size_t i = 0; i < rows; ++i)
                s += centered[i * dim + a] * centered[i * dim + b];
            cov[a * dim + b] = cov[b * dim + a] = s / static_cast<double>(rows - 1);
        }

    const SymmetricEigen eig = jacobi_eigen(cov, dim);
    double total = 0.0;
    for (double l : eig.eigenvalues) total += std::max(l, 0.0);

    PcaMap map;
    map.indexes = cols;
    for (const auto* m : methods) map.methods.push_back(m->method);

    const double l1 = std::max(eig.eigenvalues[0], 0.0);
    const double l2 = dim > 1 ? std::max(eig.eigenvalues[1], 0.0) : 0.0;
    const bool rank1 = l2 <= 1e-12 * std::max(l1, 1e-300);
    const std::size_t ncomp = rank1 ? 1 : 2;
    if (rank1) map.note = "rank < 2 after centering; only one component emitted";

    for (std::size_t c = 0; c < ncomp; ++c)
        map.explained.push_back(total > 0.0 ? std::max(eig.eigenvalues[c], 0.0) / total : 0.0);

    for (std::size_t i = 0; i < rows; ++i) {
        std::array<double, 2> score{0.0, 0.0};
        for (std::size_t c = 0; c < ncomp; ++c)
            for (std::size_t j = 0; j < dim; ++j)
                score[c] += centered[i * dim + j] * eig.eigenvectors[c][j];
        map.coords.push_back(score);
    }
    for (std::size_t j = 0; j < dim; ++j) {
        std::array<double, 2> load{eig.eigenvectors[0][j],
                                   ncomp > 1 ? eig.eigenvectors[1][j] : 0.0};
        map.loadings.push_back(load);
    }
    return map;
}

}  // namespace clusterval
