#pragma once

#include <cstddef>
#include <vector>

namespace clusterval {

/// CDF of the chi-squared distribution with `df` degrees of freedom, i.e. the
/// regularized lower incomplete gamma function P(df/2, x/2). Series expansion
/// below the a+1 crossover, continued fraction above; absolute error < 1e-10.
double chi_squared_cdf(double x, double df);

/// Eigendecomposition of a symmetric matrix (row-major, dim x dim) by cyclic
/// Jacobi rotations. Returns eigenvalues in descending order with matching
/// eigenvectors as rows of `eigenvectors`. Deterministic; eigenvector signs
/// are fixed so the entry of largest magnitude is positive.
struct SymmetricEigen {
    std::vector<double> eigenvalues;
    std::vector<std::vector<double>> eigenvectors;
};
SymmetricEigen jacobi_eigen(const std::vector<double>& matrix, std::size_t dim);

/// Quantile by linear interpolation between order statistics (the common
/// "type 7" definition). `sorted` must be ascending and nonempty; level in [0,1].
double interpolated_quantile(const std::vector<double>& sorted, double level);

}  // namespace clusterval
