#include "clusterval/math.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace clusterval {

namespace {

// Regularized lower incomplete gamma P(a,x) by series expansion; valid for
// x < a+1.
double gamma_p_series(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double del = sum;
    for (int i = 0; i < 1000; ++i) {
        ap += 1.0;
        del *= x / ap;
        sum += del;
        if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a,x) by Lentz continued fraction;
// valid for x >= a+1.
double gamma_q_contfrac(double a, double x) {
    constexpr double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 1000; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi_squared_cdf(double x, double df) {
    if (df <= 0.0) throw std::invalid_argument("chi_squared_cdf: df must be positive");
    if (x <= 0.0) return 0.0;
    const double a = 0.5 * df;
    const double xs = 0.5 * x;
    if (xs < a + 1.0) return gamma_p_series(a, xs);
    return 1.0 - gamma_q_contfrac(a, xs);
}

SymmetricEigen jacobi_eigen(const std::vector<double>& matrix, std::size_t dim) {
    if (matrix.size() != dim * dim)
        throw std::invalid_argument("jacobi_eigen: matrix size != dim*dim");
    std::vector<double> a = matrix;
    std::vector<double> v(dim * dim, 0.0);
    for (std::size_t i = 0; i < dim; ++i) v[i * dim + i] = 1.0;

    auto off_diag_norm = [&]() {
        double s = 0.0;
        for (std::size_t i = 0; i < dim; ++i)
            for (std::size_t j = i + 1; j < dim; ++j) s += a[i * dim + j] * a[i * dim + j];
        return s;
    };

    for (int sweep = 0; sweep < 100 && off_diag_norm() > 1e-28; ++sweep) {
        for (std::size_t p = 0; p + 1 < dim; ++p) {
            for (std::size_t q = p + 1; q < dim; ++q) {
                const double apq = a[p * dim + q];
                if (apq == 0.0) continue;
                const double app = a[p * dim + p];
                const double aqq = a[q * dim + q];
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (std::size_t k = 0; k < dim; ++k) {
                    const double akp = a[k * dim + p];
                    const double akq = a[k * dim + q];
                    a[k * dim + p] = c * akp - s * akq;
                    a[k * dim + q] = s * akp + c * akq;
                }
                for (std::size_t k = 0; k < dim; ++k) {
                    const double apk = a[p * dim + k];
                    const double aqk = a[q * dim + k];
                    a[p * dim + k] = c * apk - s * aqk;
                    a[q * dim + k] = s * apk + c * aqk;
                }
                for (std::size_t k = 0; k < dim; ++k) {
                    const double vkp = v[p * dim + k];
                    const double vkq = v[q * dim + k];
                    v[p * dim + k] = c * vkp - s * vkq;
                    v[q * dim + k] = s * vkp + c * vkq;
                }
            }
        }
    }

    // Sort eigenpairs by descending eigenvalue; ties keep original order.
    std::vector<std::size_t> order(dim);
    for (std::size_t i = 0; i < dim; ++i) order[i] = i;
    for (std::size_t i = 0; i + 1 < dim; ++i) {
        std::size_t best = i;
        for (std::size_t j = i + 1; j < dim; ++j)
            if (a[order[j] * dim + order[j]] > a[order[best] * dim + order[best]]) best = j;
        std::swap(order[i], order[best]);
    }

    SymmetricEigen out;
    out.eigenvalues.resize(dim);
    out.eigenvectors.assign(dim, std::vector<double>(dim));
    for (std::size_t r = 0; r < dim; ++r) {
        const std::size_t src = order[r];
        out.eigenvalues[r] = a[src * dim + src];
        for (std::size_t k = 0; k < dim; ++k) out.eigenvectors[r][k] = v[src * dim + k];
        // sign convention
        double big = 0.0;
        for (double x : out.eigenvectors[r])
            if (std::fabs(x) > std::fabs(big)) big = x;
        if (big < 0.0)
            for (double& x : out.eigenvectors[r]) x = -x;
    }
    return out;
}

double interpolated_quantile(const std::vector<double>& sorted, double level) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty vector");
    if (level <= 0.0) return sorted.front();
    if (level >= 1.0) return sorted.back();
    const double pos = level * static_cast<double>(sorted.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0 || lo + 1 == sorted.size()) return sorted[lo];
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace clusterval
