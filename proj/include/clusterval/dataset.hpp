#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "clusterval/partition.hpp"

namespace clusterval {

/// An n x p numeric data matrix with column names, an optional ground-truth
/// partition, and a record of the preprocessing steps applied to it.
/// Missing cells are stored as NaN until impute_mean() resolves them.
struct Dataset {
    std::vector<double> values;  // row-major, n*p
    std::vector<std::string> column_names;
    std::optional<Partition> truth;
    std::vector<std::string> truth_class_names;  // original truth labels, by class id
    std::size_t n = 0;
    std::size_t p = 0;
    std::vector<std::string> preprocessing;

    double operator()(std::size_t i, std::size_t j) const { return values[i * p + j]; }
    double& operator()(std::size_t i, std::size_t j) { return values[i * p + j]; }

    bool has_missing() const;
    const double* row(std::size_t i) const { return values.data() + i * p; }
};

/// Parse a CSV file (header row required, comma delimiter, '.' decimal point,
/// optional double-quoted fields). Empty cells and "NA" (case-insensitive)
/// mark missing values. When `truth_column` is given (a column name, or a
/// 1-based column position if no name matches), that column is extracted as
/// the ground-truth partition and removed from the feature matrix.
Dataset load_csv(const std::string& path,
                 const std::optional<std::string>& truth_column = std::nullopt);

/// Build a Dataset from an in-memory matrix. Column names default to v1..vp.
Dataset make_dataset(std::vector<double> values, std::size_t n, std::size_t p,
                     std::vector<std::string> column_names = {});

/// Replace every missing cell by the mean of its column's non-missing values.
/// Throws if a column is entirely missing.
Dataset impute_mean(const Dataset& d);

/// Standardize every column to sample mean 0 and sample variance 1
/// (denominator n-1). Throws on a constant column, naming it.
Dataset scale_zscore(const Dataset& d);

}  // namespace clusterval
