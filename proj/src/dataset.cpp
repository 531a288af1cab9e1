#include "clusterval/dataset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace clusterval {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return {};
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

bool is_missing_token(const std::string& s) {
    if (s.empty()) return true;
    if (s.size() != 2) return false;
    return std::toupper(static_cast<unsigned char>(s[0])) == 'N' &&
           std::toupper(static_cast<unsigned char>(s[1])) == 'A';
}

// Split one CSV record. Double quotes delimit fields; "" inside a quoted
// field is a literal quote. Unquoted fields are trimmed.
std::vector<std::string> split_csv_record(const std::string& line, std::size_t lineno) {
    std::vector<std::string> fields;
    std::string cur;
    bool in_quotes = false;
    bool was_quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') {
                    cur += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                cur += c;
            }
        } else if (c == '"' && trim(cur).empty() && !was_quoted) {
            in_quotes = true;
            was_quoted = true;
            cur.clear();
        } else if (c == ',') {
            fields.push_back(was_quoted ? cur : trim(cur));
            cur.clear();
            was_quoted = false;
        } else {
            cur += c;
        }
    }
    if (in_quotes)
        throw std::runtime_error("unterminated quote on line " + std::to_string(lineno));
    fields.push_back(was_quoted ? cur : trim(cur));
    return fields;
}

double parse_cell(const std::string& s, std::size_t lineno, const std::string& col) {
    double v = 0.0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || ptr != last)
        throw std::runtime_error("non-numeric value '" + s + "' in column '" + col +
                                 "' on line " + std::to_string(lineno));
    if (!std::isfinite(v))
        throw std::runtime_error("non-finite value in column '" + col + "' on line " +
                                 std::to_string(lineno));
    return v;
}

}  // namespace

bool Dataset::has_missing() const {
    return std::any_of(values.begin(), values.end(), [](double v) { return std::isnan(v); });
}

Dataset make_dataset(std::vector<double> values, std::size_t n, std::size_t p,
                     std::vector<std::string> column_names) {
    if (n < 2 || p < 1) throw std::invalid_argument("dataset requires n >= 2 and p >= 1");
    if (values.size() != n * p) throw std::invalid_argument("dataset: value count != n*p");
    Dataset d;
    d.values = std::move(values);
    d.n = n;
    d.p = p;
    if (column_names.empty()) {
        for (std::size_t j = 0; j < p; ++j) column_names.push_back("v" + std::to_string(j + 1));
    } else if (column_names.size() != p) {
        throw std::invalid_argument("dataset: column name count != p");
    }
    d.column_names = std::move(column_names);
    return d;
}

Dataset load_csv(const std::string& path, const std::optional<std::string>& truth_column) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open CSV file: " + path);

    std::vector<std::string> raw_lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        raw_lines.push_back(line);
    }
    while (!raw_lines.empty() && trim(raw_lines.back()).empty()) raw_lines.pop_back();
    if (raw_lines.size() < 2)
        throw std::runtime_error(path + ": need a header row and at least one data row");

    std::vector<std::string> header = split_csv_record(raw_lines[0], 1);
    const std::size_t ncol = header.size();

    // Resolve the truth column: by name first, then as a 1-based position.
    std::ptrdiff_t truth_idx = -1;
    if (truth_column) {
        auto it = std::find(header.begin(), header.end(), *truth_column);
        if (it != header.end()) {
            truth_idx = it - header.begin();
        } else {
            std::size_t pos = 0;
            auto [ptr, ec] = std::from_chars(truth_column->data(),
                                             truth_column->data() + truth_column->size(), pos);
            if (ec == std::errc{} && ptr == truth_column->data() + truth_column->size() &&
                pos >= 1 && pos <= ncol) {
                truth_idx = static_cast<std::ptrdiff_t>(pos - 1);
            } else {
                throw std::runtime_error(path + ": truth column '" + *truth_column +
                                         "' not found");
            }
        }
    }

    const std::size_t p = ncol - (truth_idx >= 0 ? 1 : 0);
    if (p < 1) throw std::runtime_error(path + ": no feature columns left");
    const std::size_t n = raw_lines.size() - 1;
    if (n < 2) throw std::runtime_error(path + ": need at least two data rows");

    Dataset d;
    d.n = n;
    d.p = p;
    d.values.resize(n * p);
    for (std::size_t j = 0; j < ncol; ++j)
        if (static_cast<std::ptrdiff_t>(j) != truth_idx) d.column_names.push_back(header[j]);

    std::vector<std::string> truth_raw;
    if (truth_idx >= 0) truth_raw.reserve(n);

    for (std::size_t r = 0; r < n; ++r) {
        const std::size_t lineno = r + 2;
        std::vector<std::string> fields = split_csv_record(raw_lines[r + 1], lineno);
        if (fields.size() != ncol)
            throw std::runtime_error(path + ": line " + std::to_string(lineno) + " has " +
                                     std::to_string(fields.size()) + " fields, expected " +
                                     std::to_string(ncol));
        std::size_t out_j = 0;
        for (std::size_t j = 0; j < ncol; ++j) {
            if (static_cast<std::ptrdiff_t>(j) == truth_idx) {
                if (is_missing_token(fields[j]))
                    throw std::runtime_error(path + ": missing truth label on line " +
                                             std::to_string(lineno));
                truth_raw.push_back(fields[j]);
            } else {
                d.values[r * p + out_j] = is_missing_token(fields[j])
                                              ? kNaN
                                              : parse_cell(fields[j], lineno, d.column_names[out_j]);
                ++out_j;
            }
        }
    }

    if (truth_idx >= 0) {
        Partition t = validate_partition(truth_raw, n);
        if (t.K < 2)
            throw std::runtime_error(path + ": truth column has a single distinct value");
        d.truth_class_names.resize(static_cast<std::size_t>(t.K));
        for (std::size_t i = 0; i < n; ++i) {
            auto& name = d.truth_class_names[static_cast<std::size_t>(t.labels[i] - 1)];
            if (name.empty()) name = truth_raw[i];
        }
        d.truth = std::move(t);
    }
    return d;
}

Dataset impute_mean(const Dataset& d) {
    Dataset out = d;
    bool imputed = false;
    for (std::size_t j = 0; j < d.p; ++j) {
        double sum = 0.0;
        std::size_t cnt = 0;
        for (std::size_t i = 0; i < d.n; ++i) {
            double v = d(i, j);
            if (!std::isnan(v)) {
                sum += v;
                ++cnt;
            }
        }
        if (cnt == d.n) continue;
        if (cnt == 0)
            throw std::runtime_error("impute_mean: column '" + d.column_names[j] +
                                     "' is entirely missing");
        const double mean = sum / static_cast<double>(cnt);
        for (std::size_t i = 0; i < d.n; ++i)
            if (std::isnan(out(i, j))) out(i, j) = mean;
        imputed = true;
    }
    if (imputed) out.preprocessing.push_back("impute_mean");
    return out;
}

Dataset scale_zscore(const Dataset& d) {
    if (d.has_missing())
        throw std::invalid_argument("scale_zscore: dataset has missing values; impute first");
    Dataset out = d;
    for (std::size_t j = 0; j < d.p; ++j) {
        double sum = 0.0;
        for (std::size_t i = 0; i < d.n; ++i) sum += d(i, j);
        const double mean = sum / static_cast<double>(d.n);
        double ss = 0.0;
        for (std::size_t i = 0; i < d.n; ++i) {
            const double c = d(i, j) - mean;
            ss += c * c;
        }
        const double var = ss / static_cast<double>(d.n - 1);
        if (var <= 0.0)
            throw std::runtime_error("scale_zscore: column '" + d.column_names[j] +
                                     "' is constant");
        const double sd = std::sqrt(var);
        for (std::size_t i = 0; i < d.n; ++i) out(i, j) = (d(i, j) - mean) / sd;
    }
    out.preprocessing.push_back("scale_zscore");
    return out;
}

}  // namespace clusterval
