#include "clusterval/partition.hpp"

#include <fstream>
#include <stdexcept>
#include <unordered_map>

namespace clusterval {

std::vector<std::vector<std::size_t>> Partition::clusters() const {
    std::vector<std::vector<std::size_t>> out(static_cast<std::size_t>(K));
    for (std::size_t k = 0; k < out.size(); ++k) out[k].reserve(sizes[k]);
    for (std::size_t i = 0; i < labels.size(); ++i)
        out[static_cast<std::size_t>(labels[i] - 1)].push_back(i);
    return out;
}

namespace {

template <typename T>
Partition relabel(const std::vector<T>& raw, std::size_t n) {
    if (raw.empty()) throw std::invalid_argument("partition: empty label vector");
    if (raw.size() != n)
        throw std::invalid_argument("partition: got " + std::to_string(raw.size()) +
                                    " labels, expected " + std::to_string(n));
    Partition p;
    p.labels.resize(n);
    std::unordered_map<T, int> seen;
    seen.reserve(raw.size());
    for (std::size_t i = 0; i < n; ++i) {
        auto [it, inserted] = seen.emplace(raw[i], p.K + 1);
        if (inserted) {
            ++p.K;
            p.sizes.push_back(0);
        }
        p.labels[i] = it->second;
        ++p.sizes[static_cast<std::size_t>(it->second - 1)];
    }
    return p;
}

}  // namespace

Partition validate_partition(const std::vector<long long>& raw, std::size_t n) {
    return relabel(raw, n);
}

Partition validate_partition(const std::vector<std::string>& raw, std::size_t n) {
    return relabel(raw, n);
}

Partition validate_partition(const std::vector<int>& raw, std::size_t n) {
    return relabel(raw, n);
}

std::vector<std::string> read_label_lines(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open partition file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        // trim surrounding blanks
        std::size_t b = line.find_first_not_of(" \t");
        std::size_t e = line.find_last_not_of(" \t");
        lines.push_back(b == std::string::npos ? std::string{} : line.substr(b, e - b + 1));
    }
    while (!lines.empty() && lines.back().empty()) lines.pop_back();
    for (std::size_t i = 0; i < lines.size(); ++i)
        if (lines[i].empty())
            throw std::runtime_error(path + ": blank label on line " + std::to_string(i + 1));
    return lines;
}

}  // namespace clusterval
