#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "clusterval/external.hpp"
#include "clusterval/harness.hpp"

namespace py = pybind11;
using namespace clusterval;

namespace {

py::array_t<double> values_array(const Dataset& d) {
    py::array_t<double> out({d.n, d.p});
    std::copy(d.values.begin(), d.values.end(), out.mutable_data());
    return out;
}

Dataset dataset_from_array(py::array_t<double, py::array::c_style | py::array::forcecast> arr,
                           std::optional<std::vector<std::string>> column_names) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2-D array");
    const auto n = static_cast<std::size_t>(arr.shape(0));
    const auto p = static_cast<std::size_t>(arr.shape(1));
    std::vector<double> values(arr.data(), arr.data() + n * p);
    return make_dataset(std::move(values), n, p, column_names.value_or(std::vector<std::string>{}));
}

Partition partition_from_labels(const std::vector<long long>& labels) {
    return validate_partition(labels, labels.size());
}

py::dict index_vector_dict(const InternalIndexVector& v) {
    py::dict out;
    for (const auto name : kInternalIndexNames) {
        const auto value = v.get(name);
        out[py::str(std::string(name))] = value ? py::object(py::float_(*value)) : py::none();
    }
    py::dict failures;
    for (const auto& [name, msg] : v.failures) failures[py::str(name)] = msg;
    out["failures"] = failures;
    return out;
}

py::dict external_dict(const ContingencyTable& t) {
    const double v = vi(t);
    const BCubedResult b = bcubed(t);
    py::dict out;
    out["ari"] = ari(t);
    out["vi"] = v;
    out["neg_vi"] = -v;
    out["bcubed_p"] = b.precision;
    out["bcubed_r"] = b.recall;
    out["bcubed_f"] = b.f;
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Calibrated cluster validation indexes and benchmark pipeline";

    py::class_<Partition>(m, "Partition")
        .def(py::init(&partition_from_labels), py::arg("labels"))
        .def_readonly("labels", &Partition::labels)
        .def_readonly("K", &Partition::K)
        .def_readonly("sizes", &Partition::sizes)
        .def("__len__", [](const Partition& p) { return p.n(); })
        .def("__repr__", [](const Partition& p) {
            return "Partition(n=" + std::to_string(p.n()) + ", K=" + std::to_string(p.K) + ")";
        });

    py::class_<Dataset>(m, "Dataset")
        .def_property_readonly("values", &values_array)
        .def_readonly("column_names", &Dataset::column_names)
        .def_property_readonly("truth",
                               [](const Dataset& d) -> py::object {
                                   if (!d.truth) return py::none();
                                   return py::cast(*d.truth);
                               })
        .def_readonly("n", &Dataset::n)
        .def_readonly("p", &Dataset::p)
        .def_readonly("preprocessing", &Dataset::preprocessing)
        .def("has_missing", &Dataset::has_missing)
        .def("__repr__", [](const Dataset& d) {
            return "Dataset(n=" + std::to_string(d.n) + ", p=" + std::to_string(d.p) + ")";
        });

    py::class_<DistanceMatrix>(m, "DistanceMatrix")
        .def_readonly("n", &DistanceMatrix::n)
        .def_property_readonly("condensed",
                               [](const DistanceMatrix& dm) {
                                   py::array_t<double> out(dm.entries.size());
                                   std::copy(dm.entries.begin(), dm.entries.end(),
                                             out.mutable_data());
                                   return out;
                               })
        .def("__call__", [](const DistanceMatrix& dm, std::size_t i, std::size_t j) {
            if (i >= dm.n || j >= dm.n) throw std::out_of_range("index out of range");
            return dm(i, j);
        });

    py::class_<Dendrogram>(m, "Dendrogram")
        .def_readonly("leaf_count", &Dendrogram::leaf_count)
        .def_property_readonly("merges", [](const Dendrogram& dg) {
            py::list out;
            for (const auto& s : dg.merges) out.append(py::make_tuple(s.left, s.right, s.height));
            return out;
        });

    py::class_<ClusteringResult>(m, "ClusteringResult")
        .def_readonly("partition", &ClusteringResult::partition)
        .def_readonly("method_name", &ClusteringResult::method_name)
        .def_property_readonly("objective",
                               [](const ClusteringResult& r) -> py::object {
                                   if (!r.objective) return py::none();
                                   return py::float_(*r.objective);
                               })
        .def_readonly("seed_used", &ClusteringResult::seed_used);

    m.def("load_csv", &load_csv, py::arg("path"), py::arg("truth_column") = std::nullopt,
          "Parse a CSV file (header required); empty cells and NA are missing values.");
    m.def("dataset", &dataset_from_array, py::arg("values"), py::arg("column_names") = std::nullopt,
          "Dataset from a 2-D array.");
    m.def("impute_mean", &impute_mean, py::arg("dataset"));
    m.def("scale_zscore", &scale_zscore, py::arg("dataset"));
    m.def("euclidean_distances", &euclidean_distances, py::arg("dataset"));
    m.def("validate_partition", &partition_from_labels, py::arg("labels"));

    m.def("kmeans", &kmeans, py::arg("dataset"), py::arg("k"), py::arg("restarts") = 10,
          py::arg("seed") = 0, py::call_guard<py::gil_scoped_release>());
    m.def("pam", &pam, py::arg("distances"), py::arg("k"), py::arg("seed") = 0,
          py::call_guard<py::gil_scoped_release>());
    m.def(
        "hclust",
        [](const DistanceMatrix& dm, const std::string& linkage) {
            return hclust(dm, linkage_from_name(linkage));
        },
        py::arg("distances"), py::arg("linkage"), py::call_guard<py::gil_scoped_release>());
    m.def("cut", &cut, py::arg("dendrogram"), py::arg("k"));
    m.def("ingest_partition", &ingest_partition, py::arg("path"), py::arg("n"),
          py::arg("method_name") = "");

    m.def(
        "internal_indexes",
        [](const Dataset& d, const DistanceMatrix& dm, const Partition& c, double sindex_p,
           double kernel_p, int cvnnd_k) {
            IndexParams params{sindex_p, kernel_p, cvnnd_k};
            return index_vector_dict(all_internal(d, dm, c, params));
        },
        py::arg("dataset"), py::arg("distances"), py::arg("partition"), py::arg("sindex_p") = 0.1,
        py::arg("kernel_p") = 0.1, py::arg("cvnnd_k") = 2,
        "All raw internal index values as a dict; unavailable indexes are None.");

    m.def(
        "generate_ensemble",
        [](const DistanceMatrix& dm, int k, int per_algorithm, std::uint64_t seed) {
            return generate_ensemble(dm, EnsembleSpec{per_algorithm, k, seed});
        },
        py::arg("distances"), py::arg("k"), py::arg("per_algorithm") = 50, py::arg("seed") = 0,
        py::call_guard<py::gil_scoped_release>());

    m.def(
        "calibrate",
        [](const std::vector<double>& method_values, const std::vector<double>& ensemble_values,
           const std::string& orientation) {
            Orientation o;
            if (orientation == "larger_better")
                o = Orientation::larger_better;
            else if (orientation == "smaller_better")
                o = Orientation::smaller_better;
            else
                throw std::invalid_argument("orientation must be larger_better or smaller_better");
            py::list out;
            for (const auto& c : calibrate(method_values, ensemble_values, o)) {
                py::dict d;
                d["raw"] = c.raw;
                d["calibrated"] = c.calibrated;
                d["pool_mean"] = c.pool_mean;
                d["pool_sd"] = c.pool_sd;
                out.append(d);
            }
            return out;
        },
        py::arg("method_values"), py::arg("ensemble_values"), py::arg("orientation"));
    m.def("dmode_aggregate", &dmode_aggregate, py::arg("densdec_star"), py::arg("highdgap_star"));

    m.def(
        "external_indexes",
        [](const std::vector<long long>& truth, const std::vector<long long>& pred) {
            const Partition a = validate_partition(truth, truth.size());
            const Partition b = validate_partition(pred, truth.size());
            return external_dict(contingency(a, b));
        },
        py::arg("truth"), py::arg("pred"),
        "ARI, VI (and -VI), and BCubed between two label vectors.");
    m.def(
        "external_indexes_from_table",
        [](const std::vector<std::vector<long long>>& counts) {
            return external_dict(contingency_from_counts(counts));
        },
        py::arg("counts"), "External indexes from a truth x prediction contingency table.");

    m.def(
        "run_benchmark",
        [](const std::string& config_path, const std::string& out_dir,
           std::optional<std::uint64_t> seed, std::optional<int> threads) {
            BenchmarkConfig cfg = load_config(config_path);
            if (seed) cfg.master_seed = *seed;
            if (threads) cfg.threads = *threads;
            const BenchmarkOutcome outcome = run_benchmark(cfg);
            emit_reports(outcome, cfg,
                         out_dir.empty() ? (cfg.output_dir.empty() ? "clusterval_out"
                                                                   : cfg.output_dir)
                                         : out_dir);
            py::dict out;
            out["datasets"] = outcome.runs.size();
            py::dict errs;
            for (const auto& [id, msg] : outcome.dataset_errors) errs[py::str(id)] = msg;
            out["errors"] = errs;
            return out;
        },
        py::arg("config_path"), py::arg("out_dir") = "", py::arg("seed") = std::nullopt,
        py::arg("threads") = std::nullopt,
        "Run the full pipeline from a JSON config and write the report files.");
}
