#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "derec/correlation.hpp"
#include "derec/csv.hpp"
#include "derec/datagen.hpp"
#include "derec/error.hpp"
#include "derec/io.hpp"
#include "derec/pipeline.hpp"
#include "derec/plotdata.hpp"
#include "derec/simpro.hpp"
#include "derec/stats.hpp"
#include "derec/synth.hpp"
#include "derec/table.hpp"

namespace py = pybind11;
using namespace derec;

namespace {

SynthesizerSpec make_spec(const std::string& method, std::uint64_t seed,
                          const std::string& exchange_dir, double poll_seconds,
                          double timeout_seconds) {
    SynthesizerSpec spec;
    spec.method = synth_method_from_name(method);
    spec.seed = seed;
    spec.exchange_dir = exchange_dir;
    spec.poll_seconds = poll_seconds;
    spec.timeout_seconds = timeout_seconds;
    return spec;
}

}  // namespace

PYBIND11_MODULE(_derec, m) {
    m.doc() = "decoupled tabular synthesis toolkit";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            if (e.family() == ErrorFamily::Input) {
                PyErr_SetString(PyExc_ValueError, e.what());
            } else {
                PyErr_SetString(PyExc_RuntimeError, e.what());
            }
        }
    });

    py::class_<Schema>(m, "Schema")
        .def_static(
            "from_json_text",
            [](const std::string& text) { return schema_from_json_text(text, "text"); },
            py::arg("text"))
        .def_property_readonly("identifier", [](const Schema& s) { return s.identifier; })
        .def_property_readonly("column_names",
                               [](const Schema& s) {
                                   std::vector<std::string> names;
                                   for (const auto& c : s.columns) names.push_back(c.name);
                                   return names;
                               })
        .def("to_json_text", &schema_to_json_text);

    py::class_<DataTable>(m, "DataTable")
        .def_static(
            "from_csv_text",
            [](const std::string& text, const Schema& schema) {
                return table_from_csv_text(text, schema, "text");
            },
            py::arg("text"), py::arg("schema"))
        .def_property_readonly("num_rows", &DataTable::num_rows)
        .def_property_readonly("num_cols", &DataTable::num_cols)
        .def_property_readonly("num_subjects", &DataTable::num_subjects)
        .def_property_readonly("subject_order", &DataTable::subject_order)
        .def_property_readonly("schema", &DataTable::schema)
        .def("to_csv_text", &table_to_csv_text);

    py::class_<DerecBundle>(m, "DerecBundle")
        .def_property_readonly("parent", [](const DerecBundle& b) { return b.parent; })
        .def_property_readonly("child_tags",
                               [](const DerecBundle& b) {
                                   std::vector<std::string> tags;
                                   for (const auto& [tag, child] : b.children)
                                       tags.push_back(tag);
                                   return tags;
                               })
        .def(
            "child",
            [](const DerecBundle& b, const std::string& tag) -> py::object {
                const DataTable* child = b.child(tag);
                if (child == nullptr) return py::none();
                return py::cast(*child);
            },
            py::arg("tag"))
        .def("partition_json",
             [](const DerecBundle& b) { return partition_to_json_text(b.partition); });

    m.def("load_schema", [](const std::string& path) { return load_schema(path); },
          py::arg("path"));
    m.def("save_schema",
          [](const std::string& path, const Schema& s) { save_schema(path, s); },
          py::arg("path"), py::arg("schema"));
    m.def("load_csv", [](const std::string& path, const Schema& s) { return load_csv(path, s); },
          py::arg("path"), py::arg("schema"));
    m.def("save_csv", [](const std::string& path, const DataTable& t) { save_csv(path, t); },
          py::arg("path"), py::arg("table"));

    m.def("run_derec", &run_derec, py::arg("a"), py::arg("b"), py::arg("threshold") = 0.95);
    m.def(
        "detect",
        [](const DataTable& t, double threshold, const std::string& tag) {
            py::list out;
            for (const auto& v : detect(t, threshold, tag).columns) {
                py::dict d;
                d["name"] = v.name;
                d["fraction"] = v.fraction;
                d["contextual"] = v.contextual;
                out.append(d);
            }
            return out;
        },
        py::arg("table"), py::arg("threshold") = 0.95, py::arg("tag") = "a");
    m.def("reassemble", &reassemble, py::arg("bundle"));
    m.def("save_bundle",
          [](const std::string& dir, const DerecBundle& b) { save_bundle(dir, b); },
          py::arg("dir"), py::arg("bundle"));
    m.def("load_bundle", [](const std::string& dir) { return load_bundle(dir); },
          py::arg("dir"));

    m.def(
        "synthesize",
        [](const DerecBundle& bundle, const std::string& method, std::uint64_t seed,
           const std::string& exchange_dir, double poll_seconds, double timeout_seconds) {
            return synthesize(bundle,
                              make_spec(method, seed, exchange_dir, poll_seconds,
                                        timeout_seconds));
        },
        py::arg("bundle"), py::arg("method") = "independent", py::arg("seed") = 0,
        py::arg("exchange_dir") = "", py::arg("poll_seconds") = 0.5,
        py::arg("timeout_seconds") = 60.0);

    m.def(
        "evaluate_json",
        [](const DerecBundle& orig, const DerecBundle& syn, const std::string& label, int bins,
           int threads) { return report_to_json_text(evaluate(orig, syn, label, bins, threads)); },
        py::arg("original"), py::arg("synthetic"), py::arg("label") = "synthetic",
        py::arg("bins") = 10, py::arg("threads") = 1);
    m.def(
        "compare_json",
        [](const std::string& report_a, const std::string& report_b, double t_p,
           const std::string& w_threshold_mode) {
            auto a = report_from_json_text(report_a, "report_a");
            auto b = report_from_json_text(report_b, "report_b");
            return comparison_to_json_text(
                compare(a, b, t_p, w_threshold_mode_from_name(w_threshold_mode)));
        },
        py::arg("report_a"), py::arg("report_b"), py::arg("t_p") = 0.333,
        py::arg("w_threshold_mode") = "abs-delta");

    m.def(
        "generate",
        [](const std::string& spec_json) {
            auto result = generate(gen_spec_from_json_text(spec_json, "spec"));
            return py::make_tuple(result.a, result.b, truth_to_json_text(result.truth));
        },
        py::arg("spec_json"));
    m.def(
        "disturbance_fixture",
        [](std::uint64_t seed, int subjects) {
            GenSpec spec;
            spec.seed = seed;
            spec.subjects = subjects;
            return contextual_disturbance_fixture(spec);
        },
        py::arg("seed") = 0, py::arg("subjects") = 10);

    m.def(
        "ks_two_sample",
        [](const std::vector<double>& x, const std::vector<double>& y) {
            auto r = ks_two_sample(x, y);
            return py::make_tuple(r.d, r.p);
        },
        py::arg("x"), py::arg("y"));
    m.def("wasserstein", &wasserstein_samples, py::arg("x"), py::arg("y"));

    m.def(
        "plot_report_files",
        [](const std::string& report_json, const std::string& out_dir) {
            auto report = report_from_json_text(report_json, "report");
            std::vector<std::string> written;
            for (const auto& path : write_plot_series(plot_report(report), out_dir)) {
                written.push_back(path.string());
            }
            return written;
        },
        py::arg("report_json"), py::arg("out_dir"));
    m.def(
        "plot_comparison_files",
        [](const std::string& comparison_json, const std::string& out_dir) {
            auto cmp = comparison_from_json_text(comparison_json, "comparison");
            std::vector<std::string> written;
            for (const auto& path : write_plot_series(plot_comparison(cmp), out_dir)) {
                written.push_back(path.string());
            }
            return written;
        },
        py::arg("comparison_json"), py::arg("out_dir"));
}
