#include "gsmooth/bounds.hpp"
#include "gsmooth/error.hpp"
#include "gsmooth/experiments.hpp"
#include "gsmooth/gcnsim.hpp"
#include "gsmooth/graph.hpp"
#include "gsmooth/smoothness.hpp"
#include "gsmooth/spectral.hpp"
#include "gsmooth/synthgen.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

namespace py = pybind11;
using namespace gsmooth;

namespace {

Ordering ordering_from(const std::string& name) {
  if (name == "ascending") return Ordering::AscendingValue;
  if (name == "descending") return Ordering::DescendingValue;
  throw Error(ErrorCode::InvalidParameter, "ordering must be 'ascending' or 'descending'");
}

Variant variant_from(const std::string& name) {
  if (name == "plain") return Variant::Plain;
  if (name == "resgcn") return Variant::ResGcn;
  if (name == "appnp") return Variant::Appnp;
  if (name == "gcnii") return Variant::Gcnii;
  throw Error(ErrorCode::InvalidParameter, "unknown variant '" + name + "'");
}

ExperimentConfig config_for(const std::string& experiment, const std::string& overlay, bool desk) {
  ExperimentConfig base = desk ? desk_config(experiment) : default_config(experiment);
  ExperimentConfig c = overlay.empty() ? base : config_from_json(overlay, base);
  validate(c);
  return c;
}

std::vector<std::string> reports_json(const std::vector<BoundCheckReport>& reports) {
  std::vector<std::string> out;
  for (const auto& r : reports) out.push_back(to_json(r, -1));
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Compiled core of gsmooth";
  m.attr("__version__") = GSMOOTH_VERSION;

  static py::exception<Error> error_type(m, "GsmoothError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::object instance = py::reinterpret_borrow<py::object>(error_type)(e.what());
      instance.attr("code") = std::string(to_string(e.code()));
      py::set_error(error_type, instance);
    }
  });

  // graph
  py::class_<Graph>(m, "Graph")
      .def(py::init([](const Matrix& a) { return build_graph(a); }), py::arg("adjacency"))
      .def_property_readonly("num_nodes", &Graph::num_nodes)
      .def_property_readonly("adjacency", &Graph::adjacency)
      .def_property_readonly("degrees", &Graph::degrees);
  m.def("combinatorial_laplacian", &combinatorial_laplacian);
  m.def("normalized_laplacian", &normalized_laplacian);
  m.def("is_connected", &is_connected);
  m.def("load_graph", &load_graph, py::arg("path"));

  // synthgen
  m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("stream"));
  m.def("balanced_labels", &balanced_labels, py::arg("num_nodes"));
  m.def(
      "sample_sbm",
      [](int n, double p, double q, std::uint64_t seed, std::vector<int> labels) {
        SbmParams params;
        params.num_nodes = n;
        params.p_intra = p;
        params.q_inter = q;
        params.seed = seed;
        params.labels = labels.empty() ? balanced_labels(n) : std::move(labels);
        return sample_sbm(params);
      },
      py::arg("num_nodes"), py::arg("p") = 0.8, py::arg("q") = 0.3, py::arg("seed") = 0,
      py::arg("labels") = std::vector<int>{});
  m.def(
      "sample_gmm_features",
      [](const std::vector<int>& labels, const Vector& mean, double noise_std, std::uint64_t seed) {
        GmmParams params;
        params.mean = mean;
        params.num_channels = static_cast<int>(mean.size());
        params.noise_std = noise_std;
        params.seed = seed;
        return sample_gmm_features(labels, params);
      },
      py::arg("labels"), py::arg("mean"), py::arg("noise_std") = 10.0, py::arg("seed") = 0);
  m.def("sample_weight", &sample_weight, py::arg("rows"), py::arg("cols"),
        py::arg("frobenius"), py::arg("seed"));

  // spectral
  py::class_<SpectralDecomposition>(m, "SpectralDecomposition")
      .def_property_readonly("eigenvalues", &SpectralDecomposition::eigenvalues)
      .def_property_readonly("eigenvectors", &SpectralDecomposition::eigenvectors)
      .def_property_readonly("size", &SpectralDecomposition::size)
      .def("gap_ratio", &SpectralDecomposition::gap_ratio)
      .def("basis_dependent_directions", &SpectralDecomposition::basis_dependent_directions);
  m.def(
      "eigendecompose",
      [](const Matrix& op, const std::string& order) { return eigendecompose(op, ordering_from(order)); },
      py::arg("matrix"), py::arg("ordering") = "ascending");
  m.def("psd_decompose", &psd_decompose, py::arg("matrix"));
  m.def("gft", py::overload_cast<const SpectralDecomposition&, const Vector&>(&gft));
  m.def("igft", py::overload_cast<const SpectralDecomposition&, const Vector&>(&igft));
  m.def("project_pw", &project_pw, py::arg("d"), py::arg("n"), py::arg("f"));
  m.def("best_approx_error", &best_approx_error, py::arg("d"), py::arg("n"), py::arg("f"));
  m.def("high_freq_energy", &high_freq_energy, py::arg("d"), py::arg("signal"));
  m.def("direction_energies", &direction_energies, py::arg("d"), py::arg("signal"));

  // smoothness
  m.def("difference_norm", &difference_norm, py::arg("d"), py::arg("s"), py::arg("r"), py::arg("f"));
  m.def("operator_power_norm", &operator_power_norm, py::arg("d"), py::arg("p"), py::arg("f"));
  m.def(
      "modulus",
      [](const SpectralDecomposition& d, int r, double t, const Vector& f) {
        return modulus(d, r, t, f).value;
      },
      py::arg("d"), py::arg("r"), py::arg("t"), py::arg("f"));
  m.def(
      "k_functional",
      [](const SpectralDecomposition& d, int r, double t, const Vector& f) {
        return k_functional(d, r, t, f).value;
      },
      py::arg("d"), py::arg("r"), py::arg("t"), py::arg("f"));
  m.def("k_functional_oracle", &k_functional_oracle, py::arg("d"), py::arg("r"), py::arg("t"),
        py::arg("f"), py::arg("seed") = 0, py::arg("starts") = 10);
  m.def("multichannel_modulus", &multichannel_modulus);
  m.def("multichannel_k", &multichannel_k);
  m.def("jackson_constant", &constants::jackson);
  m.def("single_frequency_constant", &constants::single_frequency);

  // gcnsim
  py::class_<Filter>(m, "Filter")
      .def_property_readonly("kind", [](const Filter& f) { return to_string(f.kind); })
      .def_property_readonly("matrix", [](const Filter& f) { return f.matrix; })
      .def_property_readonly("eigenvalues", [](const Filter& f) { return f.decomposition.eigenvalues(); })
      .def_property_readonly("eigenvectors", [](const Filter& f) { return f.decomposition.eigenvectors(); })
      .def_property_readonly("mu_high", [](const Filter& f) { return f.mu_high; })
      .def_property_readonly("conjugated", &Filter::conjugated)
      .def("symmetric_coordinates", &Filter::symmetric_coordinates);
  m.def("filter_gcn", &build_filter_gcn, py::arg("graph"));
  m.def("filter_sym", &build_filter_sym, py::arg("graph"), py::arg("alpha") = 0.75);
  m.def("filter_rw", &build_filter_rw, py::arg("graph"), py::arg("alpha") = 0.75);
  m.def("filter_surgery", &build_filter_surgery, py::arg("base"), py::arg("a"));
  m.def("filter_custom", &build_filter_custom, py::arg("matrix"));
  m.def(
      "forward",
      [](const Filter& filter, const Matrix& input, const std::string& variant, int depth,
         double weight_frobenius, std::uint64_t seed, bool keep_outputs) {
        GcnConfig config;
        config.variant = variant_from(variant);
        config.depth = depth;
        config.weight_frobenius = weight_frobenius;
        config.seed = seed;
        config.keep_outputs = keep_outputs;
        const LayerTrace t = forward(config, filter, input);
        py::dict out;
        out["final_output"] = t.final_output;
        out["eh_per_layer"] = t.eh_per_layer;
        out["frobenius_norms"] = t.frobenius_norms;
        out["weight_norms"] = t.weight_norms;
        out["input_energy"] = t.input_energy;
        out["outputs"] = t.outputs;
        return out;
      },
      py::arg("filter"), py::arg("input"), py::arg("variant") = "plain", py::arg("depth") = 1,
      py::arg("weight_frobenius") = 1.0, py::arg("seed") = 0, py::arg("keep_outputs") = false);

  // bounds (reports cross the boundary as JSON text)
  m.def(
      "check_jackson",
      [](const SpectralDecomposition& d, const Vector& f, int r) { return to_json(check_jackson(d, f, r), -1); },
      py::arg("d"), py::arg("f"), py::arg("r"));
  m.def(
      "check_k_omega",
      [](const SpectralDecomposition& d, const Vector& f, int r, const std::vector<double>& t) {
        return to_json(check_k_omega(d, f, r, t), -1);
      },
      py::arg("d"), py::arg("f"), py::arg("r"), py::arg("t_grid"));
  m.def(
      "check_filter_spectrum",
      [](const Graph& g, const Filter& f) { return to_json(check_filter_spectrum(g, f), -1); });

  // experiments
  m.def(
      "resolve_config",
      [](const std::string& experiment, const std::string& overlay, bool desk) {
        return config_to_json(config_for(experiment, overlay, desk), true);
      },
      py::arg("experiment"), py::arg("overlay") = "", py::arg("desk") = false);
  m.def(
      "run_verify",
      [](const std::string& overlay, bool desk) {
        py::gil_scoped_release release;
        return reports_json(run_verify(config_for("verify", overlay, desk)).reports);
      },
      py::arg("overlay") = "", py::arg("desk") = false);
  m.def(
      "run_curves",
      [](const std::string& experiment, const std::string& overlay, bool desk) {
        const ExperimentConfig c = config_for(experiment, overlay, desk);
        CurveExperimentResult result;
        {
          py::gil_scoped_release release;
          if (experiment == "decay") {
            result = run_decay(c);
          } else if (experiment == "surgery") {
            result = run_surgery(c);
          } else {
            throw Error(ErrorCode::InvalidParameter, "run_curves handles decay and surgery");
          }
        }
        py::dict out;
        for (const auto& curve : result.curves) {
          py::dict entry;
          entry["mean_ln"] = curve.mean_ln;
          entry["stderr_ln"] = curve.stderr_ln;
          entry["count"] = curve.count;
          out[py::str(curve.label)] = entry;
        }
        return out;
      },
      py::arg("experiment"), py::arg("overlay") = "", py::arg("desk") = false);
  m.def(
      "run_skip",
      [](const std::string& overlay, bool desk) {
        const ExperimentConfig c = config_for("skip", overlay, desk);
        SkipResult result;
        {
          py::gil_scoped_release release;
          result = run_skip(c);
        }
        py::dict out;
        out["variants"] = result.variants;
        out["depths"] = result.depths;
        std::vector<std::vector<double>> medians(result.variants.size());
        for (std::size_t v = 0; v < result.variants.size(); ++v) {
          for (std::size_t d = 0; d < result.depths.size(); ++d) {
            medians[v].push_back(result.median(static_cast<int>(v), static_cast<int>(d)));
          }
        }
        out["median_ln_eh"] = medians;
        out["histogram"] = result.histogram;
        out["eigenvalues"] = result.eigenvalues;
        return out;
      },
      py::arg("overlay") = "", py::arg("desk") = false);
}
