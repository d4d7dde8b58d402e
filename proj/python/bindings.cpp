#include "esmm/cases.hpp"
#include "esmm/ecflux.hpp"
#include "esmm/eigdissip.hpp"
#include "esmm/io.hpp"
#include "esmm/wenomr.hpp"

#include <pybind11/functional.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace esmm;

namespace {

using DVec = std::vector<double>;

DVec to_std(const Vec& v) { return DVec(v.data(), v.data() + v.size()); }

Vec to_vec(const DVec& v) {
  Vec o(static_cast<Eigen::Index>(v.size()));
  for (size_t q = 0; q < v.size(); ++q) o[q] = v[q];
  return o;
}

EosSpec eos_from(const std::vector<std::tuple<double, double, double>>& sp) {
  std::vector<Species> s;
  for (const auto& [g, cv, pinf] : sp) s.push_back({g, cv, pinf});
  return EosSpec(s);
}

py::dict prim_dict(const Primitive& w) {
  py::dict d;
  d["rho"] = DVec(w.rho.begin(), w.rho.begin() + w.nspecies);
  d["v"] = DVec(w.v.begin(), w.v.begin() + w.dim);
  d["p"] = w.p;
  d["T"] = w.T;
  return d;
}

DirectedMetric metric_from(double mt, const DVec& m) {
  DirectedMetric dm;
  dm.mt = mt;
  for (size_t j = 0; j < m.size() && j < 3; ++j) dm.m[j] = m[j];
  return dm;
}

MRWeights weights_from(const std::optional<std::array<double, 3>>& chi, std::optional<double> eps) {
  MRWeights w;
  if (chi) w.chi = *chi;
  if (eps) w.eps = *eps;
  w.validate();
  return w;
}

std::array<double, 5> window(const DVec& v) {
  if (v.size() != 5) throw py::value_error("a window of five values is required");
  return {v[0], v[1], v[2], v[3], v[4]};
}

py::array_t<double> to_array(const Mat& m) {
  py::array_t<double> a({m.rows(), m.cols()});
  auto r = a.mutable_unchecked<2>();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) r(i, j) = m(i, j);
  return a;
}

py::dict record_dict(const StepRecord& r) {
  py::dict d;
  d["step"] = r.step;
  d["t"] = r.t;
  d["dt"] = r.dt;
  d["entropy"] = r.entropy;
  d["balance"] = r.balance();
  d["min_rho"] = r.min_rho;
  d["min_p_plus_pinf"] = r.min_pp;
  d["min_J"] = r.min_J;
  return d;
}

// Solver plus the manifest it was built from
class PySolver {
 public:
  explicit PySolver(const std::string& manifest_json)
      : m_(manifest_from_json(nlohmann::json::parse(manifest_json))), s_(resolved_case(m_), m_.config) {}

  std::string manifest() const { return to_json(m_).dump(); }
  double time() const { return s_.time(); }
  long steps() const { return s_.steps(); }
  py::dict advance(double t_stop) { return record_dict(s_.advance(t_stop)); }
  void step(double dt) { s_.step_ssprk3(dt); }
  py::list run() {
    py::list out;
    const Diagnostics d = s_.run();
    for (const auto& r : d.steps) out.append(record_dict(r));
    return out;
  }
  double total_entropy() const { return s_.total_entropy(); }
  double entropy_scale() const { return s_.entropy_scale(); }
  std::pair<double, double> density_error() const {
    const ErrorNorms e = s_.density_error();
    return {e.l1, e.linf};
  }

  // node arrays shaped (n1, n2[, n3], ncomp)
  py::array_t<double> coordinates() const { return node_array(s_.lattice().dim, [&](const Index3& p, int c) {
      return s_.mesh().x.at(p)[c];
    }); }
  py::array_t<double> conserved() const {
    const Field U = s_.current_state();
    return node_array(U.ncomp(), [&](const Index3& p, int c) { return U.at(p)[c]; });
  }
  py::array_t<double> jacobian() const {
    return node_array(1, [&](const Index3& p, int) { return s_.J().at(p)[0]; });
  }
  py::dict primitive(int i, int j, int k) const { return prim_dict(s_.primitive_at(i, j, k)); }
  void write_vtk(const std::string& path, const std::string& title) const {
    esmm::write_vtk(path, snapshot_of(s_), title);
  }

 private:
  template <class F>
  py::array_t<double> node_array(int nc, F&& f) const {
    const Lattice& lat = s_.lattice();
    std::vector<py::ssize_t> shape;
    for (int d = 0; d < lat.dim; ++d) shape.push_back(lat.n[d]);
    shape.push_back(nc);
    py::array_t<double> a(shape);
    double* out = a.mutable_data();
    // C order, so a[i, j] is node (i, j)
    std::vector<py::ssize_t> st(shape.size());
    st.back() = 1;
    for (int q = static_cast<int>(shape.size()) - 2; q >= 0; --q) st[q] = st[q + 1] * shape[q + 1];
    for_interior(lat, [&](int i, int j, int k) {
      const Index3 p{i, j, k};
      py::ssize_t off = i * st[0] + j * st[1] + (lat.dim == 3 ? k * st[2] : 0);
      for (int c = 0; c < nc; ++c) out[off + c] = f(p, c);
    });
    return a;
  }

  RunManifest m_;
  Solver s_;
};

}  // namespace

PYBIND11_MODULE(_esmm, mod) {
  mod.doc() = "entropy-stable moving-mesh solver core";
  mod.attr("__version__") = kVersion;

  // translators run newest first, so the base class goes in first
  py::register_exception<Error>(mod, "Error", PyExc_RuntimeError);
  py::register_exception<ConfigError>(mod, "ConfigError", PyExc_ValueError);
  py::register_exception<AdmissibilityError>(mod, "AdmissibilityError", PyExc_ArithmeticError);

  using SpecList = std::vector<std::tuple<double, double, double>>;

  mod.def("nvars", &nvars, py::arg("nspecies"), py::arg("dim"));
  mod.def(
      "prim_to_cons",
      [](const SpecList& sp, const DVec& rho, const DVec& v, double p) {
        const EosSpec eos = eos_from(sp);
        return to_std(prim_to_cons(make_primitive(rho, v, p, eos), eos));
      },
      py::arg("species"), py::arg("rho"), py::arg("v"), py::arg("p"));
  mod.def(
      "cons_to_prim",
      [](const SpecList& sp, const DVec& U, int dim) {
        const EosSpec eos = eos_from(sp);
        if (static_cast<int>(U.size()) != nvars(eos.nspecies(), dim)) throw py::value_error("state length mismatch");
        return prim_dict(cons_to_prim(to_vec(U), eos));
      },
      py::arg("species"), py::arg("U"), py::arg("dim"));
  mod.def(
      "entropy_variables",
      [](const SpecList& sp, const DVec& rho, const DVec& v, double p) {
        const EosSpec eos = eos_from(sp);
        return to_std(entropy_variables(make_primitive(rho, v, p, eos), eos));
      },
      py::arg("species"), py::arg("rho"), py::arg("v"), py::arg("p"));
  mod.def(
      "entropy_density",
      [](const SpecList& sp, const DVec& rho, const DVec& v, double p) {
        const EosSpec eos = eos_from(sp);
        return entropy_density(make_primitive(rho, v, p, eos), eos);
      },
      py::arg("species"), py::arg("rho"), py::arg("v"), py::arg("p"));
  mod.def(
      "physical_flux",
      [](const SpecList& sp, const DVec& U, int k) { return to_std(physical_flux(to_vec(U), k, eos_from(sp))); },
      py::arg("species"), py::arg("U"), py::arg("k"));

  mod.def("log_mean", &log_mean, py::arg("a"), py::arg("b"));
  mod.def(
      "alpha_coeffs",
      [](int w) {
        const AlphaCoeffs a = alpha_coeffs(w);
        return DVec(a.a.begin(), a.a.begin() + w);
      },
      py::arg("w"));
  mod.def(
      "ec_flux",
      [](const SpecList& sp, const DVec& Ul, const DVec& Ur, double mt_l, const DVec& m_l, double mt_r,
         const DVec& m_r) {
        return to_std(ec_flux_curvilinear(to_vec(Ul), to_vec(Ur), metric_from(mt_l, m_l), metric_from(mt_r, m_r),
                                          eos_from(sp)));
      },
      py::arg("species"), py::arg("Ul"), py::arg("Ur"), py::arg("mt_l"), py::arg("m_l"), py::arg("mt_r"),
      py::arg("m_r"));

  mod.def(
      "reconstruct_right",
      [](const DVec& W, std::optional<std::array<double, 3>> chi, std::optional<double> eps) {
        return reconstruct_right(window(W), weights_from(chi, eps));
      },
      py::arg("W"), py::arg("chi") = py::none(), py::arg("eps") = py::none());
  mod.def(
      "reconstruct_left",
      [](const DVec& W, std::optional<std::array<double, 3>> chi, std::optional<double> eps) {
        return reconstruct_left(window(W), weights_from(chi, eps));
      },
      py::arg("W"), py::arg("chi") = py::none(), py::arg("eps") = py::none());
  mod.def(
      "interface_jump",
      [](const DVec& left, const DVec& right, std::optional<std::array<double, 3>> chi, std::optional<double> eps) {
        return interface_jump(window(left), window(right), weights_from(chi, eps));
      },
      py::arg("left"), py::arg("right"), py::arg("chi") = py::none(), py::arg("eps") = py::none());

  mod.def(
      "scaled_eigenvectors",
      [](const SpecList& sp, const DVec& rho, const DVec& v, double p) {
        const EosSpec eos = eos_from(sp);
        const Primitive w = make_primitive(rho, v, p, eos);
        return to_array(scaled_eigensystem(interface_average(w, w, eos), eos).R);
      },
      py::arg("species"), py::arg("rho"), py::arg("v"), py::arg("p"));

  mod.def("case_names", &case_names);
  mod.def(
      "resolve_config",
      [](const std::string& text) { return to_json(manifest_from_json(nlohmann::json::parse(text))).dump(); },
      py::arg("config_json"));

  py::class_<PySolver>(mod, "Solver")
      .def(py::init<const std::string&>(), py::arg("manifest_json"))
      .def_property_readonly("time", &PySolver::time)
      .def_property_readonly("steps", &PySolver::steps)
      .def("manifest", &PySolver::manifest)
      .def("advance", &PySolver::advance, py::arg("t_stop"))
      .def("step", &PySolver::step, py::arg("dt"), py::call_guard<py::gil_scoped_release>())
      .def("run", &PySolver::run)
      .def("total_entropy", &PySolver::total_entropy)
      .def("entropy_scale", &PySolver::entropy_scale)
      .def("density_error", &PySolver::density_error)
      .def("coordinates", &PySolver::coordinates)
      .def("conserved", &PySolver::conserved)
      .def("jacobian", &PySolver::jacobian)
      .def("primitive", &PySolver::primitive, py::arg("i"), py::arg("j"), py::arg("k") = 0)
      .def("write_vtk", &PySolver::write_vtk, py::arg("path"), py::arg("title") = "esmm");
}
