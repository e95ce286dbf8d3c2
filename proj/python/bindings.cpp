#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "ylab/functional.hpp"
#include "ylab/product.hpp"
#include "ylab/scan.hpp"
#include "ylab/sphere.hpp"
#include "ylab/statics.hpp"

namespace py = pybind11;
using namespace ylab;

namespace {

py::dict record_dict(const ScanRecord& r) {
  py::dict d;
  d["t"] = r.t;
  d["s"] = r.scalar;
  d["lambda1"] = r.lambda1;
  d["threshold"] = r.threshold;
  d["classification"] = to_string(r.classification);
  d["energy"] = r.eh_energy;
  if (r.minimizer_estimate) d["estimate"] = *r.minimizer_estimate;
  if (r.certificate) d["drop"] = r.certificate->energy_drop;
  return d;
}

py::dict static_dict(const StaticReport& rep) {
  py::dict d;
  d["k"] = rep.k;
  d["l"] = rep.l;
  d["t"] = rep.t;
  d["critical_t"] = rep.critical_t;
  d["is_static"] = rep.is_critical;
  d["static_residual"] = rep.static_residual;
  d["trace_residual"] = rep.trace_residual;
  d["hessian_residual"] = rep.hessian_residual;
  d["rayleigh"] = rep.rayleigh;
  d["mean"] = rep.mean_f;
  d["geodesic_deviation"] = rep.geodesic_deviation;
  d["cokernel_max"] = rep.cokernel_max;
  d["upstairs_mismatch"] = rep.upstairs_mismatch;
  d["tangent_drift"] = rep.zero_set.tangent_drift;
  d["grad_min"] = rep.zero_set.grad_min;
  d["grad_max"] = rep.zero_set.grad_max;
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Einstein-Hilbert energies, Laplace spectra, Yamabe-quotient "
            "minimization, and static potentials on squeezed sphere products";

  m.def("sphere_volume", &sphere_volume, py::arg("k"));
  m.def("sphere_eigenvalue", &sphere_eigenvalue, py::arg("k"), py::arg("j"));
  m.def("sphere_multiplicity", &sphere_multiplicity, py::arg("k"), py::arg("j"));
  m.def("aubin_constant", &aubin_constant, py::arg("n"));
  m.def("critical_parameter", &critical_parameter, py::arg("k"));

  py::class_<ProductFamily>(m, "Family")
      .def(py::init([](int k, int l, double t) { return ProductFamily::spheres(k, l, t); }),
           py::arg("k"), py::arg("l"), py::arg("t"))
      .def_property_readonly("k", [](const ProductFamily& f) { return f.k; })
      .def_property_readonly("l", [](const ProductFamily& f) { return f.factor.dim; })
      .def_property_readonly("t", [](const ProductFamily& f) { return f.t; })
      .def_property_readonly("n", &ProductFamily::n)
      .def_property_readonly("scalar_curvature",
                             [](const ProductFamily& f) { return scalar_curvature(f); })
      .def_property_readonly("volume", [](const ProductFamily& f) { return volume(f); })
      .def_property_readonly("lambda1",
                             [](const ProductFamily& f) { return product_lambda1(f); })
      .def_property_readonly("threshold",
                             [](const ProductFamily& f) {
                               return scalar_curvature(f) / (f.n() - 1);
                             })
      .def_property_readonly("eh_energy", [](const ProductFamily& f) { return eh_energy(f); })
      .def_property_readonly("ricci_blocks",
                             [](const ProductFamily& f) { return ricci_block_eigenvalues(f); })
      .def_property_readonly("rho_blocks",
                             [](const ProductFamily& f) { return rho_block_eigenvalues(f); })
      .def_property_readonly("lichnerowicz_bound",
                             [](const ProductFamily& f) { return lichnerowicz_lower_bound(f); })
      .def_property_readonly("classification", [](const ProductFamily& f) {
        return to_string(yamabe_necessary_test(f));
      });

  m.def(
      "scan",
      [](int k, int l, double t_min, double t_max, int steps, bool with_minimizer, int lmax,
         int restarts, std::uint64_t seed) {
        ScanOptions so;
        so.with_minimizer = with_minimizer;
        so.minimize.l_max = lmax;
        so.minimize.restarts = restarts;
        so.minimize.seed = seed;
        py::list out;
        for (const ScanRecord& r : scan(k, l, t_min, t_max, steps, so))
          out.append(record_dict(r));
        return out;
      },
      py::arg("k"), py::arg("l"), py::arg("t_min"), py::arg("t_max"), py::arg("steps"),
      py::arg("with_minimizer") = false, py::arg("lmax") = 4, py::arg("restarts") = 4,
      py::arg("seed") = 42);

  m.def(
      "minimize_quotient",
      [](int k, int l, double t, int lmax, int restarts, std::uint64_t seed, double tol,
         int max_iters) {
        MinimizeOptions mo;
        mo.l_max = lmax;
        mo.restarts = restarts;
        mo.seed = seed;
        mo.tol = tol;
        mo.max_iters = max_iters;
        const ProductFamily fam = ProductFamily::spheres(k, l, t);
        const MinimizeResult res = minimize_quotient(fam, mo);
        py::dict d;
        d["estimate"] = res.estimate;
        d["energy"] = eh_energy(fam);
        d["aubin"] = aubin_constant(fam.n());
        d["basis_size"] = res.basis_size;
        d["best_restart"] = res.best_restart;
        return d;
      },
      py::arg("k"), py::arg("l"), py::arg("t"), py::arg("lmax") = 4, py::arg("restarts") = 4,
      py::arg("seed") = 42, py::arg("tol") = 1e-6, py::arg("max_iters") = 200);

  m.def(
      "static_check",
      [](int k, int l, double t, int lmax) { return static_dict(static_check(k, l, t, lmax)); },
      py::arg("k"), py::arg("l"), py::arg("t") = 0.0, py::arg("lmax") = 4);

  m.def(
      "destabilizing_direction",
      [](int k, int l, double t, double tau) {
        const Certificate c = destabilizing_direction(ProductFamily::spheres(k, l, t), tau);
        py::dict d;
        d["direction"] = c.direction;
        d["tau"] = c.tau;
        d["reference_energy"] = c.reference_energy;
        d["perturbed_energy"] = c.perturbed_energy;
        d["energy_drop"] = c.energy_drop;
        d["predicted_drop"] = c.predicted_drop;
        return d;
      },
      py::arg("k"), py::arg("l"), py::arg("t"), py::arg("tau") = 0.05);

  m.attr("__version__") = "0.1.0";
}
