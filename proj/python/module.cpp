#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "clr/bench.hpp"
#include "clr/data.hpp"
#include "clr/intcode.hpp"
#include "clr/objective.hpp"
#include "clr/optimize.hpp"
#include "clr/ratcode.hpp"
#include "clr/sphere.hpp"

namespace py = pybind11;
using namespace clr;

namespace {

py::int_ big_to_py(const BigInt& v) {
    return py::cast<py::int_>(py::module_::import("builtins").attr("int")(v.str()));
}

BigInt py_to_big(const py::int_& v) {
    return BigInt(py::str(v).cast<std::string>());
}

py::dict model_to_dict(const CLRModel& m) {
    py::dict d;
    d["active_features"] = m.active_features;
    d["theta"] = m.theta;
    d["delta"] = m.delta;
    d["theta_sharp"] = m.theta_sharp;
    d["description_length_bits"] = m.description_length_bits;
    d["exact_bits"] = m.has_exact_bits ? py::object(py::int_(m.exact_bits)) : py::none();
    d["round_limit_hit"] = m.round_limit_hit;
    return d;
}

}  // namespace

PYBIND11_MODULE(clrbench, m) {
    m.doc() = "compressive linear regression: universal codes, sphere counts, MDL fitting";

    py::register_exception<CapacityError>(m, "CapacityError");
    py::register_exception<DataError>(m, "DataError");

    // integer codes
    m.def("length_u", &length_u, py::arg("z"), "signed universal code length in bits");
    m.def("length_un", &length_un, py::arg("n"), "unsigned universal code length in bits");
    m.def("length_e", &length_e, py::arg("n"), "Elias delta length in bits (n >= 1)");
    m.def("encode_un", [](std::uint64_t n) { return encode_un(n).bits; }, py::arg("n"),
          "unsigned universal code word as a 0/1 string");
    m.def("f_switch_point", &f_switch_point,
          "first value coded through the escape word instead of the base code");

    // rational codes
    m.def("alpha_encode",
          [](double theta, double delta) {
              RationalCode c = alpha_encode(theta, delta);
              return py::make_tuple(c.q, c.k, c.value(), c.length());
          },
          py::arg("theta"), py::arg("delta"),
          "returns (mantissa, exponent, coded value, bits)");
    m.def("alpha_len", &alpha_len, py::arg("theta"), py::arg("delta"));
    m.def("alpha_smooth",
          [](double theta, double delta) {
              return alpha_smooth(theta, delta, default_alpha_constants());
          },
          py::arg("theta"), py::arg("delta"), "smooth code length surface");

    // sphere / lattice
    m.def("lattice_count",
          [](int n, std::int64_t s2) { return big_to_py(lattice_count(n, s2).count); },
          py::arg("dimension"), py::arg("radius_sq"),
          "number of integer points with squared norm <= radius_sq");
    m.def("spiral_rank",
          [](const std::vector<std::int64_t>& v) { return big_to_py(spiral_rank(v)); },
          py::arg("v"));
    m.def("spiral_unrank",
          [](int n, const py::int_& rank) { return spiral_unrank(n, py_to_big(rank)); },
          py::arg("dimension"), py::arg("rank"));
    m.def("h_bar", &h_bar, py::arg("n"), py::arg("s_sq"), py::arg("delta_y"),
          "smooth residual code length in bits");
    m.def("h_applied", &h_applied, py::arg("n"), py::arg("sigma"),
          "applied Shannon length with the coded noise width");

    // data utilities
    m.def("estimate_delta_y", &estimate_delta_y, py::arg("target"),
          "grid step underlying a target vector");

    // fitting
    m.def("fit_clr",
          [](const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double delta_y, double offset,
             int bias_index) {
              DesignMatrix d = DesignMatrix::make(X, y, delta_y, offset);
              CLRModel model = fit_clr(d, OptimizerConfig{}, default_alpha_constants(),
                                       bias_index);
              return model_to_dict(model);
          },
          py::arg("X"), py::arg("y"), py::arg("delta_y"), py::arg("offset") = 0.0,
          py::arg("bias_index") = -1,
          "X is features x observations; returns the fitted sparse model as a dict");

    // benchmark
    m.def("run_sim",
          [](const std::string& suite, int n_datasets) {
              SimSpec spec = suite == "sim1"   ? SimSpec::sim1()
                             : suite == "sim2" ? SimSpec::sim2()
                                               : SimSpec::sim3();
              if (n_datasets > 0) spec.n_datasets = n_datasets;
              SimReport r = run_sim_suite(spec, suite);
              py::list rows;
              for (const auto& row : r.rows) {
                  py::dict rd;
                  rd["dataset"] = row.dataset;
                  rd["failed"] = row.failed;
                  rd["clr_nonzero"] = row.clr_nonzero;
                  rd["clr_mse"] = row.clr_mse;
                  rd["l2_mse"] = row.l2_mse;
                  rd["clr_resid_ratio"] = row.clr_resid_ratio;
                  rows.append(rd);
              }
              py::dict out;
              out["rows"] = rows;
              out["clr_nonzero_mean"] = r.clr.nonzero_mean;
              out["clr_mse_mean"] = r.clr.mse_mean;
              out["l2_mse_mean"] = r.l2.mse_mean;
              return out;
          },
          py::arg("suite") = "sim3", py::arg("n_datasets") = 0,
          "replicate a simulation suite; suite is sim1, sim2 or sim3");
}
