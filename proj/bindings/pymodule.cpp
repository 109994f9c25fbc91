#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "spavg/experiment.hpp"
#include "spavg/kernels.hpp"
#include "spavg/oracle.hpp"
#include "spavg/solver.hpp"
#include "spavg/stats.hpp"
#include "spavg/version.hpp"

namespace py = pybind11;

namespace {

spavg::oracle::ModelTag parse_model(const std::string& equation,
                                    const std::string& noise, double alpha) {
  spavg::Equation eq;
  if (equation == "heat") {
    eq = spavg::Equation::Heat;
  } else if (equation == "wave") {
    eq = spavg::Equation::Wave;
  } else {
    throw spavg::ConfigError("equation must be 'heat' or 'wave'");
  }
  if (noise == "white") {
    return {eq, spavg::CovarianceModel::white()};
  }
  if (noise == "riesz") {
    return {eq, spavg::CovarianceModel::riesz(alpha)};
  }
  throw spavg::ConfigError("noise must be 'white' or 'riesz'");
}

spavg::experiment::ExperimentConfig make_config(
    const std::string& equation, const std::string& noise, double alpha, double t,
    double dx, double x0, const std::vector<double>& radii, long replicas,
    std::uint64_t master_seed, int threads) {
  const spavg::oracle::ModelTag model = parse_model(equation, noise, alpha);
  spavg::experiment::ExperimentConfig config =
      spavg::experiment::ExperimentConfig::defaults(model.equation);
  config.noise = model.noise;
  if (t > 0.0) config.t = t;
  if (dx > 0.0) config.dx = dx;
  config.x0 = x0;
  if (!radii.empty()) config.radii = radii;
  config.replicas = replicas;
  config.master_seed = master_seed;
  config.threads = threads;
  config.validate();
  return config;
}

}  // namespace

PYBIND11_MODULE(spavg, m) {
  m.doc() = "spatial averages of stochastic heat/wave equations";
  m.attr("__version__") = spavg::kVersion;

  m.def("heat_kernel", &spavg::kernels::heat_kernel, py::arg("t"), py::arg("x"),
        py::arg("dimension") = 1, "Gaussian heat kernel density");
  m.def("wave_kernel", &spavg::kernels::wave_kernel, py::arg("t"), py::arg("x"),
        "d'Alembert wave kernel (half the light-cone indicator)");
  m.def("wave_colored_overlap", &spavg::kernels::wave_colored_overlap_exact,
        py::arg("tau"), py::arg("delta"), py::arg("beta"),
        "closed-form Riesz-weighted wave kernel overlap");

  m.def(
      "pointwise_cov",
      [](const std::string& equation, const std::string& noise, double alpha,
         double t, double w) {
        return spavg::oracle::pointwise_cov(parse_model(equation, noise, alpha), t,
                                            w);
      },
      py::arg("equation"), py::arg("noise"), py::arg("alpha"), py::arg("t"),
      py::arg("w"), "exact covariance of u(t,x)-1 at spatial offset w (sigma=1)");
  m.def(
      "sigma_r_exact",
      [](const std::string& equation, const std::string& noise, double alpha,
         double t, double R) {
        return spavg::oracle::sigma_R_exact(parse_model(equation, noise, alpha), t,
                                            R);
      },
      py::arg("equation"), py::arg("noise"), py::arg("alpha"), py::arg("t"),
      py::arg("R"), "exact standard deviation of the unnormalized average");
  m.def(
      "joint_correlation",
      [](const std::string& equation, const std::string& noise, double alpha,
         double t, double R, double x0) {
        return spavg::oracle::joint_gaussian_law(parse_model(equation, noise, alpha),
                                                 t, R, x0)
            .correlation();
      },
      py::arg("equation"), py::arg("noise"), py::arg("alpha"), py::arg("t"),
      py::arg("R"), py::arg("x0"),
      "exact correlation between the normalized average and u(t,x0)-1");

  m.def(
      "run_ensemble",
      [](const std::string& equation, const std::string& noise, double alpha,
         double t, double dx, double x0, const std::vector<double>& radii,
         long replicas, std::uint64_t master_seed, int threads) {
        const spavg::experiment::ExperimentConfig config = make_config(
            equation, noise, alpha, t, dx, x0, radii, replicas, master_seed,
            threads);
        const spavg::experiment::EnsembleMap ensembles =
            spavg::experiment::run_config_ensemble(config);
        py::dict out;
        for (const auto& [radius, set] : ensembles) {
          std::vector<double> a(set.pairs.size());
          std::vector<double> u(set.pairs.size());
          for (std::size_t i = 0; i < set.pairs.size(); ++i) {
            a[i] = set.pairs[i].spatial_average;
            u[i] = set.pairs[i].point_deviation;
          }
          py::dict entry;
          entry["spatial_average"] = a;
          entry["point_deviation"] = u;
          out[py::float_(radius)] = entry;
        }
        return out;
      },
      py::arg("equation"), py::arg("noise") = "white", py::arg("alpha") = 0.5,
      py::arg("t") = -1.0, py::arg("dx") = -1.0, py::arg("x0") = 0.5,
      py::arg("radii") = std::vector<double>{}, py::arg("replicas") = 200,
      py::arg("master_seed") = 20260823, py::arg("threads") = 1,
      "independent replicas of (integral of u-1 over [-R,R], u(t,x0)-1)");

  m.def("config_hash",
        [](const std::string& equation, const std::string& noise, double alpha,
           double t, double dx, double x0, const std::vector<double>& radii,
           long replicas, std::uint64_t master_seed) {
          return make_config(equation, noise, alpha, t, dx, x0, radii, replicas,
                             master_seed, 1)
              .config_hash_hex();
        },
        py::arg("equation"), py::arg("noise") = "white", py::arg("alpha") = 0.5,
        py::arg("t") = -1.0, py::arg("dx") = -1.0, py::arg("x0") = 0.5,
        py::arg("radii") = std::vector<double>{}, py::arg("replicas") = 200,
        py::arg("master_seed") = 20260823,
        "provenance hash of the canonical config lines");

  m.def(
      "w1_to_std_normal",
      [](const std::vector<double>& xs) { return spavg::stats::w1_to_std_normal(xs); },
      py::arg("sample"), "W1 distance from a sample to the standard normal law");
  m.def(
      "distance_covariance",
      [](const std::vector<double>& xs, const std::vector<double>& ys) {
        return spavg::stats::distance_covariance(xs, ys);
      },
      py::arg("x"), py::arg("y"));
  m.def(
      "independence_test",
      [](const std::vector<double>& xs, const std::vector<double>& ys,
         int permutations, std::uint64_t seed) {
        const spavg::stats::TestResult r =
            spavg::stats::independence_test(xs, ys, permutations, seed);
        return py::make_tuple(r.statistic, r.p_value);
      },
      py::arg("x"), py::arg("y"), py::arg("permutations") = 199,
      py::arg("seed") = 0,
      "permutation test of independence; returns (statistic, p_value)");

  py::register_exception<spavg::Error>(m, "SpavgError", PyExc_RuntimeError);
}
