#include "spavg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "spavg/kernels.hpp"
#include "spavg/quad.hpp"

namespace spavg::oracle {
namespace {

constexpr double kInvSqrt2Pi = 0.3989422804014327;

double require_positive_t(double t) {
  if (!(t > 0.0)) throw NonpositiveTime("oracle requires t > 0");
  return t;
}

// E |Z|^(-beta) for standard normal Z.
double abs_normal_negative_moment(double beta) {
  return std::pow(2.0, -0.5 * beta) * std::tgamma(0.5 * (1.0 - beta)) /
         std::sqrt(M_PI);
}

// int_0^t |h - sqrt(2s) z|^(-beta) ds in closed form (exact antiderivatives
// of the power kernel along the path v = sqrt(2s)); h > 0.
double colored_heat_time_integral(double h, double z, double t, double beta) {
  const double v_end = std::sqrt(2.0 * t);
  const double x = v_end * z / h;
  if (std::fabs(x) < 0.05) {
    // |h - vz|^(-beta) = h^(-beta) (1 - vz/h)^(-beta); integrate the binomial
    // series in v term by term. At |x| < 0.05 eight terms give ~1e-11.
    double sum = 0.0;
    double coeff = 1.0;  // rising factorial (beta)_k / k!
    double xpow = 1.0;
    for (int k = 0; k < 9; ++k) {
      sum += coeff * xpow / static_cast<double>(k + 2);
      coeff *= (beta + static_cast<double>(k)) / static_cast<double>(k + 1);
      xpow *= x;
    }
    return std::pow(h, -beta) * v_end * v_end * sum;
  }
  const auto p1 = [beta](double u) {
    return std::copysign(std::pow(std::fabs(u), 1.0 - beta), u) / (1.0 - beta);
  };
  const auto p2 = [beta](double u) {
    return std::pow(std::fabs(u), 2.0 - beta) / (2.0 - beta);
  };
  const double u_end = h - v_end * z;
  return (h * (p1(h) - p1(u_end)) - (p2(h) - p2(u_end))) / (z * z);
}

double pointwise_cov_heat_white(double t, double h) {
  // int_0^t heat(2s, h) ds with s = xi^2 removing the 1/sqrt(s) edge.
  quad::IntegralResult r = quad::quad_1d(
      [&](double xi) { return 2.0 * xi * kernels::heat_kernel(2.0 * xi * xi, h); },
      0.0, std::sqrt(t), 1e-12);
  return r.value;
}

double pointwise_cov_heat_riesz(double t, double h, double beta) {
  if (h < 1e-12) {
    return std::pow(2.0, -0.5 * beta) * std::pow(t, 1.0 - 0.5 * beta) /
           (1.0 - 0.5 * beta) * abs_normal_negative_moment(beta);
  }
  // Fubini over the normal expectation: C = E_Z int_0^t |h - sqrt(2s)Z|^(-b) ds
  // with the time integral in closed form. Kink where the path grazes the
  // singularity (z = h / sqrt(2t)).
  const double scale = pointwise_cov_heat_riesz(t, 0.0, beta);
  const double zstar = h / std::sqrt(2.0 * t);
  const double cut[1] = {zstar};
  quad::IntegralResult r = quad::quad_1d_split(
      [&](double z) {
        return kInvSqrt2Pi * std::exp(-0.5 * z * z) *
               colored_heat_time_integral(h, z, t, beta);
      },
      -9.0, 9.0,
      zstar < 9.0 ? std::span<const double>(cut, 1) : std::span<const double>(),
      1e-9 * scale, 8000);
  return r.value;
}

double pointwise_cov_wave_white(double t, double h) {
  const double cut[1] = {0.5 * h};
  quad::IntegralResult r = quad::quad_1d_split(
      [&](double s) { return kernels::wave_overlap_integral(s, h); }, 0.0, t,
      std::span<const double>(cut, 1), 1e-12);
  return r.value;
}

double pointwise_cov_wave_riesz(double t, double h, double beta) {
  const double cut[1] = {0.5 * h};
  quad::IntegralResult r = quad::quad_1d_split(
      [&](double s) { return kernels::wave_colored_overlap_exact(s, h, beta); },
      0.0, t, std::span<const double>(cut, 1),
      1e-10 * std::max(1.0, std::pow(2.0 * t, 2.0 - beta)), 8000);
  return r.value;
}

// Unnormalized int_{|x|<=R} pointwise_cov(x - x0) dx.
double cov_integral(const ModelTag& model, double t, double R, double x0) {
  double lo = -R - x0;
  double hi = R - x0;
  std::vector<double> cuts{0.0};
  if (model.equation == Equation::Wave) {
    if (model.noise.is_white()) {
      // Finite speed: the covariance vanishes beyond |h| = 2t.
      lo = std::max(lo, -2.0 * t);
      hi = std::min(hi, 2.0 * t);
      if (lo >= hi) return 0.0;
    }
    cuts.push_back(-2.0 * t);
    cuts.push_back(2.0 * t);
  }
  const double scale = pointwise_cov(model, t, 0.0);
  quad::IntegralResult r = quad::quad_1d_split(
      [&](double h) { return pointwise_cov(model, t, h); }, lo, hi, cuts,
      1e-9 * scale * std::max(1.0, hi - lo), 8000);
  return r.value;
}

}  // namespace

const char* ModelTag::name() const {
  if (equation == Equation::Heat) {
    return noise.is_white() ? "heat_white" : "heat_riesz";
  }
  return noise.is_white() ? "wave_white" : "wave_riesz";
}

double JointLaw2::correlation() const {
  return cov / std::sqrt(var_f * var_u);
}

double pointwise_cov(const ModelTag& model, double t, double w) {
  require_positive_t(t);
  const double h = std::fabs(w);
  if (model.equation == Equation::Heat) {
    return model.noise.is_white() ? pointwise_cov_heat_white(t, h)
                                  : pointwise_cov_heat_riesz(t, h, model.beta());
  }
  if (model.noise.is_white()) {
    // Finite propagation speed: disjoint cones and uncorrelated noise.
    return h >= 2.0 * t ? 0.0 : pointwise_cov_wave_white(t, h);
  }
  // With long-range noise the cones need not intersect to be correlated, so
  // there is no compact support in h.
  return pointwise_cov_wave_riesz(t, h, model.beta());
}

double sigma_R_exact(const ModelTag& model, double t, double R) {
  require_positive_t(t);
  if (!(R > 0.0)) throw ConfigError("sigma_R_exact requires R > 0");
  const double c0 = pointwise_cov(model, t, 0.0);
  double hi = 2.0 * R;
  if (model.equation == Equation::Wave && model.noise.is_white()) {
    hi = std::min(hi, 2.0 * t);
  }
  const double kink[1] = {2.0 * t};
  quad::IntegralResult r = quad::quad_1d_split(
      [&](double h) { return (2.0 * R - h) * pointwise_cov(model, t, h); }, 0.0,
      hi,
      model.equation == Equation::Wave ? std::span<const double>(kink, 1)
                                       : std::span<const double>(),
      1e-9 * c0 * 2.0 * R * std::max(1.0, hi), 8000);
  return std::sqrt(2.0 * r.value);
}

double cov_FRu_exact(const ModelTag& model, double t, double R, double x0) {
  return cov_integral(model, t, R, x0) / sigma_R_exact(model, t, R);
}

JointLaw2 joint_gaussian_law(const ModelTag& model, double t, double R, double x0) {
  JointLaw2 law;
  law.var_f = 1.0;
  law.cov = cov_FRu_exact(model, t, R, x0);
  law.var_u = pointwise_cov(model, t, 0.0);
  return law;
}

double gaussian_w1(double s1, double s2) {
  if (!(s1 >= 0.0 && s2 >= 0.0)) {
    throw ConfigError("gaussian_w1 requires nonnegative standard deviations");
  }
  return std::fabs(s1 - s2) * std::sqrt(2.0 / M_PI);
}

double pointwise_cov_by_time_quadrature(const ModelTag& model, double t, double w) {
  require_positive_t(t);
  const double h = std::fabs(w);
  if (model.equation == Equation::Heat && !model.noise.is_white()) {
    // s = zeta^p flattens the s^(-beta/2) edge of the expectation integrand.
    const double beta = model.beta();
    const double p = 2.0 / (2.0 - beta);
    quad::IntegralResult r = quad::quad_1d(
        [&](double zeta) {
          const double s = std::pow(zeta, p);
          return p * std::pow(zeta, p - 1.0) *
                 kernels::heat_colored_cov_integrand(s, h, beta).value;
        },
        0.0, std::pow(t, 1.0 / p), 1e-8, 2000);
    return r.value;
  }
  if (model.equation == Equation::Wave && !model.noise.is_white()) {
    const double cut[1] = {0.5 * h};
    quad::IntegralResult r = quad::quad_1d_split(
        [&](double s) { return kernels::wave_colored_overlap(s, h, model.beta()).value; },
        0.0, t, std::span<const double>(cut, 1), 1e-5, 400);
    return r.value;
  }
  return pointwise_cov(model, t, w);  // white routes are already time quadratures
}

double sigma_R_brute(const ModelTag& model, double t, double R) {
  const double c0 = pointwise_cov(model, t, 0.0);
  quad::IntegralResult r = quad::quad_2d(
      [&](double x, double y) { return pointwise_cov(model, t, x - y); },
      {-R, R, -R, R}, 1e-7 * c0 * 4.0 * R * R, 4000);
  return std::sqrt(r.value);
}

double cov_FRu_brute_heat_white(double t, double R, double x0) {
  // Pointwise covariance assembled from the raw kernel product: inner z
  // integral over a window matched to the kernel width at each time slice,
  // outer time integral in xi = sqrt(s) so the short-time edge is regular.
  const auto cov_brute = [&](double h) {
    return quad::quad_1d(
               [&](double xi) {
                 const double s = xi * xi;
                 const double spread = 12.0 * std::sqrt(0.5 * s);
                 quad::IntegralResult inner = quad::quad_1d(
                     [&](double z) {
                       return kernels::heat_kernel(s, h - z) *
                              kernels::heat_kernel(s, z);
                     },
                     0.5 * h - spread, 0.5 * h + spread,
                     1e-9 / std::sqrt(4.0 * M_PI * s) + 1e-15, 2000);
                 return 2.0 * xi * inner.value;
               },
               0.0, std::sqrt(t), 1e-10, 2000)
        .value;
  };
  quad::IntegralResult outer =
      quad::quad_1d([&](double x) { return cov_brute(x - x0); }, -R, R, 3e-7, 2000);
  const ModelTag model = ModelTag::heat_white();
  return outer.value / sigma_R_exact(model, t, R);
}

}  // namespace spavg::oracle
