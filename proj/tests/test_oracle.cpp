#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "spavg/oracle.hpp"
#include "spavg/quad.hpp"
#include "spavg/stats.hpp"

using namespace spavg;
using namespace spavg::oracle;

namespace {

// closed time integral of the gaussian kernel overlap, derived by hand:
// int_0^t (4 pi s)^(-1/2) exp(-h^2/(4s)) ds
double heat_white_cov_closed(double t, double h) {
  h = std::fabs(h);
  return std::sqrt(t / std::numbers::pi) * std::exp(-h * h / (4.0 * t)) -
         0.5 * h * std::erfc(h / (2.0 * std::sqrt(t)));
}

// closed time integral of the cone overlap: (2t - h)^2 / 16 on 0 <= h <= 2t
double wave_white_cov_closed(double t, double h) {
  h = std::fabs(h);
  if (h >= 2.0 * t) return 0.0;
  const double d = 2.0 * t - h;
  return d * d / 16.0;
}

double neg_moment(double beta) {
  return std::pow(2.0, -0.5 * beta) * std::tgamma(0.5 * (1.0 - beta)) /
         std::sqrt(std::numbers::pi);
}

// closed variance at offset zero for the riesz models, derived by direct
// time integration of the scale-invariant overlaps
double heat_riesz_var_closed(double t, double beta) {
  return neg_moment(beta) * std::pow(2.0, -0.5 * beta) *
         std::pow(t, 1.0 - 0.5 * beta) / (1.0 - 0.5 * beta);
}
double wave_riesz_var_closed(double t, double beta) {
  return std::pow(2.0, 1.0 - beta) * std::pow(t, 3.0 - beta) /
         ((1.0 - beta) * (2.0 - beta) * (3.0 - beta));
}

}  // namespace

// ---- pointwise covariance: production vs independent closed forms ----

TEST_CASE("gaussian-model covariance matches the closed convolution integral") {
  for (double t : {0.25, 0.5, 1.0}) {
    for (double h : {0.0, 0.3, 1.0, 3.0, -2.0}) {
      const double exact = heat_white_cov_closed(t, h);
      CHECK(pointwise_cov(ModelTag::heat_white(), t, h) ==
            doctest::Approx(exact).epsilon(1e-9));
    }
  }
  CHECK(pointwise_cov(ModelTag::heat_white(), 0.5, 0.0) ==
        doctest::Approx(std::sqrt(0.5 / std::numbers::pi)).epsilon(1e-11));
}

TEST_CASE("cone-model covariance matches the closed overlap integral") {
  for (double t : {0.5, 1.0}) {
    for (double h : {0.0, 0.4, 1.2, 2.5, -0.7}) {
      CHECK(pointwise_cov(ModelTag::wave_white(), t, h) ==
            doctest::Approx(wave_white_cov_closed(t, h)).epsilon(1e-10));
    }
  }
  CHECK(pointwise_cov(ModelTag::wave_white(), 1.0, 0.0) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(pointwise_cov(ModelTag::wave_white(), 1.0, 2.0) == 0.0);
  CHECK(pointwise_cov(ModelTag::wave_white(), 1.0, 5.0) == 0.0);
}

TEST_CASE("riesz-model variances at offset zero hit the closed values") {
  const std::vector<double> betas = {0.25, 0.5, 0.75};
  const std::vector<double> heat_frozen = {0.700787801421071, 1.146719983099360,
                                           2.622110874304790};
  const std::vector<double> wave_frozen = {0.465951260400327, 0.754247233265651,
                                           1.691316785781648};
  for (std::size_t i = 0; i < betas.size(); ++i) {
    const double beta = betas[i];
    const double alpha = 1.0 - beta;
    CHECK(heat_riesz_var_closed(0.5, beta) ==
          doctest::Approx(heat_frozen[i]).epsilon(1e-13));
    CHECK(wave_riesz_var_closed(1.0, beta) ==
          doctest::Approx(wave_frozen[i]).epsilon(1e-13));
    CHECK(pointwise_cov(ModelTag::heat_riesz(alpha), 0.5, 0.0) ==
          doctest::Approx(heat_frozen[i]).epsilon(1e-9));
    CHECK(pointwise_cov(ModelTag::wave_riesz(alpha), 1.0, 0.0) ==
          doctest::Approx(wave_frozen[i]).epsilon(1e-9));
  }
}

TEST_CASE("fast colored routes agree with direct time quadrature") {
  for (double alpha : {0.25, 0.5, 0.75}) {
    const ModelTag heat = ModelTag::heat_riesz(alpha);
    for (double w : {0.3, 1.0, 3.0}) {
      const double fast = pointwise_cov(heat, 0.5, w);
      const double slow = pointwise_cov_by_time_quadrature(heat, 0.5, w);
      CHECK(fast == doctest::Approx(slow).epsilon(2e-5));
    }
    const ModelTag wave = ModelTag::wave_riesz(alpha);
    for (double w : {0.5, 1.5, 3.0}) {
      const double fast = pointwise_cov(wave, 1.0, w);
      const double slow = pointwise_cov_by_time_quadrature(wave, 1.0, w);
      CHECK(fast == doctest::Approx(slow).epsilon(1e-3));
    }
  }
}

TEST_CASE("wave riesz sigma grows with the colored exponent") {
  const ModelTag model = ModelTag::wave_riesz(0.5);  // beta = 0.5
  const std::vector<double> radii = {8.0, 16.0, 32.0, 64.0, 128.0};
  std::vector<double> sig;
  for (double R : radii) sig.push_back(sigma_R_exact(model, 1.0, R));
  CHECK(spavg::stats::loglog_fit(radii, sig).slope ==
        doctest::Approx(0.75).epsilon(0.013));
}

TEST_CASE("long-range noise keeps distant cone points correlated") {
  // Separated points still see correlated noise, so unlike the white model
  // the covariance has no compact support; its tail is (t^3 / 3) h^(-beta)
  // from the second difference of h^(2 - beta) across the cone width.
  for (double beta : {0.25, 0.5, 0.75}) {
    const ModelTag model = ModelTag::wave_riesz(1.0 - beta);
    CHECK(pointwise_cov(model, 1.0, 2.0) > 0.0);
    CHECK(pointwise_cov(model, 1.0, 8.0) > 0.0);
    for (double h : {50.0, 200.0}) {
      const double scaled = pointwise_cov(model, 1.0, h) * std::pow(h, beta);
      CHECK(scaled == doctest::Approx(1.0 / 3.0).epsilon(2e-3));
    }
  }
}

TEST_CASE("covariances are even and decreasing in the offset") {
  for (const ModelTag model : {ModelTag::heat_white(), ModelTag::heat_riesz(0.5),
                               ModelTag::wave_white(), ModelTag::wave_riesz(0.5)}) {
    const double t = model.equation == Equation::Heat ? 0.5 : 1.0;
    CHECK(pointwise_cov(model, t, 0.8) ==
          doctest::Approx(pointwise_cov(model, t, -0.8)).epsilon(1e-9));
    double prev = pointwise_cov(model, t, 0.0);
    for (double h : {0.2, 0.6, 1.2, 1.9}) {
      const double cur = pointwise_cov(model, t, h);
      CHECK(cur < prev * (1.0 + 1e-12));
      prev = cur;
    }
  }
}

TEST_CASE("colored heat covariance is continuous through the origin") {
  const ModelTag model = ModelTag::heat_riesz(0.5);
  const double at_zero = pointwise_cov(model, 0.5, 0.0);
  const double nearby = pointwise_cov(model, 0.5, 1e-8);
  CHECK(nearby / at_zero == doctest::Approx(1.0).epsilon(1e-3));
}

// ---- integrated variance: reduced form vs unreduced double integral ----

TEST_CASE("variance reduction to one dimension is exact") {
  struct Case {
    ModelTag model;
    double t, R;
  };
  const std::vector<Case> cases = {
      {ModelTag::heat_white(), 0.5, 2.0},   {ModelTag::heat_riesz(0.75), 0.5, 2.0},
      {ModelTag::heat_riesz(0.25), 0.5, 2.0}, {ModelTag::wave_white(), 1.0, 2.0},
      {ModelTag::wave_riesz(0.5), 1.0, 2.0}};
  for (const Case& c : cases) {
    const double fast = sigma_R_exact(c.model, c.t, c.R);
    const double brute = sigma_R_brute(c.model, c.t, c.R);
    CHECK(fast / brute == doctest::Approx(1.0).epsilon(2e-5));
  }
}

TEST_CASE("normalized point covariance against the nested brute force") {
  const double fast = cov_FRu_exact(ModelTag::heat_white(), 0.5, 2.0, 0.5);
  const double brute = cov_FRu_brute_heat_white(0.5, 2.0, 0.5);
  CHECK(fast / brute == doctest::Approx(1.0).epsilon(1e-5));
}

// ---- joint law structure ----

TEST_CASE("joint law assembles the normalized pieces") {
  const ModelTag model = ModelTag::heat_white();
  const JointLaw2 law = joint_gaussian_law(model, 0.5, 4.0, 0.5);
  CHECK(law.var_f == 1.0);
  CHECK(law.var_u == doctest::Approx(pointwise_cov(model, 0.5, 0.0)).epsilon(1e-12));
  CHECK(law.cov == doctest::Approx(cov_FRu_exact(model, 0.5, 4.0, 0.5)).epsilon(1e-12));
  CHECK(law.positive_semidefinite());
  CHECK(law.correlation() ==
        doctest::Approx(law.cov / std::sqrt(law.var_u)).epsilon(1e-12));
  CHECK(law.correlation() > 0.0);
  CHECK(law.correlation() < 1.0);
}

TEST_CASE("cone-model joint correlation has a hand-computable value") {
  // t = 1, R = 2, x0 = 1/2: window integral 127/384, sigma_R^2 = 7/6,
  // point variance 1/4 -- all by elementary integration of (2t-h)^2/16
  const double rho = joint_gaussian_law(ModelTag::wave_white(), 1.0, 2.0, 0.5)
                         .correlation();
  const double by_hand = (127.0 / 192.0) / std::sqrt(7.0 / 6.0);
  CHECK(rho == doctest::Approx(by_hand).epsilon(1e-7));
  CHECK(by_hand == doctest::Approx(0.6123915).epsilon(1e-6));
}

TEST_CASE("cone-model window absorbs the full covariance mass once wide enough") {
  // for R >= x0 + 2t the product sigma_R * cov equals the full-line integral
  // of the covariance, which is t^3/3 by direct integration
  for (double t : {0.5, 1.0}) {
    const double full = t * t * t / 3.0;
    for (double R : {4.0, 8.0}) {
      const ModelTag model = ModelTag::wave_white();
      const double prod = sigma_R_exact(model, t, R) * cov_FRu_exact(model, t, R, 0.5);
      CHECK(prod == doctest::Approx(full).epsilon(1e-7));
    }
  }
}

TEST_CASE("gaussian-model window mass tends to the unit time integral") {
  // int_R C(t, h) dh = t exactly; gaussian tails beyond R = 64 are negligible
  const ModelTag model = ModelTag::heat_white();
  const double prod =
      sigma_R_exact(model, 0.5, 64.0) * cov_FRu_exact(model, 0.5, 64.0, 0.5);
  CHECK(prod == doctest::Approx(0.5).epsilon(1e-8));
}

TEST_CASE("window symmetry in the observation point") {
  for (const ModelTag model : {ModelTag::heat_white(), ModelTag::wave_riesz(0.5)}) {
    const double t = model.equation == Equation::Heat ? 0.5 : 1.0;
    CHECK(cov_FRu_exact(model, t, 4.0, 0.5) ==
          doctest::Approx(cov_FRu_exact(model, t, 4.0, -0.5)).epsilon(1e-9));
  }
}

TEST_CASE("oracle correlation decays at the expected rate") {
  const std::vector<double> radii = {8.0, 16.0, 32.0};
  std::vector<double> corr;
  for (double R : radii) {
    corr.push_back(
        joint_gaussian_law(ModelTag::heat_white(), 0.5, R, 0.5).correlation());
  }
  const stats::RateFit fit = stats::loglog_fit(radii, corr);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(0.06));
}

TEST_CASE("names and error paths") {
  CHECK(std::string(ModelTag::heat_white().name()) != "");
  CHECK_THROWS_AS(pointwise_cov(ModelTag::heat_white(), 0.0, 0.0), Error);
  CHECK_THROWS_AS(sigma_R_exact(ModelTag::wave_white(), -1.0, 2.0), Error);
  CHECK_THROWS_AS(sigma_R_exact(ModelTag::heat_white(), 0.5, 0.0), Error);
  CHECK(gaussian_w1(1.0, 1.0) == 0.0);
  CHECK(gaussian_w1(3.0, 1.0) ==
        doctest::Approx(2.0 * std::sqrt(2.0 / std::numbers::pi)).epsilon(1e-14));
}
