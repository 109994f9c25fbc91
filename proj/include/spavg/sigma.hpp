#pragma once

#include <cmath>

#include "spavg/errors.hpp"

namespace spavg {

// Diffusion coefficient sigma(u): constant, affine a + b u, or the smooth
// bounded family c0 + c1 sin(u). All are globally Lipschitz.
struct SigmaFunction {
  enum class Kind { Constant, Affine, SmoothBounded };
  Kind kind = Kind::Constant;
  double p0 = 1.0;
  double p1 = 0.0;

  static SigmaFunction constant(double c) { return {Kind::Constant, c, 0.0}; }
  static SigmaFunction affine(double a, double b) { return {Kind::Affine, a, b}; }
  static SigmaFunction smooth_bounded(double c0, double c1) {
    return {Kind::SmoothBounded, c0, c1};
  }

  double operator()(double u) const {
    switch (kind) {
      case Kind::Constant:
        return p0;
      case Kind::Affine:
        return p0 + p1 * u;
      case Kind::SmoothBounded:
      default:
        return p0 + p1 * std::sin(u);
    }
  }

  double lipschitz_constant() const {
    switch (kind) {
      case Kind::Constant:
        return 0.0;
      default:
        return std::fabs(p1);
    }
  }

  bool is_constant() const { return kind == Kind::Constant; }
  bool is_constant_one() const { return kind == Kind::Constant && p0 == 1.0; }
  bool is_zero() const { return kind == Kind::Constant && p0 == 0.0; }

  const char* kind_name() const {
    switch (kind) {
      case Kind::Constant:
        return "constant";
      case Kind::Affine:
        return "affine";
      case Kind::SmoothBounded:
      default:
        return "smooth_bounded";
    }
  }
};

}  // namespace spavg
