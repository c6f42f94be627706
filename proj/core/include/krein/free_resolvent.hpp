#pragma once

#include <optional>
#include <string>
#include <vector>

#include "krein/energy.hpp"
#include "krein/linalg.hpp"

namespace krein {

/// A radially symmetric source h(|x - c|) about a center c.
///
/// Two families are supported: normalized Gaussians, and Helmholtz images
/// h = (-Laplacian - shift) phi of a Gaussian envelope phi, for which
/// R(shift) h = phi holds exactly.
class RadialSource {
 public:
  /// h(r) = mass (2 pi sigma^2)^{-3/2} e^{-r^2 / (2 sigma^2)}.
  static RadialSource gaussian(const Point& center, double sigma, double mass = 1.0);

  /// h(r) = (3/sigma^2 - r^2/sigma^4 - shift) phi(r), phi(r) = amplitude e^{-r^2/(2 sigma^2)}.
  static RadialSource helmholtz_image(const Point& center, double sigma, cplx shift,
                                      double amplitude = 1.0);

  cplx profile(double r) const;
  /// The Gaussian envelope; for Helmholtz images this is R(shift) h.
  double envelope(double r) const;
  /// Radius beyond which the profile is below 1e-18 of its scale.
  double cutoff_radius() const { return 10.0 * sigma_; }

  const Point& center() const { return center_; }
  double sigma() const { return sigma_; }
  double amplitude() const { return amplitude_; }
  const std::optional<cplx>& shift() const { return shift_; }

 private:
  RadialSource(const Point& center, double sigma, double amplitude, std::optional<cplx> shift);

  Point center_;
  double sigma_;
  double amplitude_;
  std::optional<cplx> shift_;
};

/// (R(z) h)(p) through the one-dimensional radial reduction
///   (1 / (2 i k R)) int_0^inf r h(r) (e^{ik(R+r)} - e^{ik|R-r|}) dr,
/// k = sqrt(z), R = |p - c|, evaluated by adaptive quadrature.
cplx apply_free_resolvent(const Energy& e, const RadialSource& source, const Point& p);

/// Sampled complex field on an ordered list of evaluation points.
struct GridFunction {
  std::vector<Point> points;
  std::vector<cplx> values;
  std::string role;  ///< e.g. "perturbed_resolvent", "free_resolvent", "green"
  cplx z{};
};

}  // namespace krein
