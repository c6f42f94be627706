#pragma once

#include <complex>
#include <optional>

namespace krein {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr cplx kI{0.0, 1.0};

/// Square root on the physical sheet: w * w == z and Im w >= 0. Points on the
/// positive real axis are treated as limits from the upper half-plane, so the
/// result there is real and non-negative.
cplx sqrt_upper(cplx z);

/// Spectral parameter together with its branch-fixed square root.
class Energy {
 public:
  explicit Energy(cplx z);

  /// z = -kappa^2 with kappa > 0.
  static Energy from_kappa(double kappa);

  cplx z() const { return z_; }
  cplx sqrt_z() const { return sqrt_z_; }

  /// kappa = Im sqrt(z) when z lies on the closed negative half-axis.
  std::optional<double> kappa() const;

  bool is_real() const { return z_.imag() == 0.0; }

  /// The energy at conj(z). Note sqrt_upper(conj z) = -conj(sqrt_upper(z)).
  Energy conj() const { return Energy(std::conj(z_)); }

 private:
  cplx z_;
  cplx sqrt_z_;
};

}  // namespace krein
