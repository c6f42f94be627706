#include "krein/energy.hpp"

#include <cmath>

#include "krein/errors.hpp"

namespace krein {

cplx sqrt_upper(cplx z) {
  // The principal root has Re w >= 0 and sign(Im w) = sign(Im z); flipping it
  // in the lower half-plane yields the branch with arg z taken in [0, 2pi).
  cplx w = std::sqrt(z);
  if (w.imag() < 0.0) w = -w;
  // normalize a negative zero imaginary part coming from z = x - 0i
  return {w.real() + 0.0, w.imag() + 0.0};
}

Energy::Energy(cplx z) : z_(z), sqrt_z_(sqrt_upper(z)) {
  if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) {
    throw InvalidArgument("energy must be finite");
  }
}

Energy Energy::from_kappa(double kappa) {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  Energy e(cplx(-kappa * kappa, 0.0));
  e.sqrt_z_ = cplx(0.0, kappa);  // exact, avoids a rounding in sqrt
  return e;
}

std::optional<double> Energy::kappa() const {
  if (z_.imag() == 0.0 && z_.real() <= 0.0) return sqrt_z_.imag();
  return std::nullopt;
}

}  // namespace krein
