#include "krein/free_resolvent.hpp"

#include <cmath>

#include "krein/errors.hpp"
#include "krein/quadrature.hpp"

namespace krein {

namespace {

// sin(k x) / (k x), continuous through k x = 0
cplx sinc(cplx t) {
  if (std::abs(t) < 1e-4) return 1.0 - t * t / 6.0 + t * t * t * t / 120.0;
  return std::sin(t) / t;
}

}  // namespace

RadialSource::RadialSource(const Point& center, double sigma, double amplitude,
                           std::optional<cplx> shift)
    : center_(center), sigma_(sigma), amplitude_(amplitude), shift_(shift) {
  if (!center.allFinite()) throw InvalidArgument("source center must be finite");
  if (!(sigma > 0.0) || !std::isfinite(sigma)) throw InvalidArgument("source width must be positive");
  if (!std::isfinite(amplitude)) throw InvalidArgument("source amplitude must be finite");
}

RadialSource RadialSource::gaussian(const Point& center, double sigma, double mass) {
  const double norm = std::pow(2.0 * kPi * sigma * sigma, -1.5);
  return RadialSource(center, sigma, mass * norm, std::nullopt);
}

RadialSource RadialSource::helmholtz_image(const Point& center, double sigma, cplx shift,
                                           double amplitude) {
  return RadialSource(center, sigma, amplitude, shift);
}

double RadialSource::envelope(double r) const {
  return amplitude_ * std::exp(-r * r / (2.0 * sigma_ * sigma_));
}

cplx RadialSource::profile(double r) const {
  const double env = envelope(r);
  if (!shift_) return env;
  const double s2 = sigma_ * sigma_;
  return (3.0 / s2 - r * r / (s2 * s2) - *shift_) * env;
}

cplx apply_free_resolvent(const Energy& e, const RadialSource& source, const Point& p) {
  const cplx k = e.sqrt_z();
  const double dist = (p - source.center()).norm();
  const double cutoff = source.cutoff_radius();

  // r < R: 2i e^{ikR} sin(kr);  r > R: 2i e^{ikr} sin(kR). Both written with
  // sinc so the R -> 0 limit (the value at the center) is regular.
  const cplx phase_far = std::exp(kI * k * dist);
  auto inside = [&](double r) {
    return r * r * source.profile(r) * phase_far * sinc(k * r);
  };
  const cplx sinc_near = sinc(k * dist);
  auto outside = [&](double r) {
    return r * source.profile(r) * std::exp(kI * k * r) * sinc_near;
  };

  cplx value{};
  const double split = std::min(dist, cutoff);
  if (split > 0.0) value += integrate(inside, 0.0, split) / dist;
  if (dist < cutoff) value += integrate(outside, dist, cutoff);
  return value;
}

}  // namespace krein
