#include "krein/laplace_kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "krein/errors.hpp"
#include "krein/parallel.hpp"
#include "krein/quadrature.hpp"

namespace krein {

namespace {

constexpr double kCoincidenceTolerance = 1e-12;
// e^{-40} is far below the quadrature tolerance
constexpr double kDecayLengths = 40.0;

// sin(k x) / k, continuous through k = 0
cplx sin_over(cplx k, double x) {
  const cplx t = k * x;
  if (std::abs(t) < 1e-4) return x * (1.0 - t * t / 6.0 + t * t * t * t / 120.0);
  return std::sin(t) / k;
}

}  // namespace

PointConfiguration::PointConfiguration(std::vector<Point> centers)
    : centers_(std::move(centers)), min_distance_(std::numeric_limits<double>::infinity()) {
  for (std::size_t m = 0; m < centers_.size(); ++m) {
    if (!centers_[m].allFinite()) throw InvalidArgument("center coordinates must be finite");
    for (std::size_t n = m + 1; n < centers_.size(); ++n) {
      const double r = (centers_[m] - centers_[n]).norm();
      if (r < kCoincidenceTolerance) {
        throw CoincidentCenters("centers " + std::to_string(m) + " and " + std::to_string(n) +
                                " coincide");
      }
      min_distance_ = std::min(min_distance_, r);
    }
  }
}

cplx free_green(const Energy& e, double r) {
  if (!(r > 0.0)) throw ZeroSeparation("free_green needs r > 0, got " + std::to_string(r));
  return std::exp(kI * e.sqrt_z() * r) / (4.0 * kPi * r);
}

CMatrix point_q_matrix(const PointConfiguration& cfg, const Energy& e) {
  const auto n = static_cast<Eigen::Index>(cfg.size());
  CMatrix q(n, n);
  const cplx diag = kI * e.sqrt_z() / (4.0 * kPi);
  const auto& x = cfg.centers();
  for (Eigen::Index m = 0; m < n; ++m) {
    q(m, m) = diag;
    for (Eigen::Index j = m + 1; j < n; ++j) {
      const cplx g = free_green(e, (x[m] - x[j]).norm());
      q(m, j) = g;
      q(j, m) = g;
    }
  }
  return q;
}

GreenInnerProduct green_inner_product(const Energy& e, const Energy& e0, const Point& a,
                                      const Point& b) {
  const cplx z = e.z();
  const cplx z0 = e0.z();
  if (std::abs(z - z0) <= 1e-14 * (1.0 + std::abs(z))) {
    throw CoincidentShift("green_inner_product needs z != z0");
  }
  const cplx k = e.sqrt_z();
  const cplx k0 = e0.sqrt_z();
  const double decay = k.imag() + k0.imag();
  if (!(decay > 0.0)) throw InvalidArgument("neither Green function decays");

  const double sep = (a - b).norm();
  GreenInnerProduct out;
  if (sep < kCoincidenceTolerance) {
    out.closed_form = kI * (k - k0) / (4.0 * kPi * (z - z0));
    // |x - a|^2 g(z|r) g(z0|r) integrated over the sphere of radius r
    auto integrand = [&](double r) { return std::exp(kI * (k + k0) * r) / (4.0 * kPi); };
    out.quadrature = integrate(integrand, 0.0, kDecayLengths / decay);
  } else {
    out.closed_form = (free_green(e, sep) - free_green(e0, sep)) / (z - z0);
    // Radial integral about a of g(z|r) times the spherical mean of g(z0|.-b)
    // at radius r; the mean has a kink at r = sep.
    const double scale = 4.0 * kPi * sep;
    auto inner = [&](double r) {
      return std::exp(kI * k * r) * std::exp(kI * k0 * sep) * sin_over(k0, r) / scale;
    };
    auto outer = [&](double r) {
      return std::exp(kI * (k + k0) * r) * sin_over(k0, sep) / scale;
    };
    out.quadrature = integrate(inner, 0.0, sep) + integrate(outer, sep, sep + kDecayLengths / decay);
  }
  out.discrepancy = std::abs(out.quadrature - out.closed_form);
  return out;
}

RMatrix gram_neg_energy(const PointConfiguration& cfg, double kappa) {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  const auto n = static_cast<Eigen::Index>(cfg.size());
  const auto& x = cfg.centers();
  RMatrix gamma(n, n);
  for (Eigen::Index m = 0; m < n; ++m) {
    for (Eigen::Index j = 0; j < n; ++j) {
      gamma(m, j) = std::exp(-kappa * (x[m] - x[j]).norm()) / (8.0 * kPi * kappa);
    }
  }
  return gamma;
}

double gram_offdiag_norm(const PointConfiguration& cfg, double kappa) {
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  const auto& x = cfg.centers();
  std::vector<double> rows(x.size(), 0.0);
  parallel_for(x.size(), [&](std::size_t m) {
    double s = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      if (j != m) s += std::exp(-kappa * (x[m] - x[j]).norm());
    }
    rows[m] = s;
  });
  return rows.empty() ? 0.0 : *std::max_element(rows.begin(), rows.end());
}

TailBound lattice_tail_bound(const PointConfiguration& cfg, std::size_t m, double kappa) {
  if (m >= cfg.size()) throw InvalidArgument("center index out of range");
  if (!(kappa > 0.0)) throw InvalidArgument("kappa must be positive");
  const auto& x = cfg.centers();
  TailBound out;
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (j != m) out.rowsum += std::exp(-kappa * (x[m] - x[j]).norm());
  }
  const double kd = kappa * cfg.min_distance();
  if (std::isinf(kd)) return out;  // a single point: both sides vanish

  auto shell_term = [kd](double n) { return (3.0 * n * n + 0.25) * std::exp(-(n - 0.5) * kd); };
  double bound = 3.25 * std::exp(-kd);
  for (long n = 2; n < 10'000'000; ++n) {
    const double term = shell_term(static_cast<double>(n));
    bound += term;
    const bool decreasing = shell_term(static_cast<double>(n + 1)) < term;
    if (decreasing && term < 1e-16) break;
  }
  out.bound = bound;
  return out;
}

}  // namespace krein
