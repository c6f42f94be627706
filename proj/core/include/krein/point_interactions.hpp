#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "krein/free_resolvent.hpp"
#include "krein/laplace_kernels.hpp"

namespace krein {

/// Zero-range interactions at the centers of a PointConfiguration, coupled
/// through a Hermitian matrix W. For diagonal W the entries are the strengths
/// alpha_m of the individual point potentials.
///
/// Sign convention: with q_mm(z) = i sqrt(z)/(4 pi), a single center binds for
/// alpha > 0, at kappa = 4 pi alpha (E = -16 pi^2 alpha^2). Functions in the
/// domain satisfy, at every center m,
///   lim d/drho_m (rho_m f) + 4 pi sum_n w_mn lim (rho_n f) = 0.
class PointModel {
 public:
  /// Throws NonHermitianW (deviation above 1e-12) or InvalidModel on a size
  /// mismatch.
  PointModel(PointConfiguration cfg, CMatrix w);

  const PointConfiguration& configuration() const { return cfg_; }
  const CMatrix& w() const { return w_; }
  std::size_t size() const { return cfg_.size(); }

 private:
  PointConfiguration cfg_;
  CMatrix w_;
};

/// Validating factory; throws CoincidentCenters or NonHermitianW.
PointModel make_point_model(std::vector<Point> centers, CMatrix w);

/// Diagonal coupling W = diag(alphas).
PointModel make_point_model(std::vector<Point> centers, std::span<const double> alphas);

/// dims[0] x dims[1] x dims[2] cubic lattice with the given spacing, first
/// point at origin, x-index fastest.
PointConfiguration make_lattice(std::array<int, 3> dims, double spacing, const Point& origin);

/// Kernel of the perturbed resolvent:
///   g(z|x-y) - sum_mn ([Q(z)+W]^{-1})_mn g(z|x-x_m) g(z|y-x_n).
/// Throws AtCenter if x or y sits on a center (or x == y), ResonantEnergy if
/// Q(z) + W is singular.
cplx perturbed_green(const PointModel& model, const Energy& e, const Point& x, const Point& y);

struct BoundState {
  double energy = 0.0;  ///< E = -kappa^2
  double kappa = 0.0;
  CVector coeffs;       ///< unit null vector of Q(-kappa^2) + W
};

/// Every kappa in [kappa_lo, kappa_hi] where an eigenvalue of the Hermitian
/// matrix Q(-kappa^2) + W changes sign. A uniform scan tracks the number of
/// negative eigenvalues; each change is refined by bisection on the
/// corresponding ordered eigenvalue to |dkappa| < 1e-12. Sorted by kappa.
std::vector<BoundState> bound_states(const PointModel& model, double kappa_lo, double kappa_hi,
                                     int scan_points = 400);

/// psi(x) = sum_m c_m e^{-kappa |x - x_m|} / (4 pi |x - x_m|). Throws AtCenter.
cplx bound_state_wavefunction(const PointModel& model, const BoundState& state, const Point& x);

/// Extrapolated one-sided limits of a field along a ray leaving a center.
struct CenterLimits {
  cplx value;       ///< lim rho f
  cplx derivative;  ///< lim d/drho (rho f)
};

struct BoundaryOptions {
  /// Unit direction of the approach ray.
  Point direction = Point(1.0, 1.0, 1.0).normalized();
  /// First step; rho_k = rho0 2^{-k}, k = 0..6. Non-positive means 1e-2 * d
  /// (1e-2 for a single center).
  double rho0 = 0.0;
  /// Successive Richardson stages must agree to this.
  double stage_tolerance = 1e-4;
};

using Field = std::function<cplx(const Point&)>;

/// Throws NonConvergentExtrapolation when the Richardson stages disagree.
CenterLimits center_limits(const PointModel& model, const Field& f, std::size_t m,
                           const BoundaryOptions& options = {});

/// |lim d/drho_m (rho_m f) + 4 pi sum_n w_mn lim (rho_n f)| at center m.
double boundary_condition_residual(const PointModel& model, const Field& f, std::size_t m,
                                   const BoundaryOptions& options = {});

/// R_W(z) h at the evaluation points:
///   (R(z)h)(x) - sum_mn ([Q(z)+W]^{-1})_mn (R(z)h)(x_n) g(z|x - x_m),
/// using (h, g_n(conj z)) = (R(z)h)(x_n). Points are evaluated in parallel.
GridFunction apply_resolvent(const PointModel& model, const Energy& e, const RadialSource& source,
                             std::span<const Point> eval_points);

}  // namespace krein
