#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "krein/free_resolvent.hpp"
#include "krein/linalg.hpp"

namespace krein {

/// Real continuous potential v(x) on the segment.
class Potential {
 public:
  static Potential constant(double value);
  /// v(x) = c[0] + c[1] x + c[2] x^2 + ...
  static Potential polynomial(std::vector<double> coeffs);
  /// Linear interpolation of (x_i, v_i), constant beyond the table ends.
  static Potential tabulated(std::vector<double> x, std::vector<double> v);

  double operator()(double x) const { return eval_(x); }
  const std::string& description() const { return description_; }

 private:
  Potential(std::function<double(double)> eval, std::string description)
      : eval_(std::move(eval)), description_(std::move(description)) {}

  std::function<double(double)> eval_;
  std::string description_;
};

/// The segment [0, l] x {0} x {0} with a quadrature grid and sampled potential.
///
/// Invariants: nodes strictly inside (0, l) and increasing, weights positive
/// and summing to l.
class SegmentModel {
 public:
  /// Midpoint grid: nodes (j - 1/2) l/n, weights l/n.
  static SegmentModel uniform(double length, const Potential& v, int nodes = 200);
  /// `panels` equal panels with an `order`-point Gauss-Legendre rule each;
  /// order is one of 4, 8, 10, 16, 20.
  static SegmentModel gauss_legendre(double length, const Potential& v, int panels, int order);

  double length() const { return length_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  const std::vector<double>& potential() const { return v_; }
  bool is_uniform() const { return uniform_; }

 private:
  SegmentModel(double length, std::vector<double> nodes, std::vector<double> weights,
               const Potential& v, bool uniform);

  double length_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> v_;
  bool uniform_;
};

/// Nystrom matrix of Q(z): entries q(z|x_i, x_j) w_j with the kernel
/// (e^{i sqrt(z) r} - 1)/(4 pi r) and its r -> 0 value i sqrt(z)/(4 pi) on the
/// diagonal.
CMatrix build_segment_q(const SegmentModel& model, const Energy& e);

/// W^{1/2} M W^{-1/2}: the representation of a nodal operator in the
/// orthonormal frame of the weighted inner product. Nystrom matrices of
/// symmetric kernels become symmetric.
CMatrix symmetrize(const SegmentModel& model, const CMatrix& nodal);

/// Dirichlet Sturm-Liouville operator -u'' + v u on the grid.
struct SturmLiouvilleOp {
  RMatrix matrix;       ///< symmetric, acts on nodal values
  RVector eigenvalues;  ///< ascending
};

/// Second-order finite differences on the uniform midpoint grid; the
/// Dirichlet conditions sit half a cell outside the first and last node
/// (ghost value -u_1), which reproduces the sine modes exactly. Requires a
/// uniform grid with at least 16 nodes. Throws ZeroEigenvalue if some
/// |lambda| < 1e-8.
SturmLiouvilleOp build_sturm_liouville(const SegmentModel& model);

/// Nystrom matrix of G(z)^* G(z), kernel [g(z|r) - g(conj z|r)] / (z - conj z).
/// Throws RealEnergy for Im z == 0.
CMatrix gstar_g_matrix(const SegmentModel& model, const Energy& e);

/// (G(z)^* h)(x) = (R(conj z) h)(x, 0, 0).
cplx free_resolvent_on_segment(const Energy& e, const RadialSource& source, double x);

/// The perturbed resolvent R_L(z) = R(z) - G(z) [Q(z) + L]^{-1} G(conj z)^* for
/// one segment model and energy. The factorization of L + Q(z) is computed
/// once at construction and reused for every source.
class SegmentResolvent {
 public:
  /// Throws ZeroEigenvalue (from L) or SingularLPlusQ when L + Q(z) is
  /// numerically singular.
  SegmentResolvent(SegmentModel model, const Energy& e);

  const SegmentModel& model() const { return model_; }
  const Energy& energy() const { return energy_; }
  const SturmLiouvilleOp& sturm_liouville() const { return op_; }
  const CMatrix& q() const { return q_; }

  /// u* = G(conj z)^* h at the nodes, i.e. (R(z) h)(x_j, 0, 0).
  CVector source_trace(const RadialSource& source) const;
  /// [L + Q(z)]^{-1} rhs
  CVector solve(const CVector& rhs) const;

  /// Piecewise-linear interpolant of nodal values, vanishing at 0 and l.
  cplx interpolate(const CVector& nodal, double x) const;

  /// (G(z) u)(p) for the piecewise-linear interpolant u. The 1/r part of the
  /// kernel is integrated in closed form on every panel, so the result stays
  /// accurate arbitrarily close to the segment. Throws OnSegment when p lies on
  /// the segment itself.
  cplx lift(const CVector& nodal, const Point& p) const;

  /// R_L(z) h at the points; optionally returns u_hat = [L + Q]^{-1} u*.
  GridFunction apply(const RadialSource& source, std::span<const Point> points,
                     CVector* u_hat = nullptr) const;

  /// W^{1/2} [L + Q(z)]^{-1} W^{-1/2}, the middle factor of the correction in
  /// the orthonormal frame; conj z maps it to its adjoint.
  CMatrix correction_core() const;

 private:
  SegmentModel model_;
  Energy energy_;
  SturmLiouvilleOp op_;
  CMatrix q_;
  Eigen::PartialPivLU<CMatrix> lu_;
};

/// Convenience wrapper around SegmentResolvent::apply.
GridFunction apply_r_l(const SegmentModel& model, const Energy& e, const RadialSource& source,
                       std::span<const Point> points, CVector* u_hat = nullptr);

struct SegmentLevel {
  double kappa = 0.0;
  double energy = 0.0;  ///< -kappa^2
};

/// kappa in [kappa_lo, kappa_hi] where L + Q(-kappa^2) becomes singular: a
/// uniform scan of its inertia plus bisection to 1e-10. An empty or reversed
/// range yields no levels.
std::vector<SegmentLevel> negative_spectrum(const SegmentModel& model, double kappa_lo,
                                            double kappa_hi, int scan_points = 400);

struct TraceSample {
  double rho = 0.0;
  cplx field;      ///< f = R_L h at (x, rho/sqrt2, rho/sqrt2)
  cplx naive;      ///< -f / ln(rho^2)
  cplx bracket;    ///< f - ln(1/rho^2) u_f - 2 ln2 u_f + int sgn(s-x) ln|s-x| u_f'(s) ds
};

struct TraceReport {
  std::vector<TraceSample> samples;
  cplx u_f;                  ///< extrapolated log coefficient
  cplx u_f_expected;         ///< -u_hat(x) / (4 pi)
  double relative_deviation = 0.0;
  double stage_difference = 0.0;  ///< relative, between the last two fits
  cplx bracket_target;       ///< (L u_hat)(x) = -4 pi (L u_f)(x), from the discrete solve
  double bracket_rate = 0.0; ///< log10 of the ratio of successive bracket increments
};

/// Log-coefficient trace of f = R_L(z) h at segment coordinate x, probed along
/// (x, rho/sqrt2, rho/sqrt2). rho_seq must hold at least two decreasing values
/// in (0, l/10]. u_f comes from fitting f = -u_f ln(rho^2) + b + c rho on the
/// last three radii (ln and constant only, for two radii). Throws
/// NonConvergentExtrapolation when the last two stages differ by more than
/// 0.1 relative, i.e. the logarithm does not dominate f over the radii given.
TraceReport log_boundary_trace(const SegmentResolvent& resolvent, const RadialSource& source,
                               double x, std::span<const double> rho_seq);

/// |int_0^l u(s) / sqrt((x-s)^2 + rho^2) ds
///   - [u(x) ln(1/rho^2) + 2 ln2 u(x) - int_0^l sgn(s-x) ln|s-x| u'(s) ds]|
/// for u with u(0) = u(l) = 0. Requires 0 < x < l and rho < min(x, l - x).
double log_singularity_residual(const std::function<double(double)>& u,
                                const std::function<double(double)>& du, double length,
                                double x, double rho);

}  // namespace krein
