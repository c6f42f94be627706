#pragma once

#include <vector>

#include "krein/energy.hpp"
#include "krein/linalg.hpp"

namespace krein {

/// Finite set of distinct points in R^3 and their minimal pairwise distance.
class PointConfiguration {
 public:
  /// Throws CoincidentCenters when two centers are closer than 1e-12.
  explicit PointConfiguration(std::vector<Point> centers);

  const std::vector<Point>& centers() const { return centers_; }
  std::size_t size() const { return centers_.size(); }
  /// Minimal pairwise distance; +infinity for fewer than two points.
  double min_distance() const { return min_distance_; }

 private:
  std::vector<Point> centers_;
  double min_distance_;
};

/// Kernel of the free resolvent, e^{i sqrt(z) r} / (4 pi r). Throws
/// ZeroSeparation for r <= 0.
cplx free_green(const Energy& e, double r);

/// Q(z) of a point set: i sqrt(z)/(4 pi) on the diagonal and
/// free_green(z, |x_m - x_n|) off it.
CMatrix point_q_matrix(const PointConfiguration& cfg, const Energy& e);

/// (g_a(z), g_b(conj z0)) for the free Green functions centred at a and b.
struct GreenInnerProduct {
  cplx closed_form;     ///< [g(z|r) - g(z0|r)] / (z - z0), or its r -> 0 limit
  cplx quadrature;      ///< the 3D integral reduced to an adaptive radial quadrature
  double discrepancy = 0.0;  ///< |quadrature - closed_form|
};

/// Throws CoincidentShift if z == z0 and InvalidArgument when neither kernel
/// decays (Im sqrt z + Im sqrt z0 == 0).
GreenInnerProduct green_inner_product(const Energy& e, const Energy& e0, const Point& a,
                                      const Point& b);

/// Gram matrix of g_n(-kappa^2): (1/(8 pi kappa)) e^{-kappa |x_m - x_n|}.
RMatrix gram_neg_energy(const PointConfiguration& cfg, double kappa);

/// Largest off-diagonal row sum of 8 pi kappa Gamma(-kappa^2) = I + Delta,
/// i.e. ||Delta||_inf. Rows are summed in parallel.
double gram_offdiag_norm(const PointConfiguration& cfg, double kappa);

struct TailBound {
  double rowsum = 0.0;  ///< sum_{n != m} e^{-kappa |x_n - x_m|}
  double bound = 0.0;   ///< 13/4 e^{-kappa d} + sum_{n>=2} (3n^2 + 1/4) e^{-(n - 1/2) kappa d}
};

/// Row sum at center m compared with the shell-counting bound. The series is
/// truncated once its terms are decreasing and below 1e-16.
TailBound lattice_tail_bound(const PointConfiguration& cfg, std::size_t m, double kappa);

}  // namespace krein
