#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "krein/point_interactions.hpp"
#include "krein/segment.hpp"
#include "krein_cli/config.hpp"

namespace krein::cli {

/// Worst cases over seeded random finite models and nonreal energies.
struct FiniteSuiteResult {
  int instances = 0;
  double oracle_relative = 0.0;     ///< ||krein_rank_n - direct|| / ||direct||
  double hilbert = 0.0;             ///< Krein family, random energy pairs
  double conjugate_symmetry = 0.0;
  double compression_kernel = 0.0;  ///< singular-W companions, one per model
  double compressed_hilbert = 0.0;
  double compressed_conjugate_symmetry = 0.0;
};

FiniteSuiteResult run_finite_suite(std::uint64_t seed, const FiniteSpec& spec);

struct PointSuiteResult {
  std::vector<BoundState> states;
  double boundary_condition = 0.0;  ///< over states and centers
  double kernel_symmetry = 0.0;     ///< relative, g(x,y) = g(y,x) and g(conj z) = conj g(z)^T
};

/// Random probe pairs are drawn within one unit of the centers' bounding box.
PointSuiteResult run_point_suite(const PointModel& model, double kappa_lo, double kappa_hi, int scan,
                                 const std::vector<Energy>& energies, std::uint64_t seed);

struct SegmentSuiteResult {
  double lambda1 = 0.0;
  double gstar_g = 0.0;             ///< ||(Q - Q^H)/(z - conj z) - G*G|| in the orthonormal frame
  double gstar_g_norm = 0.0;        ///< largest ||G*G|| seen
  double norm_bound_excess = -std::numeric_limits<double>::infinity();  ///< max of ||G*G|| - 1/(8 pi Im sqrt z)
  double conjugate_symmetry = 0.0;  ///< correction core at conj z against its adjoint
};

/// Every energy must be nonreal.
SegmentSuiteResult run_segment_suite(const SegmentModel& model, const std::vector<Energy>& energies);

}  // namespace krein::cli
