#include "krein_cli/suites.hpp"

#include <algorithm>
#include <random>

#include "krein/finite_model.hpp"
#include "krein/laplace_kernels.hpp"

namespace krein::cli {

FiniteSuiteResult run_finite_suite(std::uint64_t seed, const FiniteSpec& spec) {
  std::mt19937_64 rng(seed);
  FiniteSuiteResult out;
  for (int trial = 0; trial < spec.models; ++trial) {
    const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(spec.max_dim - 1));
    const Eigen::Index max_rank = std::min<Eigen::Index>(spec.max_rank, n - 1);
    const Eigen::Index rank = 1 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(max_rank));
    const FiniteModel m = random_finite_model(rng, n, rank);
    const ResolventMap r1 = [&](cplx z) { return krein_rank_n(m, z); };
    for (int k = 0; k < spec.energies; ++k) {
      const cplx z = random_nonreal(rng);
      const cplx z2 = random_nonreal(rng);
      const CMatrix direct = direct_perturbed(m, z);
      out.oracle_relative =
          std::max(out.oracle_relative, spectral_norm(krein_rank_n(m, z) - direct) / spectral_norm(direct));
      out.hilbert = std::max(out.hilbert, hilbert_residual(r1, z, z2));
      out.conjugate_symmetry = std::max(out.conjugate_symmetry, conjugate_symmetry_deviation(r1, z));
      ++out.instances;
    }

    const Eigen::Index nullity = 1 + static_cast<Eigen::Index>(rng() % static_cast<std::uint64_t>(rank));
    const FiniteModel singular = random_singular_w_model(rng, n, rank, nullity);
    const cplx z1 = random_nonreal(rng);
    const cplx z2 = random_nonreal(rng);
    const ResolventMap restricted = [&](cplx z) { return compress_singular_w(singular, z).restricted; };
    out.compression_kernel = std::max(out.compression_kernel, compress_singular_w(singular, z1).kernel_residual);
    out.compressed_hilbert = std::max(out.compressed_hilbert, hilbert_residual(restricted, z1, z2));
    out.compressed_conjugate_symmetry =
        std::max(out.compressed_conjugate_symmetry, conjugate_symmetry_deviation(restricted, z1));
  }
  return out;
}

PointSuiteResult run_point_suite(const PointModel& model, double kappa_lo, double kappa_hi, int scan,
                                 const std::vector<Energy>& energies, std::uint64_t seed) {
  PointSuiteResult out;
  out.states = bound_states(model, kappa_lo, kappa_hi, scan);
  for (const BoundState& st : out.states) {
    const Field psi = [&](const Point& x) { return bound_state_wavefunction(model, st, x); };
    for (std::size_t m = 0; m < model.size(); ++m) {
      out.boundary_condition = std::max(out.boundary_condition, boundary_condition_residual(model, psi, m));
    }
  }

  const auto& centers = model.configuration().centers();
  Point lo = centers.front();
  Point hi = centers.front();
  for (const Point& c : centers) {
    lo = lo.cwiseMin(c);
    hi = hi.cwiseMax(c);
  }
  std::mt19937_64 rng(seed);
  auto draw = [&]() {
    Point p;
    for (int a = 0; a < 3; ++a) p[a] = std::uniform_real_distribution<double>(lo[a] - 1.0, hi[a] + 1.0)(rng);
    return p;
  };
  for (const Energy& e : energies) {
    for (int pair = 0; pair < 8; ++pair) {
      const Point x = draw();
      const Point y = draw();
      const cplx gxy = perturbed_green(model, e, x, y);
      const double scale = std::abs(gxy);
      out.kernel_symmetry = std::max(out.kernel_symmetry, std::abs(gxy - perturbed_green(model, e, y, x)) / scale);
      if (!e.is_real()) {
        const cplx conj_yx = std::conj(perturbed_green(model, e.conj(), y, x));
        // symmetric and W Hermitian: g(conj z; y, x) = conj g(z; x, y)
        out.kernel_symmetry = std::max(out.kernel_symmetry, std::abs(gxy - conj_yx) / scale);
      }
    }
  }
  return out;
}

SegmentSuiteResult run_segment_suite(const SegmentModel& model, const std::vector<Energy>& energies) {
  SegmentSuiteResult out;
  out.lambda1 = build_sturm_liouville(model).eigenvalues(0);
  for (const Energy& e : energies) {
    const CMatrix gs = symmetrize(model, gstar_g_matrix(model, e));
    const CMatrix qs = symmetrize(model, build_segment_q(model, e));
    const cplx dz = e.z() - std::conj(e.z());
    out.gstar_g = std::max(out.gstar_g, spectral_norm((qs - qs.adjoint()) / dz - gs));
    const double norm = spectral_norm(gs);
    out.gstar_g_norm = std::max(out.gstar_g_norm, norm);
    out.norm_bound_excess =
        std::max(out.norm_bound_excess, norm - 1.0 / (8.0 * kPi * e.sqrt_z().imag()));
    const CMatrix core = SegmentResolvent(model, e).correction_core();
    const CMatrix core_conj = SegmentResolvent(model, e.conj()).correction_core();
    out.conjugate_symmetry = std::max(out.conjugate_symmetry, (core_conj - core.adjoint()).cwiseAbs().maxCoeff());
  }
  return out;
}

}  // namespace krein::cli
