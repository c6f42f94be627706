#include "krein/point_interactions.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "krein/errors.hpp"
#include "krein/parallel.hpp"
#include "krein/quadrature.hpp"

namespace krein {

namespace {

constexpr double kCenterTolerance = 1e-12;
constexpr double kKappaResolution = 1e-12;
constexpr int kRichardsonLevels = 7;

void require_off_centers(const PointConfiguration& cfg, const Point& x, const char* what) {
  for (std::size_t m = 0; m < cfg.size(); ++m) {
    if ((x - cfg.centers()[m]).norm() < kCenterTolerance) {
      throw AtCenter(std::string(what) + " coincides with center " + std::to_string(m));
    }
  }
}

Eigen::PartialPivLU<CMatrix> factor_q_plus_w(const PointModel& model, const Energy& e) {
  const CMatrix q_plus_w = point_q_matrix(model.configuration(), e) + model.w();
  const double cond = condition_number(q_plus_w);
  if (!(cond < kInvertibleCondition)) {
    throw ResonantEnergy("Q(z) + W has condition number " + std::to_string(cond));
  }
  return q_plus_w.partialPivLu();
}

CVector green_column(const PointConfiguration& cfg, const Energy& e, const Point& x) {
  CVector g(static_cast<Eigen::Index>(cfg.size()));
  for (std::size_t m = 0; m < cfg.size(); ++m) {
    g(static_cast<Eigen::Index>(m)) = free_green(e, (x - cfg.centers()[m]).norm());
  }
  return g;
}

RVector q_plus_w_spectrum(const PointModel& model, double kappa, CMatrix* vectors = nullptr) {
  const CMatrix h = point_q_matrix(model.configuration(), Energy::from_kappa(kappa)) + model.w();
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(
      h, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (vectors) *vectors = eig.eigenvectors();
  return eig.eigenvalues();
}

Eigen::Index negative_count(const RVector& mu) {
  return static_cast<Eigen::Index>((mu.array() < 0.0).count());
}

CVector fix_phase(CVector c) {
  Eigen::Index imax = 0;
  c.cwiseAbs().maxCoeff(&imax);
  const cplx pivot = c(imax);
  if (std::abs(pivot) > 0.0) c *= std::conj(pivot) / std::abs(pivot);
  return c.normalized();
}

}  // namespace

PointModel::PointModel(PointConfiguration cfg, CMatrix w) : cfg_(std::move(cfg)), w_(std::move(w)) {
  const auto n = static_cast<Eigen::Index>(cfg_.size());
  if (w_.rows() != n || w_.cols() != n) {
    throw InvalidModel("W must be " + std::to_string(n) + " x " + std::to_string(n));
  }
  if (!w_.allFinite()) throw InvalidModel("W must be finite");
  if (hermitian_deviation(w_) > kHermitianTolerance) throw NonHermitianW("W is not Hermitian");
}

PointModel make_point_model(std::vector<Point> centers, CMatrix w) {
  return PointModel(PointConfiguration(std::move(centers)), std::move(w));
}

PointModel make_point_model(std::vector<Point> centers, std::span<const double> alphas) {
  RVector diag(static_cast<Eigen::Index>(alphas.size()));
  for (std::size_t i = 0; i < alphas.size(); ++i) diag(static_cast<Eigen::Index>(i)) = alphas[i];
  return make_point_model(std::move(centers), CMatrix(diag.cast<cplx>().asDiagonal()));
}

PointConfiguration make_lattice(std::array<int, 3> dims, double spacing, const Point& origin) {
  if (!(spacing > 0.0)) throw InvalidArgument("lattice spacing must be positive");
  if (std::any_of(dims.begin(), dims.end(), [](int d) { return d < 1; })) {
    throw InvalidArgument("lattice dimensions must be positive");
  }
  std::vector<Point> points;
  points.reserve(static_cast<std::size_t>(dims[0]) * dims[1] * dims[2]);
  for (int k = 0; k < dims[2]; ++k) {
    for (int j = 0; j < dims[1]; ++j) {
      for (int i = 0; i < dims[0]; ++i) {
        points.push_back(origin + spacing * Point(i, j, k));
      }
    }
  }
  return PointConfiguration(std::move(points));
}

cplx perturbed_green(const PointModel& model, const Energy& e, const Point& x, const Point& y) {
  const auto& cfg = model.configuration();
  require_off_centers(cfg, x, "x");
  require_off_centers(cfg, y, "y");
  const cplx free = free_green(e, (x - y).norm());
  if (cfg.size() == 0) return free;
  const CVector gx = green_column(cfg, e, x);
  const CVector gy = green_column(cfg, e, y);
  const CVector a = factor_q_plus_w(model, e).solve(gy);
  return free - (gx.transpose() * a).value();
}

std::vector<BoundState> bound_states(const PointModel& model, double kappa_lo, double kappa_hi,
                                     int scan_points) {
  if (!(kappa_lo > 0.0) || !(kappa_lo < kappa_hi)) {
    throw InvalidArgument("bound_states needs 0 < kappa_lo < kappa_hi");
  }
  if (scan_points < 2) throw InvalidArgument("scan needs at least two points");
  std::vector<BoundState> states;
  if (model.size() == 0) return states;

  const double step = (kappa_hi - kappa_lo) / (scan_points - 1);
  double left = kappa_lo;
  RVector mu_left = q_plus_w_spectrum(model, left);
  for (int s = 1; s < scan_points; ++s) {
    const double right = s == scan_points - 1 ? kappa_hi : kappa_lo + s * step;
    const RVector mu_right = q_plus_w_spectrum(model, right);
    const Eigen::Index n_left = negative_count(mu_left);
    const Eigen::Index n_right = negative_count(mu_right);
    for (Eigen::Index idx = std::min(n_left, n_right); idx < std::max(n_left, n_right); ++idx) {
      // the idx-th ordered eigenvalue changes sign on [left, right]
      double a = left;
      double b = right;
      const bool negative_at_a = mu_left(idx) < 0.0;
      while (b - a > kKappaResolution) {
        const double mid = 0.5 * (a + b);
        const bool negative = q_plus_w_spectrum(model, mid)(idx) < 0.0;
        (negative == negative_at_a ? a : b) = mid;
      }
      BoundState st;
      st.kappa = 0.5 * (a + b);
      st.energy = -st.kappa * st.kappa;
      CMatrix vectors;
      q_plus_w_spectrum(model, st.kappa, &vectors);
      st.coeffs = fix_phase(vectors.col(idx));
      states.push_back(std::move(st));
    }
    left = right;
    mu_left = mu_right;
  }
  std::sort(states.begin(), states.end(),
            [](const BoundState& p, const BoundState& q) { return p.kappa < q.kappa; });
  return states;
}

cplx bound_state_wavefunction(const PointModel& model, const BoundState& state, const Point& x) {
  const auto& cfg = model.configuration();
  require_off_centers(cfg, x, "x");
  if (state.coeffs.size() != static_cast<Eigen::Index>(cfg.size())) {
    throw InvalidArgument("bound state does not belong to this model");
  }
  cplx psi{};
  for (std::size_t m = 0; m < cfg.size(); ++m) {
    const double r = (x - cfg.centers()[m]).norm();
    psi += state.coeffs(static_cast<Eigen::Index>(m)) * std::exp(-state.kappa * r) / (4.0 * kPi * r);
  }
  return psi;
}

CenterLimits center_limits(const PointModel& model, const Field& f, std::size_t m,
                           const BoundaryOptions& options) {
  const auto& cfg = model.configuration();
  if (m >= cfg.size()) throw InvalidArgument("center index out of range");
  const Point dir = options.direction.normalized();
  double rho0 = options.rho0;
  if (!(rho0 > 0.0)) rho0 = std::isfinite(cfg.min_distance()) ? 1e-2 * cfg.min_distance() : 1e-2;

  const Point& center = cfg.centers()[m];
  auto weighted = [&](double rho) { return rho * f(center + rho * dir); };

  std::array<cplx, kRichardsonLevels> values;
  std::array<cplx, kRichardsonLevels> slopes;
  double rho = rho0;
  for (int k = 0; k < kRichardsonLevels; ++k, rho *= 0.5) {
    values[k] = weighted(rho);
    slopes[k] = (weighted(1.5 * rho) - weighted(0.5 * rho)) / rho;
  }
  const Extrapolation value = richardson(values);
  const Extrapolation slope = richardson(slopes);
  const double tol_v = options.stage_tolerance * std::max(1.0, std::abs(value.value));
  const double tol_d = options.stage_tolerance * std::max(1.0, std::abs(slope.value));
  if (value.stage_difference > tol_v || slope.stage_difference > tol_d) {
    throw NonConvergentExtrapolation(
        "center " + std::to_string(m) + ": stage differences " +
        std::to_string(value.stage_difference) + ", " + std::to_string(slope.stage_difference));
  }
  return {value.value, slope.value};
}

double boundary_condition_residual(const PointModel& model, const Field& f, std::size_t m,
                                   const BoundaryOptions& options) {
  const auto n = static_cast<Eigen::Index>(model.size());
  if (m >= model.size()) throw InvalidArgument("center index out of range");
  const auto row = static_cast<Eigen::Index>(m);
  cplx coupling{};
  cplx derivative{};
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx w = model.w()(row, j);
    if (j != row && w == cplx{}) continue;
    const CenterLimits lim = center_limits(model, f, static_cast<std::size_t>(j), options);
    coupling += w * lim.value;
    if (j == row) derivative = lim.derivative;
  }
  return std::abs(derivative + 4.0 * kPi * coupling);
}

GridFunction apply_resolvent(const PointModel& model, const Energy& e, const RadialSource& source,
                             std::span<const Point> eval_points) {
  const auto& cfg = model.configuration();
  for (const Point& p : eval_points) require_off_centers(cfg, p, "evaluation point");

  const auto n = static_cast<Eigen::Index>(cfg.size());
  CVector coeffs = CVector::Zero(n);
  if (n > 0) {
    CVector at_centers(n);
    parallel_for(cfg.size(), [&](std::size_t m) {
      at_centers(static_cast<Eigen::Index>(m)) = apply_free_resolvent(e, source, cfg.centers()[m]);
    });
    coeffs = factor_q_plus_w(model, e).solve(at_centers);
  }

  GridFunction out;
  out.points.assign(eval_points.begin(), eval_points.end());
  out.values.resize(eval_points.size());
  out.role = "perturbed_resolvent";
  out.z = e.z();
  parallel_for(eval_points.size(), [&](std::size_t i) {
    const Point& p = eval_points[i];
    cplx v = apply_free_resolvent(e, source, p);
    if (n > 0) v -= (green_column(cfg, e, p).transpose() * coeffs).value();
    out.values[i] = v;
  });
  return out;
}

}  // namespace krein
