#include "krein/segment.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include "krein/errors.hpp"
#include "krein/parallel.hpp"
#include "krein/quadrature.hpp"

namespace krein {

namespace {

constexpr int kMinSturmLiouvilleNodes = 16;
constexpr double kZeroEigenvalue = 1e-8;
constexpr double kSpectrumResolution = 1e-10;
constexpr double kTraceStageTolerance = 1e-1;
// log coefficients below this fraction of |f| count as zero
constexpr double kTraceFloor = 1e-10;
constexpr double kLiftTolerance = 1e-10;

// (e^w - 1) / w, entire
cplx phi1(cplx w) {
  if (std::abs(w) < 1e-2) {
    return 1.0 + w / 2.0 * (1.0 + w / 3.0 * (1.0 + w / 4.0 * (1.0 + w / 5.0 * (1.0 + w / 6.0))));
  }
  return (std::exp(w) - 1.0) / w;
}

// (e^{ikr} - 1) / (4 pi r), with value ik / (4 pi) at r = 0
cplx q_kernel(cplx k, double r) { return kI * k * phi1(kI * k * r) / (4.0 * kPi); }

// asinh(b) - asinh(a) without cancellation when a and b share a sign
double asinh_diff(double a, double b) {
  if (a >= 0.0 && b >= 0.0) {
    return std::log((b + std::hypot(1.0, b)) / (a + std::hypot(1.0, a)));
  }
  if (a <= 0.0 && b <= 0.0) return asinh_diff(-b, -a);
  return std::asinh(b) - std::asinh(a);
}

// antiderivative of sgn(t) ln|t|, continuous through 0
double sgn_log_primitive(double t) {
  const double a = std::abs(t);
  return a > 0.0 ? a * std::log(a) - a : 0.0;
}

template <int N>
void append_gauss_panel(double a, double b, std::vector<double>& nodes, std::vector<double>& weights) {
  using rule = boost::math::quadrature::gauss<double, N>;
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const auto& x = rule::abscissa();
  const auto& w = rule::weights();
  for (std::size_t i = x.size(); i-- > 0;) {
    nodes.push_back(mid - half * x[i]);
    weights.push_back(half * w[i]);
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    nodes.push_back(mid + half * x[i]);
    weights.push_back(half * w[i]);
  }
}

RMatrix real_q_matrix(const SegmentModel& model, double kappa) {
  const auto n = static_cast<Eigen::Index>(model.size());
  const auto& x = model.nodes();
  RMatrix q(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double r = std::abs(x[i] - x[j]);
      q(i, j) = q_kernel(cplx(0.0, kappa), r).real();
    }
  }
  return q;
}

// W^{1/2} M W^{1/2} for a symmetric kernel matrix M
RMatrix weighted_symmetric(const SegmentModel& model, const RMatrix& kernel) {
  const auto n = static_cast<Eigen::Index>(model.size());
  RVector s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = std::sqrt(model.weights()[i]);
  return s.asDiagonal() * kernel * s.asDiagonal();
}

}  // namespace

Potential Potential::constant(double value) {
  if (!std::isfinite(value)) throw InvalidArgument("potential must be finite");
  std::ostringstream d;
  d << "constant " << value;
  return Potential([value](double) { return value; }, d.str());
}

Potential Potential::polynomial(std::vector<double> coeffs) {
  if (coeffs.empty()) coeffs.push_back(0.0);
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw InvalidArgument("polynomial coefficients must be finite");
  }
  std::ostringstream d;
  d << "polynomial of degree " << coeffs.size() - 1;
  return Potential(
      [c = std::move(coeffs)](double x) {
        double acc = 0.0;
        for (std::size_t i = c.size(); i-- > 0;) acc = acc * x + c[i];
        return acc;
      },
      d.str());
}

Potential Potential::tabulated(std::vector<double> x, std::vector<double> v) {
  if (x.size() != v.size() || x.empty()) {
    throw InvalidArgument("tabulated potential needs matching non-empty x and v");
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(v[i])) {
      throw InvalidArgument("tabulated potential must be finite");
    }
    if (i > 0 && !(x[i] > x[i - 1])) throw InvalidArgument("tabulated x must increase");
  }
  std::ostringstream d;
  d << "tabulated, " << x.size() << " points";
  return Potential(
      [x = std::move(x), v = std::move(v)](double t) {
        if (t <= x.front()) return v.front();
        if (t >= x.back()) return v.back();
        const auto it = std::upper_bound(x.begin(), x.end(), t);
        const std::size_t j = static_cast<std::size_t>(it - x.begin());
        const double s = (t - x[j - 1]) / (x[j] - x[j - 1]);
        return (1.0 - s) * v[j - 1] + s * v[j];
      },
      d.str());
}

SegmentModel::SegmentModel(double length, std::vector<double> nodes, std::vector<double> weights,
                           const Potential& v, bool uniform)
    : length_(length), nodes_(std::move(nodes)), weights_(std::move(weights)), uniform_(uniform) {
  if (nodes_.empty() || nodes_.size() != weights_.size()) {
    throw InvalidModel("segment grid needs matching non-empty nodes and weights");
  }
  double total = 0.0;
  for (std::size_t j = 0; j < nodes_.size(); ++j) {
    if (!(nodes_[j] > 0.0 && nodes_[j] < length_)) throw InvalidModel("nodes must lie inside (0, l)");
    if (j > 0 && !(nodes_[j] > nodes_[j - 1])) throw InvalidModel("nodes must increase");
    if (!(weights_[j] > 0.0)) throw InvalidModel("weights must be positive");
    total += weights_[j];
  }
  if (std::abs(total - length_) > 1e-12 * length_) throw InvalidModel("weights must sum to l");
  v_.reserve(nodes_.size());
  for (double x : nodes_) {
    const double value = v(x);
    if (!std::isfinite(value)) throw InvalidModel("potential is not finite on the grid");
    v_.push_back(value);
  }
}

SegmentModel SegmentModel::uniform(double length, const Potential& v, int nodes) {
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("segment length must be positive");
  if (nodes < 1) throw InvalidArgument("segment grid needs at least one node");
  const double h = length / nodes;
  std::vector<double> x(static_cast<std::size_t>(nodes));
  for (int j = 0; j < nodes; ++j) x[static_cast<std::size_t>(j)] = (j + 0.5) * h;
  std::vector<double> w(x.size(), h);
  return SegmentModel(length, std::move(x), std::move(w), v, true);
}

SegmentModel SegmentModel::gauss_legendre(double length, const Potential& v, int panels, int order) {
  if (!(length > 0.0) || !std::isfinite(length)) throw InvalidArgument("segment length must be positive");
  if (panels < 1) throw InvalidArgument("need at least one panel");
  std::vector<double> x;
  std::vector<double> w;
  const double width = length / panels;
  for (int p = 0; p < panels; ++p) {
    const double a = p * width;
    const double b = p + 1 == panels ? length : (p + 1) * width;
    switch (order) {
      case 4: append_gauss_panel<4>(a, b, x, w); break;
      case 8: append_gauss_panel<8>(a, b, x, w); break;
      case 10: append_gauss_panel<10>(a, b, x, w); break;
      case 16: append_gauss_panel<16>(a, b, x, w); break;
      case 20: append_gauss_panel<20>(a, b, x, w); break;
      default: throw InvalidArgument("Gauss-Legendre order must be 4, 8, 10, 16 or 20");
    }
  }
  return SegmentModel(length, std::move(x), std::move(w), v, false);
}

CMatrix build_segment_q(const SegmentModel& model, const Energy& e) {
  const auto n = static_cast<Eigen::Index>(model.size());
  const auto& x = model.nodes();
  const auto& w = model.weights();
  const cplx k = e.sqrt_z();
  CMatrix q(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) q(i, j) = q_kernel(k, std::abs(x[i] - x[j])) * w[j];
  }
  return q;
}

CMatrix symmetrize(const SegmentModel& model, const CMatrix& nodal) {
  const auto n = static_cast<Eigen::Index>(model.size());
  if (nodal.rows() != n || nodal.cols() != n) throw InvalidArgument("matrix does not match the grid");
  RVector s(n);
  for (Eigen::Index i = 0; i < n; ++i) s(i) = std::sqrt(model.weights()[i]);
  return s.cast<cplx>().asDiagonal() * nodal * s.cwiseInverse().cast<cplx>().asDiagonal();
}

SturmLiouvilleOp build_sturm_liouville(const SegmentModel& model) {
  if (!model.is_uniform()) throw InvalidModel("the Sturm-Liouville operator needs a uniform grid");
  const int n = model.size();
  if (n < kMinSturmLiouvilleNodes) {
    throw InvalidModel("the Sturm-Liouville operator needs at least 16 nodes");
  }
  const double h = model.length() / n;
  const double inv_h2 = 1.0 / (h * h);
  SturmLiouvilleOp op;
  op.matrix = RMatrix::Zero(n, n);
  for (int j = 0; j < n; ++j) {
    op.matrix(j, j) = 2.0 * inv_h2 + model.potential()[static_cast<std::size_t>(j)];
    if (j > 0) op.matrix(j, j - 1) = -inv_h2;
    if (j + 1 < n) op.matrix(j, j + 1) = -inv_h2;
  }
  op.matrix(0, 0) += inv_h2;
  op.matrix(n - 1, n - 1) += inv_h2;
  op.eigenvalues = Eigen::SelfAdjointEigenSolver<RMatrix>(op.matrix, Eigen::EigenvaluesOnly).eigenvalues();
  const double smallest = op.eigenvalues.cwiseAbs().minCoeff();
  if (smallest < kZeroEigenvalue) {
    throw ZeroEigenvalue("L has an eigenvalue of modulus " + std::to_string(smallest));
  }
  return op;
}

CMatrix gstar_g_matrix(const SegmentModel& model, const Energy& e) {
  if (e.is_real()) throw RealEnergy("G(z)^* G(z) is only assembled for nonreal z");
  const auto n = static_cast<Eigen::Index>(model.size());
  const auto& x = model.nodes();
  const auto& w = model.weights();
  const cplx k = e.sqrt_z();
  const cplx kc = e.conj().sqrt_z();
  const cplx dz = e.z() - std::conj(e.z());
  const cplx dk = kI * (k - kc);
  CMatrix m(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double r = std::abs(x[i] - x[j]);
      // e^{ikr} - e^{i kc r} = e^{i kc r} (e^{i(k - kc) r} - 1)
      m(i, j) = std::exp(kI * kc * r) * dk * phi1(dk * r) / (4.0 * kPi * dz) * w[j];
    }
  }
  return m;
}

cplx free_resolvent_on_segment(const Energy& e, const RadialSource& source, double x) {
  return apply_free_resolvent(e.conj(), source, Point(x, 0.0, 0.0));
}

SegmentResolvent::SegmentResolvent(SegmentModel model, const Energy& e)
    : model_(std::move(model)), energy_(e), op_(build_sturm_liouville(model_)),
      q_(build_segment_q(model_, e)) {
  const CMatrix system = op_.matrix.cast<cplx>() + q_;
  const double cond = condition_number(symmetrize(model_, system));
  if (!(cond < kInvertibleCondition)) {
    throw SingularLPlusQ("L + Q(z) has condition number " + std::to_string(cond));
  }
  lu_.compute(system);
}

CVector SegmentResolvent::source_trace(const RadialSource& source) const {
  const auto n = static_cast<std::size_t>(model_.size());
  CVector u(static_cast<Eigen::Index>(n));
  parallel_for(n, [&](std::size_t j) {
    u(static_cast<Eigen::Index>(j)) = free_resolvent_on_segment(energy_.conj(), source, model_.nodes()[j]);
  });
  return u;
}

CVector SegmentResolvent::solve(const CVector& rhs) const {
  if (rhs.size() != model_.size()) throw InvalidArgument("right-hand side does not match the grid");
  return lu_.solve(rhs);
}

cplx SegmentResolvent::interpolate(const CVector& nodal, double x) const {
  if (nodal.size() != model_.size()) throw InvalidArgument("nodal vector does not match the grid");
  const auto& s = model_.nodes();
  if (x <= 0.0 || x >= model_.length()) return {};
  const auto it = std::upper_bound(s.begin(), s.end(), x);
  const auto j = static_cast<Eigen::Index>(it - s.begin());
  const double left = j == 0 ? 0.0 : s[static_cast<std::size_t>(j - 1)];
  const double right = j == model_.size() ? model_.length() : s[static_cast<std::size_t>(j)];
  const cplx u_left = j == 0 ? cplx{} : nodal(j - 1);
  const cplx u_right = j == model_.size() ? cplx{} : nodal(j);
  const double t = (x - left) / (right - left);
  return (1.0 - t) * u_left + t * u_right;
}

cplx SegmentResolvent::lift(const CVector& nodal, const Point& p) const {
  if (nodal.size() != model_.size()) throw InvalidArgument("nodal vector does not match the grid");
  const double l = model_.length();
  const double x = p.x();
  const double rho = std::hypot(p.y(), p.z());
  if (rho == 0.0 && x >= 0.0 && x <= l) throw OnSegment("evaluation point lies on the segment");
  const cplx k = energy_.sqrt_z();

  // knots 0, x_1..x_n, l with zero values at both ends
  const auto n = static_cast<std::size_t>(model_.size());
  std::vector<double> knot(n + 2);
  std::vector<cplx> value(n + 2);
  knot[0] = 0.0;
  knot[n + 1] = l;
  for (std::size_t j = 0; j < n; ++j) {
    knot[j + 1] = model_.nodes()[j];
    value[j + 1] = nodal(static_cast<Eigen::Index>(j));
  }

  cplx singular{};
  cplx smooth{};
  for (std::size_t j = 0; j + 1 < knot.size(); ++j) {
    const double sa = knot[j];
    const double sb = knot[j + 1];
    const cplx beta = (value[j + 1] - value[j]) / (sb - sa);
    const cplx alpha = value[j] + beta * (x - sa);  // u = alpha + beta t, t = s - x
    const double ta = sa - x;
    const double tb = sb - x;
    const double da = std::hypot(ta, rho);
    const double db = std::hypot(tb, rho);
    const double log_part = rho > 0.0 ? asinh_diff(ta / rho, tb / rho)
                                      : std::log(std::abs(tb) / std::abs(ta)) * (tb > 0.0 ? 1.0 : -1.0);
    singular += alpha * log_part + beta * ((tb * tb - ta * ta) / (da + db));

    const double scale = std::max(std::abs(value[j]), std::abs(value[j + 1])) * (sb - sa);
    const double abs_tol = kLiftTolerance * std::max(scale, 1e-300);
    const double gap = std::max({0.0, sa - x, x - sb});
    if (rho > 0.0 && gap < sb - sa) {
      // near panel: s = x + rho sinh(y) resolves the kink of D at scale rho
      auto integrand = [&](double y) {
        const double d = rho * std::cosh(y);
        return phi1(kI * k * d) * (alpha + beta * rho * std::sinh(y)) * d;
      };
      smooth += integrate(integrand, std::asinh(ta / rho), std::asinh(tb / rho), kLiftTolerance,
                          abs_tol);
    } else {
      auto integrand = [&](double s) {
        const double d = std::hypot(s - x, rho);
        return phi1(kI * k * d) * (alpha + beta * (s - x));
      };
      smooth += integrate(integrand, sa, sb, kLiftTolerance, abs_tol);
    }
  }
  return (singular + kI * k * smooth) / (4.0 * kPi);
}

GridFunction SegmentResolvent::apply(const RadialSource& source, std::span<const Point> points,
                                     CVector* u_hat) const {
  const CVector solution = solve(source_trace(source));
  GridFunction out;
  out.points.assign(points.begin(), points.end());
  out.values.resize(points.size());
  out.role = "segment_resolvent";
  out.z = energy_.z();
  parallel_for(points.size(), [&](std::size_t i) {
    out.values[i] = apply_free_resolvent(energy_, source, points[i]) - lift(solution, points[i]);
  });
  if (u_hat) *u_hat = solution;
  return out;
}

CMatrix SegmentResolvent::correction_core() const {
  const auto n = static_cast<Eigen::Index>(model_.size());
  const CMatrix inverse = lu_.solve(CMatrix::Identity(n, n));
  return symmetrize(model_, inverse);
}

GridFunction apply_r_l(const SegmentModel& model, const Energy& e, const RadialSource& source,
                       std::span<const Point> points, CVector* u_hat) {
  return SegmentResolvent(model, e).apply(source, points, u_hat);
}

std::vector<SegmentLevel> negative_spectrum(const SegmentModel& model, double kappa_lo,
                                            double kappa_hi, int scan_points) {
  std::vector<SegmentLevel> levels;
  if (!(kappa_lo < kappa_hi)) return levels;
  if (!(kappa_lo > 0.0)) throw InvalidArgument("negative_spectrum needs kappa_lo > 0");
  if (scan_points < 2) throw InvalidArgument("scan needs at least two points");

  // uniform weights: L is already symmetric in the orthonormal frame
  const RMatrix l_sym = build_sturm_liouville(model).matrix;
  auto spectrum = [&](double kappa) -> RVector {
    const RMatrix s = l_sym + weighted_symmetric(model, real_q_matrix(model, kappa));
    return Eigen::SelfAdjointEigenSolver<RMatrix>(s, Eigen::EigenvaluesOnly).eigenvalues();
  };
  auto negatives = [](const RVector& mu) {
    return static_cast<Eigen::Index>((mu.array() < 0.0).count());
  };

  const double step = (kappa_hi - kappa_lo) / (scan_points - 1);
  double left = kappa_lo;
  RVector mu_left = spectrum(left);
  for (int s = 1; s < scan_points; ++s) {
    const double right = s == scan_points - 1 ? kappa_hi : kappa_lo + s * step;
    const RVector mu_right = spectrum(right);
    const Eigen::Index n_left = negatives(mu_left);
    const Eigen::Index n_right = negatives(mu_right);
    for (Eigen::Index idx = std::min(n_left, n_right); idx < std::max(n_left, n_right); ++idx) {
      double a = left;
      double b = right;
      const bool negative_at_a = mu_left(idx) < 0.0;
      while (b - a > kSpectrumResolution) {
        const double mid = 0.5 * (a + b);
        const bool negative = spectrum(mid)(idx) < 0.0;
        (negative == negative_at_a ? a : b) = mid;
      }
      const double kappa = 0.5 * (a + b);
      levels.push_back({kappa, -kappa * kappa});
    }
    left = right;
    mu_left = mu_right;
  }
  std::sort(levels.begin(), levels.end(),
            [](const SegmentLevel& p, const SegmentLevel& q) { return p.kappa < q.kappa; });
  return levels;
}

TraceReport log_boundary_trace(const SegmentResolvent& resolvent, const RadialSource& source,
                               double x, std::span<const double> rho_seq) {
  const SegmentModel& model = resolvent.model();
  const double l = model.length();
  if (!(x > 0.0 && x < l)) throw InvalidArgument("trace point must lie inside (0, l)");
  if (rho_seq.size() < 2) throw InvalidArgument("trace needs at least two radii");
  for (std::size_t i = 0; i < rho_seq.size(); ++i) {
    if (!(rho_seq[i] > 0.0 && rho_seq[i] <= 0.1 * l)) {
      throw InvalidArgument("trace radii must lie in (0, l/10]");
    }
    if (i > 0 && !(rho_seq[i] < rho_seq[i - 1])) throw InvalidArgument("trace radii must decrease");
  }

  const CVector u_star = resolvent.source_trace(source);
  const CVector u_hat = resolvent.solve(u_star);
  const Energy& e = resolvent.energy();

  TraceReport report;
  report.u_f_expected = -resolvent.interpolate(u_hat, x) / (4.0 * kPi);
  // (L u_hat) = u* - Q u_hat on the grid
  const CVector l_u_hat = u_star - resolvent.q() * u_hat;
  report.bracket_target = resolvent.interpolate(l_u_hat, x);

  // int sgn(s - x) ln|s - x| u_f'(s) ds for the piecewise-linear u_f = -u_hat / (4 pi)
  cplx log_moment{};
  {
    const auto n = static_cast<std::size_t>(model.size());
    double sa = 0.0;
    cplx ua{};
    for (std::size_t j = 0; j <= n; ++j) {
      const double sb = j < n ? model.nodes()[j] : l;
      const cplx ub = j < n ? u_hat(static_cast<Eigen::Index>(j)) : cplx{};
      const cplx slope = -(ub - ua) / (sb - sa) / (4.0 * kPi);
      log_moment += slope * (sgn_log_primitive(sb - x) - sgn_log_primitive(sa - x));
      sa = sb;
      ua = ub;
    }
  }

  const double ln2 = std::log(2.0);
  double max_field = 0.0;
  for (double rho : rho_seq) {
    const Point p(x, rho / std::sqrt(2.0), rho / std::sqrt(2.0));
    TraceSample sample;
    sample.rho = rho;
    sample.field = apply_free_resolvent(e, source, p) - resolvent.lift(u_hat, p);
    const double log_rho2 = std::log(rho * rho);
    sample.naive = -sample.field / log_rho2;
    sample.bracket = sample.field + log_rho2 * report.u_f_expected - 2.0 * ln2 * report.u_f_expected +
                     log_moment;
    report.samples.push_back(sample);
    max_field = std::max(max_field, std::abs(sample.field));
  }

  // f = -u_f ln(rho^2) + b + c rho along the ray; the rho term comes from the
  // gradient of R(z)h across the segment. Stages are fits on consecutive
  // triples (pairs when only two radii are given).
  auto fit = [&](std::size_t first, std::size_t count) -> cplx {
    CMatrix a(static_cast<Eigen::Index>(count), static_cast<Eigen::Index>(count));
    CVector rhs(static_cast<Eigen::Index>(count));
    for (std::size_t i = 0; i < count; ++i) {
      const auto& smp = report.samples[first + i];
      const auto row = static_cast<Eigen::Index>(i);
      a(row, 0) = std::log(smp.rho * smp.rho);
      a(row, 1) = 1.0;
      if (count == 3) a(row, 2) = smp.rho;
      rhs(row) = smp.field;
    }
    return -a.partialPivLu().solve(rhs)(0);
  };
  const std::size_t m = report.samples.size();
  cplx previous;
  if (m == 2) {
    report.u_f = fit(0, 2);
    previous = report.u_f;
  } else {
    report.u_f = fit(m - 3, 3);
    previous = m >= 4 ? fit(m - 4, 3) : fit(m - 2, 2);
  }
  // |h(0)| sigma^2 is the size of R(z)h near the source; it keeps the floor
  // meaningful when f itself is quadrature noise (u_hat = 0).
  const double field_scale =
      std::max(max_field, std::abs(source.profile(0.0)) * source.sigma() * source.sigma());
  const double floor = kTraceFloor * field_scale;
  report.stage_difference = std::abs(report.u_f - previous) / std::max(std::abs(report.u_f), floor);
  report.relative_deviation =
      std::abs(report.u_f - report.u_f_expected) / std::max(std::abs(report.u_f_expected), floor);

  if (report.samples.size() >= 3) {
    const auto& s = report.samples;
    const double d1 = std::abs(s[m - 2].bracket - s[m - 3].bracket);
    const double d2 = std::abs(s[m - 1].bracket - s[m - 2].bracket);
    report.bracket_rate = d1 > 0.0 && d2 > 0.0 ? std::log10(d1 / d2) : 0.0;
  }

  if (report.stage_difference > kTraceStageTolerance) {
    throw NonConvergentExtrapolation("log coefficient stages differ by " +
                                     std::to_string(report.stage_difference));
  }
  return report;
}

double log_singularity_residual(const std::function<double(double)>& u,
                                const std::function<double(double)>& du, double length, double x,
                                double rho) {
  if (!(length > 0.0)) throw InvalidArgument("segment length must be positive");
  if (!(x > 0.0 && x < length)) throw InvalidArgument("x must lie inside (0, l)");
  if (!(rho > 0.0 && rho < std::min(x, length - x))) {
    throw InvalidArgument("rho must lie in (0, min(x, l - x))");
  }
  // s = x + rho sinh(y) turns the near-singular kernel into a smooth integrand
  const double near = integrate([&](double y) { return u(x + rho * std::sinh(y)); },
                                std::asinh(-x / rho), std::asinh((length - x) / rho), 1e-13);

  boost::math::quadrature::tanh_sinh<double> ts;
  auto log_part = [&](double a, double b, double sign) {
    double error = 0.0;
    double l1 = 0.0;
    const double value = ts.integrate(
        [&](double s) { return sign * std::log(std::abs(s - x)) * du(s); }, a, b, 1e-13, &error, &l1);
    if (!(error <= std::max(1e-11 * l1, 1e-15))) {
      throw QuadratureFailure("log moment error estimate " + std::to_string(error));
    }
    return value;
  };
  const double moment = log_part(0.0, x, -1.0) + log_part(x, length, 1.0);
  const double expansion = u(x) * std::log(1.0 / (rho * rho)) + 2.0 * std::log(2.0) * u(x) - moment;
  return std::abs(near - expansion);
}

}  // namespace krein
