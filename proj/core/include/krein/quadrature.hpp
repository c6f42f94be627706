#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <span>
#include <string>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "krein/energy.hpp"
#include "krein/errors.hpp"

namespace krein {

inline constexpr unsigned kMaxQuadratureDepth = 30;
inline constexpr double kQuadratureTolerance = 1e-12;

/// Globally adaptive 31-point Gauss-Kronrod over [a, b]: the panel with the
/// largest error estimate is bisected until the summed estimate is at most
/// max(rel_tol * L1, abs_tol). Panels are never split beyond depth 30. Throws
/// QuadratureFailure when the bound is still unmet at that point.
///
/// Boost's own recursive driver compares unscaled panel errors with scaled
/// tolerances, which over-refines short panels; only its rule is used here.
template <class F>
auto integrate(F&& f, double a, double b, double rel_tol = kQuadratureTolerance,
               double abs_tol = 0.0) {
  using Result = decltype(f(a));
  using Rule = boost::math::quadrature::gauss_kronrod<double, 31>;
  if (a == b) return Result{};

  struct Panel {
    double lo, hi;
    unsigned depth;
    Result value;
    double error, l1;
  };
  auto evaluate = [&](double lo, double hi, unsigned depth) {
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    double error = 0.0;
    double l1 = 0.0;
    const Result r = Rule::integrate([&](double t) { return f(mid + half * t); }, -1.0, 1.0, 0, 0.0,
                                     &error, &l1);
    const double scale = std::abs(half);
    return Panel{lo, hi, depth, r * half, error * scale, l1};
  };

  std::vector<Panel> panels{evaluate(a, b, 0)};
  auto total = [&](auto member) {
    double sum = 0.0;
    for (const Panel& p : panels) sum += p.*member;
    return sum;
  };
  while (true) {
    const double error = total(&Panel::error);
    const double l1 = total(&Panel::l1);
    if (error <= std::max(rel_tol * l1, abs_tol)) break;
    auto worst = std::max_element(panels.begin(), panels.end(),
                                  [](const Panel& p, const Panel& q) { return p.error < q.error; });
    if (worst->depth >= kMaxQuadratureDepth) {
      char msg[160];
      std::snprintf(msg, sizeof msg, "error estimate %.3e (L1 %.3e) on [%.17g, %.17g]", error, l1,
                    a, b);
      throw QuadratureFailure(msg);
    }
    const Panel parent = *worst;
    const double mid = 0.5 * (parent.lo + parent.hi);
    *worst = evaluate(parent.lo, mid, parent.depth + 1);
    panels.push_back(evaluate(mid, parent.hi, parent.depth + 1));
  }
  Result value{};
  std::sort(panels.begin(), panels.end(), [](const Panel& p, const Panel& q) { return p.lo < q.lo; });
  for (const Panel& p : panels) value += p.value;
  return value;
}

struct Extrapolation {
  cplx value;
  /// |T(K,K) - T(K-1,K-1)| between the last two diagonal tableau entries.
  double stage_difference = 0.0;
};

/// Richardson extrapolation of samples taken at h_k = h_0 / ratio^k, assuming
/// an error expansion in integer powers of h.
Extrapolation richardson(std::span<const cplx> samples, double ratio = 2.0);

}  // namespace krein
