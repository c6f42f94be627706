#include "krein/linalg.hpp"

#include <algorithm>
#include <limits>

namespace krein {

namespace {
// Jacobi is the more accurate choice for the small matrices of the finite
// and point models; divide and conquer keeps segment grids fast.
RVector singular_values(const CMatrix& m) {
  if (std::min(m.rows(), m.cols()) <= 32) return Eigen::JacobiSVD<CMatrix>(m).singularValues();
  return Eigen::BDCSVD<CMatrix>(m).singularValues();
}
}  // namespace

double spectral_norm(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return singular_values(m)(0);
}

double min_singular_value(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  const RVector s = singular_values(m);
  return s(s.size() - 1);
}

double condition_number(const CMatrix& m) {
  if (m.size() == 0) return 1.0;
  const RVector s = singular_values(m);
  const double smin = s(s.size() - 1);
  if (smin == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smin;
}

double hermitian_deviation(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

double max_row_sum(const CMatrix& m) {
  if (m.size() == 0) return 0.0;
  return m.cwiseAbs().rowwise().sum().maxCoeff();
}

}  // namespace krein
