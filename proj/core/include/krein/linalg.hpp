#pragma once

#include <Eigen/Dense>

#include "krein/energy.hpp"

namespace krein {

using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;
using Point = Eigen::Vector3d;

/// Largest singular value.
double spectral_norm(const CMatrix& m);

/// Smallest singular value (0 for an empty matrix).
double min_singular_value(const CMatrix& m);

/// 2-norm condition number; infinity when the matrix is singular.
double condition_number(const CMatrix& m);

/// Largest entrywise modulus of m - m^H.
double hermitian_deviation(const CMatrix& m);

/// max_i sum_j |m_ij|
double max_row_sum(const CMatrix& m);

/// Matrices whose 2-norm condition number is below this count as invertible.
inline constexpr double kInvertibleCondition = 1e12;

/// Tolerance for the Hermitian invariants of model inputs.
inline constexpr double kHermitianTolerance = 1e-12;

}  // namespace krein
