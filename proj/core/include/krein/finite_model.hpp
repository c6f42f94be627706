#pragma once

#include <functional>
#include <random>

#include "krein/linalg.hpp"

namespace krein {

/// Finite-dimensional data for a rank-N Krein perturbation: a Hermitian
/// operator A on C^n, channel vectors f_1..f_N (columns of F) and a Hermitian
/// coupling matrix W.
///
/// Construction validates the invariants: A and W Hermitian to 1e-12, F of
/// full column rank (smallest singular value above 1e-10 times the largest).
class FiniteModel {
 public:
  FiniteModel(CMatrix a, CMatrix f, CMatrix w);

  const CMatrix& a() const { return a_; }
  const CMatrix& f() const { return f_; }
  const CMatrix& w() const { return w_; }
  Eigen::Index dim() const { return a_.rows(); }
  Eigen::Index rank() const { return f_.cols(); }

 private:
  CMatrix a_;
  CMatrix f_;
  CMatrix w_;
};

/// Q(z) together with the point it was evaluated at.
struct QMatrixFD {
  cplx z;
  CMatrix q;  // q_mn = (R(z) f_n, f_m)
};

/// (A - zI)^{-1} via a pivoted LU solve. Throws SingularShift when z lies within
/// 1e-10 of an eigenvalue of A.
CMatrix finite_resolvent(const CMatrix& a, cplx z);

QMatrixFD gram_q(const FiniteModel& model, cplx z);

/// Resolvent of the perturbed operator through the rank-N Krein formula
///   R1(z) = R(z) - sum_mn ([Q(z) + W]^{-1})_mn (., R(conj z) f_n) R(z) f_m.
/// Requires an invertible W (NonInvertibleW otherwise; see compress_singular_w).
CMatrix krein_rank_n(const FiniteModel& model, cplx z);

/// The perturbed operator A1 = A + sum_mn (W^{-1})_mn (., f_n) f_m.
CMatrix perturbed_operator(const FiniteModel& model);

/// (A1 - zI)^{-1} from the explicitly assembled A1. Brute-force oracle for
/// krein_rank_n.
CMatrix direct_perturbed(const FiniteModel& model, cplx z);

/// Result of restricting the Krein family to the orthogonal complement of the
/// subspace spanned by F alpha, alpha in ker W.
struct CompressedResolvent {
  CMatrix projector;         ///< orthogonal projector onto the complement (n x n)
  CMatrix kernel_basis;      ///< orthonormal basis of the annihilated subspace (n x k)
  CMatrix complement_basis;  ///< orthonormal basis of the complement (n x (n-k))
  CMatrix full;              ///< R1(z) on the whole space (n x n)
  CMatrix restricted;        ///< B^H R1(z) B for B = complement_basis
  double kernel_residual = 0.0;  ///< spectral norm of R1(z) on the annihilated subspace
};

/// Singular-W case. Q(z) + W stays invertible for nonreal z, so the Krein
/// formula is evaluated directly and then restricted. Throws InvertibleW when
/// W has no null space.
CompressedResolvent compress_singular_w(const FiniteModel& model, cplx z);

using ResolventMap = std::function<CMatrix(cplx)>;

/// Spectral norm of R(z1) - R(z2) - (z1 - z2) R(z1) R(z2).
double hilbert_residual(const ResolventMap& resolvent, cplx z1, cplx z2);

/// Spectral norm of R(conj z) - R(z)^H.
double conjugate_symmetry_deviation(const ResolventMap& resolvent, cplx z);

/// Random instances for property checks: A = (M + M^H)/2 with entries of M
/// uniform on the complex unit square, F with the same entry law, and a
/// Hermitian W built the same way.
FiniteModel random_finite_model(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank);

/// As random_finite_model, but W = U diag(d) U^H has `nullity` zero eigenvalues.
FiniteModel random_singular_w_model(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank,
                                    Eigen::Index nullity);

/// Nonreal z with |Re z| <= 3 and 0.5 <= |Im z| <= 3, either half-plane.
cplx random_nonreal(std::mt19937_64& rng);

}  // namespace krein
