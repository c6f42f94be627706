#include "krein/finite_model.hpp"

#include <algorithm>
#include <string>

#include "krein/errors.hpp"

namespace krein {

namespace {

constexpr double kShiftTolerance = 1e-10;
constexpr double kRankTolerance = 1e-10;

CMatrix hermitize(const CMatrix& m) { return (m + m.adjoint()) / 2.0; }

void require_invertible_w(const CMatrix& w) {
  const double cond = condition_number(w);
  if (!(cond < kInvertibleCondition)) {
    throw NonInvertibleW("condition number " + std::to_string(cond) +
                         "; use compress_singular_w for singular couplings");
  }
}

// Krein formula without the W-invertibility precondition. Q(z) + W is
// invertible for every Hermitian W at nonreal z, so this is also the route
// for the singular-W restriction.
CMatrix krein_formula(const FiniteModel& model, cplx z) {
  const CMatrix r = finite_resolvent(model.a(), z);
  if (model.rank() == 0) return r;
  const CMatrix r_f = r * model.f();
  const CMatrix rbar_f = finite_resolvent(model.a(), std::conj(z)) * model.f();
  const CMatrix q_plus_w = model.f().adjoint() * r_f + model.w();
  const double cond = condition_number(q_plus_w);
  if (!(cond < kInvertibleCondition)) {
    throw QPlusWSingular("condition number " + std::to_string(cond) + " at z = (" +
                         std::to_string(z.real()) + ", " + std::to_string(z.imag()) + ")");
  }
  return r - r_f * q_plus_w.partialPivLu().solve(rbar_f.adjoint());
}

CMatrix random_complex(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CMatrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j) {
    for (Eigen::Index i = 0; i < rows; ++i) {
      const double re = unit(rng);
      const double im = unit(rng);
      m(i, j) = cplx(re, im);
    }
  }
  return m;
}

}  // namespace

FiniteModel::FiniteModel(CMatrix a, CMatrix f, CMatrix w)
    : a_(std::move(a)), f_(std::move(f)), w_(std::move(w)) {
  if (a_.rows() != a_.cols()) throw InvalidModel("A must be square");
  if (f_.rows() != a_.rows() && f_.cols() > 0) {
    throw InvalidModel("channel vectors must have the dimension of A");
  }
  if (f_.cols() == 0) f_.resize(a_.rows(), 0);
  if (w_.rows() != f_.cols() || w_.cols() != f_.cols()) {
    throw InvalidModel("W must be N x N with N the number of channel vectors");
  }
  if (f_.cols() > a_.rows()) throw InvalidModel("more channel vectors than the dimension");
  if (hermitian_deviation(a_) > kHermitianTolerance) throw InvalidModel("A is not Hermitian");
  if (hermitian_deviation(w_) > kHermitianTolerance) throw NonHermitianW("W is not Hermitian");
  if (f_.cols() > 0) {
    const RVector s = Eigen::JacobiSVD<CMatrix>(f_).singularValues();
    if (!(s(s.size() - 1) > kRankTolerance * s(0))) {
      throw InvalidModel("channel vectors are linearly dependent");
    }
  }
}

CMatrix finite_resolvent(const CMatrix& a, cplx z) {
  const Eigen::Index n = a.rows();
  if (n == 0) return CMatrix(0, 0);
  const RVector spectrum =
      Eigen::SelfAdjointEigenSolver<CMatrix>(a, Eigen::EigenvaluesOnly).eigenvalues();
  double gap = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < n; ++i) gap = std::min(gap, std::abs(z - spectrum(i)));
  if (gap <= kShiftTolerance) {
    throw SingularShift("distance to the spectrum is " + std::to_string(gap));
  }
  const CMatrix shifted = a - z * CMatrix::Identity(n, n);
  return shifted.partialPivLu().solve(CMatrix::Identity(n, n));
}

QMatrixFD gram_q(const FiniteModel& model, cplx z) {
  if (model.rank() == 0) return {z, CMatrix(0, 0)};
  const CMatrix r = finite_resolvent(model.a(), z);
  return {z, model.f().adjoint() * r * model.f()};
}

CMatrix krein_rank_n(const FiniteModel& model, cplx z) {
  require_invertible_w(model.w());
  return krein_formula(model, z);
}

CMatrix perturbed_operator(const FiniteModel& model) {
  if (model.rank() == 0) return model.a();
  require_invertible_w(model.w());
  const CMatrix w_inv = model.w().inverse();
  return hermitize(model.a() + model.f() * w_inv * model.f().adjoint());
}

CMatrix direct_perturbed(const FiniteModel& model, cplx z) {
  return finite_resolvent(perturbed_operator(model), z);
}

CompressedResolvent compress_singular_w(const FiniteModel& model, cplx z) {
  const Eigen::Index n = model.dim();
  const Eigen::Index rank = model.rank();
  if (rank == 0) throw InvertibleW("no channel vectors, nothing to compress");

  Eigen::SelfAdjointEigenSolver<CMatrix> eig(model.w());
  const RVector lambda = eig.eigenvalues();
  const double scale = lambda.cwiseAbs().maxCoeff();
  std::vector<Eigen::Index> null_columns;
  for (Eigen::Index i = 0; i < rank; ++i) {
    if (std::abs(lambda(i)) * kInvertibleCondition <= scale || scale == 0.0) {
      null_columns.push_back(i);
    }
  }
  if (null_columns.empty()) throw InvertibleW("W has a trivial null space; use krein_rank_n");

  const Eigen::Index k = static_cast<Eigen::Index>(null_columns.size());
  CMatrix null_w(rank, k);
  for (Eigen::Index j = 0; j < k; ++j) null_w.col(j) = eig.eigenvectors().col(null_columns[j]);

  const CMatrix span = model.f() * null_w;
  const CMatrix q_full = Eigen::HouseholderQR<CMatrix>(span).householderQ();

  CompressedResolvent out;
  out.kernel_basis = q_full.leftCols(k);
  out.complement_basis = q_full.rightCols(n - k);
  out.projector = out.complement_basis * out.complement_basis.adjoint();
  out.full = krein_formula(model, z);
  out.restricted = out.complement_basis.adjoint() * out.full * out.complement_basis;
  out.kernel_residual = spectral_norm(out.full * out.kernel_basis);
  return out;
}

double hilbert_residual(const ResolventMap& resolvent, cplx z1, cplx z2) {
  const CMatrix r1 = resolvent(z1);
  const CMatrix r2 = resolvent(z2);
  return spectral_norm(r1 - r2 - (z1 - z2) * r1 * r2);
}

double conjugate_symmetry_deviation(const ResolventMap& resolvent, cplx z) {
  return spectral_norm(resolvent(std::conj(z)) - resolvent(z).adjoint());
}

FiniteModel random_finite_model(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank) {
  const CMatrix m = random_complex(rng, n, n);
  CMatrix f = random_complex(rng, n, rank);
  const CMatrix mw = random_complex(rng, rank, rank);
  return FiniteModel(hermitize(m), std::move(f), hermitize(mw));
}

FiniteModel random_singular_w_model(std::mt19937_64& rng, Eigen::Index n, Eigen::Index rank,
                                    Eigen::Index nullity) {
  if (nullity < 1 || nullity > rank) throw InvalidArgument("nullity must lie in [1, rank]");
  const CMatrix m = random_complex(rng, n, n);
  CMatrix f = random_complex(rng, n, rank);
  const CMatrix u = Eigen::HouseholderQR<CMatrix>(random_complex(rng, rank, rank)).householderQ();
  std::uniform_real_distribution<double> magnitude(0.5, 2.0);
  std::bernoulli_distribution sign;
  RVector d = RVector::Zero(rank);
  for (Eigen::Index i = 0; i < rank - nullity; ++i) {
    const double mag = magnitude(rng);
    d(i) = sign(rng) ? mag : -mag;
  }
  const CMatrix w = u * d.cast<cplx>().asDiagonal() * u.adjoint();
  return FiniteModel(hermitize(m), std::move(f), hermitize(w));
}

cplx random_nonreal(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> re(-3.0, 3.0);
  std::uniform_real_distribution<double> im(0.5, 3.0);
  std::bernoulli_distribution lower;
  const double x = re(rng);
  const double y = im(rng);
  return {x, lower(rng) ? -y : y};
}

}  // namespace krein
