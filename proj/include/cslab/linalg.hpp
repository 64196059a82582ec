#ifndef CSLAB_LINALG_HPP
#define CSLAB_LINALG_HPP

#include <cslab/errors.hpp>

#include <Eigen/Dense>

#include <complex>
#include <string>
#include <vector>

namespace cslab {

using Eigen::Index;
using complexd = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using IndexSet = std::vector<Index>;

// sigma_min <= kRankTolerance * ||M|| counts as rank deficient.
inline constexpr double kRankTolerance = 1e-10;

template <typename Derived>
Eigen::VectorXd singular_values(const Eigen::MatrixBase<Derived>& M)
{
  using Plain = Matrix<typename Derived::Scalar>;
  if (M.size() == 0) return Eigen::VectorXd();
  Eigen::JacobiSVD<Plain> svd(M.eval());
  return svd.singularValues();
}

template <typename Derived>
double smallest_singular_value(const Eigen::MatrixBase<Derived>& M)
{
  if (M.rows() < M.cols())
    throw DimensionError("smallest_singular_value: matrix has fewer rows ("
                         + std::to_string(M.rows()) + ") than columns ("
                         + std::to_string(M.cols()) + ")");
  if (M.cols() == 0) return 0.0;
  // Eigen orders singular values decreasingly.
  const Eigen::VectorXd sv = singular_values(M);
  return sv(sv.size() - 1);
}

template <typename Derived>
double operator_norm(const Eigen::MatrixBase<Derived>& M)
{
  if (M.size() == 0) return 0.0;
  return singular_values(M)(0);
}

/// Moore-Penrose pseudo-inverse of a tall matrix with trivial kernel,
/// B^+ = (B^* B)^{-1} B^*, evaluated through the thin SVD.
///
/// Throws RankDeficientError when sigma_min(B) <= kRankTolerance * ||B||.
template <typename Derived>
Matrix<typename Derived::Scalar> pseudo_inverse(const Eigen::MatrixBase<Derived>& B)
{
  using Plain = Matrix<typename Derived::Scalar>;
  using Scalar = typename Derived::Scalar;
  if (B.rows() < B.cols())
    throw DimensionError("pseudo_inverse: matrix has fewer rows than columns");
  if (B.cols() == 0) return Matrix<Scalar>(0, B.rows());

  Eigen::JacobiSVD<Plain> svd(B.eval(), Eigen::ComputeThinU | Eigen::ComputeThinV);
  const Eigen::VectorXd& sv = svd.singularValues();
  const double smax = sv(0);
  const double smin = sv(sv.size() - 1);
  if (!(smin > kRankTolerance * smax))
    throw RankDeficientError("pseudo_inverse: matrix is not injective (sigma_min = "
                               + std::to_string(smin) + ")",
                             smin);
  const Eigen::VectorXd inv = sv.cwiseInverse();
  return svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
}

// Column submatrix A_S.
template <typename Derived>
Matrix<typename Derived::Scalar> columns(const Eigen::MatrixBase<Derived>& A, const IndexSet& S)
{
  Matrix<typename Derived::Scalar> out(A.rows(), static_cast<Index>(S.size()));
  for (std::size_t k = 0; k < S.size(); ++k) out.col(static_cast<Index>(k)) = A.col(S[k]);
  return out;
}

} // namespace cslab

#endif
