#ifndef CSLAB_CERTIFY_HPP
#define CSLAB_CERTIFY_HPP

#include <cslab/linalg.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace cslab {

// |<(A_S)^+ a_l, sgn(x_S)>| within this distance of 1 cannot certify the
// strict inequality.
inline constexpr double kCertificateBoundary = 1e-12;
inline constexpr double kSignModulusTolerance = 1e-12;
inline constexpr double kDualEqualityTolerance = 1e-8;

template <typename Scalar>
struct CertificateResult
{
  bool injective = false;
  double sigma_min = 0.0;
  IndexSet off_support;             // increasing
  std::vector<double> correlations; // one per off_support entry
  double max_correlation = 0.0;
  Vector<Scalar> dual_h; // (A_S^+)^* sgn(x_S), lives in C^m
  bool boundary = false; // max_correlation within kCertificateBoundary of 1
  bool holds = false;    // injective && max_correlation < 1 (and not boundary)
};

namespace detail {

template <typename Derived>
void check_support(const Eigen::MatrixBase<Derived>& A, const IndexSet& S)
{
  std::vector<char> seen(static_cast<std::size_t>(A.cols()), 0);
  for (Index j : S) {
    if (j < 0 || j >= A.cols())
      throw DomainError("certificate: support index " + std::to_string(j) + " out of range [0, "
                        + std::to_string(A.cols()) + ")");
    if (seen[static_cast<std::size_t>(j)]++)
      throw DomainError("certificate: support index " + std::to_string(j) + " repeated");
  }
}

} // namespace detail

/// Sufficient condition for x to be the unique l1 minimizer given y = Ax:
/// A_S injective and |<(A_S)^+ a_l, sgn(x_S)>| < 1 for every l outside S.
///
/// The correlations are read off A^* h with h = (A_S^+)^* sgn(x_S), so one
/// pseudo-inverse and one product with A^* suffice. An empty support holds
/// trivially (x = 0).
template <typename DerivedA, typename DerivedS>
CertificateResult<typename DerivedA::Scalar>
fuchs_certificate(const Eigen::MatrixBase<DerivedA>& A, const IndexSet& S,
                  const Eigen::MatrixBase<DerivedS>& signs)
{
  using Scalar = typename DerivedA::Scalar;
  detail::check_support(A, S);
  if (signs.size() != static_cast<Index>(S.size()))
    throw DimensionError("certificate: need one sign per support index");
  for (Index k = 0; k < signs.size(); ++k)
    if (std::abs(std::abs(signs(k)) - 1.0) > kSignModulusTolerance)
      throw DomainError("certificate: sign entry " + std::to_string(k) + " is not of modulus 1");

  CertificateResult<Scalar> out;
  std::vector<char> on_support(static_cast<std::size_t>(A.cols()), 0);
  for (Index j : S) on_support[static_cast<std::size_t>(j)] = 1;
  for (Index j = 0; j < A.cols(); ++j)
    if (!on_support[static_cast<std::size_t>(j)]) out.off_support.push_back(j);

  if (S.empty()) {
    out.injective = true;
    out.sigma_min = std::numeric_limits<double>::infinity();
    out.dual_h = Vector<Scalar>::Zero(A.rows());
    out.correlations.assign(out.off_support.size(), 0.0);
    out.holds = true;
    return out;
  }

  const Matrix<Scalar> AS = columns(A, S);
  if (AS.rows() < AS.cols()) {
    out.sigma_min = 0.0;
    out.max_correlation = std::numeric_limits<double>::infinity();
    return out;
  }
  const Eigen::VectorXd sv = singular_values(AS);
  out.sigma_min = sv(sv.size() - 1);
  if (!(out.sigma_min > kRankTolerance * sv(0))) {
    out.max_correlation = std::numeric_limits<double>::infinity();
    return out;
  }
  out.injective = true;

  const Matrix<Scalar> pinv = pseudo_inverse(AS);
  out.dual_h = pinv.adjoint() * signs;
  const Vector<Scalar> Ah = A.adjoint() * out.dual_h;

  out.correlations.reserve(out.off_support.size());
  for (Index j : out.off_support) {
    const double corr = std::abs(Ah(j));
    out.correlations.push_back(corr);
    out.max_correlation = std::max(out.max_correlation, corr);
  }
  out.boundary = std::abs(out.max_correlation - 1.0) <= kCertificateBoundary;
  out.holds = out.max_correlation < 1.0 && !out.boundary;
  return out;
}

/// Checks A_S^* h = signs (sup-norm 1e-8) and |(A^* h)_l| < 1 off the support.
template <typename DerivedA, typename DerivedS, typename DerivedH>
bool verify_dual_conditions(const Eigen::MatrixBase<DerivedA>& A, const IndexSet& S,
                            const Eigen::MatrixBase<DerivedS>& signs,
                            const Eigen::MatrixBase<DerivedH>& h)
{
  using Scalar = typename DerivedA::Scalar;
  detail::check_support(A, S);
  if (signs.size() != static_cast<Index>(S.size()))
    throw DimensionError("verify_dual_conditions: need one sign per support index");
  if (h.size() != A.rows())
    throw DimensionError("verify_dual_conditions: h must have one entry per row of A");

  const Vector<Scalar> Ah = A.adjoint() * h;
  std::vector<char> on_support(static_cast<std::size_t>(A.cols()), 0);
  for (std::size_t k = 0; k < S.size(); ++k) {
    on_support[static_cast<std::size_t>(S[k])] = 1;
    if (std::abs(Ah(S[k]) - Scalar(signs(static_cast<Index>(k)))) > kDualEqualityTolerance)
      return false;
  }
  for (Index j = 0; j < A.cols(); ++j)
    if (!on_support[static_cast<std::size_t>(j)] && !(std::abs(Ah(j)) < 1.0)) return false;
  return true;
}

} // namespace cslab

#endif
