#include <cslab/bp_solver.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

namespace cslab {

void validate(const SolverOptions& opts)
{
  if (!(opts.feasibility_tolerance > 0.0) || !(opts.objective_tolerance > 0.0)
      || !(opts.step_parameter > 0.0) || !(opts.support_threshold > 0.0)
      || opts.max_iterations < 1 || opts.check_window < 1)
    throw DomainError("solver options must all be positive");
  if (!(opts.relaxation > 0.0 && opts.relaxation < 2.0))
    throw DomainError("solver relaxation must lie in (0, 2)");
}

namespace {

// Orthogonal projection onto {z : Az = y}. Uses a Cholesky factorization of
// A A^* when A has full row rank, otherwise a truncated-SVD pseudo-inverse
// (which projects onto the least-squares set when y is not in range).
template <typename Scalar>
class AffineProjector
{
public:
  AffineProjector(const Matrix<Scalar>& A, const Vector<Scalar>& y) : A_(A), y_(y)
  {
    const Matrix<Scalar> gram = A * A.adjoint();
    llt_.compute(gram);
    bool ok = llt_.info() == Eigen::Success;
    if (ok) {
      const Eigen::VectorXd d = llt_.matrixLLT().diagonal().real().cwiseAbs();
      ok = d.minCoeff() > 1e-7 * d.maxCoeff();
    }
    if (!ok) {
      use_pinv_ = true;
      Eigen::JacobiSVD<Matrix<Scalar>> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
      const Eigen::VectorXd& sv = svd.singularValues();
      const double cut = sv.size() > 0 ? kRankTolerance * sv(0) : 0.0;
      Eigen::VectorXd inv = Eigen::VectorXd::Zero(sv.size());
      for (Index k = 0; k < sv.size(); ++k)
        if (sv(k) > cut) inv(k) = 1.0 / sv(k);
      pinv_ = svd.matrixV() * inv.asDiagonal() * svd.matrixU().adjoint();
    }
  }

  Vector<Scalar> operator()(const Vector<Scalar>& v) const
  {
    const Vector<Scalar> r = A_ * v - y_;
    if (use_pinv_) return v - pinv_ * r;
    return v - A_.adjoint() * llt_.solve(r);
  }

private:
  const Matrix<Scalar>& A_;
  const Vector<Scalar>& y_;
  Eigen::LLT<Matrix<Scalar>> llt_;
  bool use_pinv_ = false;
  Matrix<Scalar> pinv_;
};

template <typename Scalar>
void soft_threshold(const Vector<Scalar>& v, double kappa, Vector<Scalar>& out)
{
  for (Index j = 0; j < v.size(); ++j) {
    const double mod = std::abs(v(j));
    out(j) = mod > kappa ? Scalar(v(j) * (1.0 - kappa / mod)) : Scalar(0);
  }
}

template <typename Scalar>
double relative_residual(const Matrix<Scalar>& A, const Vector<Scalar>& z, const Vector<Scalar>& y)
{
  return (A * z - y).norm() / std::max(1.0, y.norm());
}

template <typename Scalar>
IndexSet support_of(const Vector<Scalar>& z, double threshold)
{
  IndexSet T;
  for (Index j = 0; j < z.size(); ++j)
    if (std::abs(z(j)) > threshold) T.push_back(j);
  return T;
}

// Least-squares refit on T, accepted only when feasible and certified optimal:
// h = (A_T^+)^* sgn(c_T) satisfies A_T^* h = sgn(c_T) and |A^* h| <= 1
// elsewhere, which are the optimality conditions of the l1 problem.
template <typename Scalar>
bool polish(const Matrix<Scalar>& A, const Vector<Scalar>& y, const IndexSet& T,
            const SolverOptions& opts, Vector<Scalar>& out)
{
  if (T.empty() || static_cast<Index>(T.size()) > A.rows()) return false;
  const Matrix<Scalar> AT = columns(A, T);
  Matrix<Scalar> pinv;
  try {
    pinv = pseudo_inverse(AT);
  } catch (const RankDeficientError&) {
    return false;
  }
  const Vector<Scalar> cT = pinv * y;
  Vector<Scalar> candidate = Vector<Scalar>::Zero(A.cols());
  for (std::size_t k = 0; k < T.size(); ++k) {
    const Scalar v = cT(static_cast<Index>(k));
    if (std::abs(v) == 0.0) return false;
    candidate(T[k]) = v;
  }
  if (relative_residual(A, candidate, y) > opts.feasibility_tolerance) return false;

  Vector<Scalar> signs(static_cast<Index>(T.size()));
  for (std::size_t k = 0; k < T.size(); ++k) {
    const Scalar v = cT(static_cast<Index>(k));
    signs(static_cast<Index>(k)) = v / std::abs(v);
  }
  const Vector<Scalar> h = pinv.adjoint() * signs;
  const Vector<Scalar> Ah = A.adjoint() * h;
  std::vector<char> on(static_cast<std::size_t>(A.cols()), 0);
  for (Index j : T) on[static_cast<std::size_t>(j)] = 1;
  for (Index j = 0; j < A.cols(); ++j)
    if (!on[static_cast<std::size_t>(j)] && std::abs(Ah(j)) > 1.0 + 1e-9) return false;

  out = std::move(candidate);
  return true;
}

} // namespace

template <typename Scalar>
SolveReport<Scalar> basis_pursuit(const Matrix<Scalar>& A, const Vector<Scalar>& y,
                                  const SolverOptions& opts)
{
  validate(opts);
  if (y.size() != A.rows())
    throw DimensionError("basis_pursuit: y has " + std::to_string(y.size()) + " entries, A has "
                         + std::to_string(A.rows()) + " rows");
  const Index N = A.cols();
  SolveReport<Scalar> report;

  auto finish = [&](Vector<Scalar> z, int iterations, bool converged, bool polished) {
    report.z = std::move(z);
    report.iterations = iterations;
    report.feasibility_residual = relative_residual(A, report.z, y);
    report.converged = converged && report.feasibility_residual <= opts.feasibility_tolerance;
    report.objective = l1_norm(report.z);
    report.polished = polished;
    report.support = support_of(report.z, opts.support_threshold);
    return report;
  };

  if (y.norm() == 0.0) return finish(Vector<Scalar>::Zero(N), 0, true, false);

  const AffineProjector<Scalar> project(A, y);
  const double tol = opts.objective_tolerance;
  const double alpha = opts.relaxation;
  double rho = opts.step_parameter;
  // Penalty adaptation stops here so the fixed-rho convergence theory applies.
  const int adapt_until = std::min(opts.max_iterations / 2, 5000);

  Vector<Scalar> z = project(Vector<Scalar>::Zero(N));
  Vector<Scalar> x = z;
  Vector<Scalar> u = Vector<Scalar>::Zero(N);
  Vector<Scalar> z_old(N), v(N);
  double objective_prev = std::numeric_limits<double>::infinity();
  IndexSet support_prev;

  for (int it = 1; it <= opts.max_iterations; ++it) {
    x = project(z - u);
    v = alpha * x + (1.0 - alpha) * z + u;
    z_old = z;
    soft_threshold(v, 1.0 / rho, z);
    u = v - z;

    if (it % opts.check_window != 0) continue;

    const double primal = (x - z).norm();
    const double dual = rho * (z - z_old).norm();
    const double objective = l1_norm(x);

    IndexSet support = support_of(z, opts.support_threshold);
    if (opts.polish && support == support_prev) {
      Vector<Scalar> polished;
      if (polish(A, y, support, opts, polished)) return finish(std::move(polished), it, true, true);
    }
    support_prev = std::move(support);

    if (primal <= tol * std::max(1.0, x.norm()) && dual <= tol * std::max(1.0, rho * u.norm())
        && std::abs(objective - objective_prev) <= tol * std::max(1.0, objective))
      return finish(x, it, true, false);
    objective_prev = objective;

    if (it <= adapt_until) {
      // Scaled dual u = y_dual / rho must be rescaled with rho.
      if (primal > 10.0 * dual) {
        rho *= 2.0;
        u /= 2.0;
      } else if (dual > 10.0 * primal) {
        rho /= 2.0;
        u *= 2.0;
      }
    }
  }
  return finish(x, opts.max_iterations, false, false);
}

template SolveReport<double> basis_pursuit<double>(const Matrix<double>&, const Vector<double>&,
                                                   const SolverOptions&);
template SolveReport<complexd> basis_pursuit<complexd>(const Matrix<complexd>&,
                                                       const Vector<complexd>&,
                                                       const SolverOptions&);

// ---------------------------------------------------------------------------

namespace {

void check_oracle_size(const Eigen::MatrixXd& A, const Eigen::VectorXd& y)
{
  if (A.cols() > kBruteForceMaxColumns || A.rows() > kBruteForceMaxRows)
    throw DomainError("brute force: instance too large (limit " + std::to_string(kBruteForceMaxRows)
                      + " x " + std::to_string(kBruteForceMaxColumns) + ")");
  if (y.size() != A.rows()) throw DimensionError("brute force: y length differs from rows of A");
}

// Visits supports by size, then lexicographically. `visit` returns true to stop.
template <typename Visit>
void for_each_support(Index N, Index max_size, Visit&& visit)
{
  for (Index k = 0; k <= std::min(N, max_size); ++k) {
    IndexSet T(static_cast<std::size_t>(k));
    for (Index i = 0; i < k; ++i) T[static_cast<std::size_t>(i)] = i;
    while (true) {
      if (visit(T)) return;
      // next combination
      Index i = k - 1;
      while (i >= 0 && T[static_cast<std::size_t>(i)] == N - k + i) --i;
      if (i < 0) break;
      ++T[static_cast<std::size_t>(i)];
      for (Index j = i + 1; j < k; ++j)
        T[static_cast<std::size_t>(j)] = T[static_cast<std::size_t>(j - 1)] + 1;
    }
  }
}

// Exact solution of A_T z_T = y, if A_T is injective and the system consistent.
bool solve_on_support(const Eigen::MatrixXd& A, const Eigen::VectorXd& y, const IndexSet& T,
                      Eigen::VectorXd& z)
{
  z = Eigen::VectorXd::Zero(A.cols());
  const double scale = std::max(1.0, y.norm());
  if (T.empty()) return y.norm() <= kBruteForceResidual * scale;
  const Eigen::MatrixXd AT = columns(A, T);
  Eigen::MatrixXd pinv;
  try {
    pinv = pseudo_inverse(AT);
  } catch (const DomainError&) {
    return false;
  }
  const Eigen::VectorXd zT = pinv * y;
  if ((AT * zT - y).norm() > kBruteForceResidual * scale) return false;
  for (std::size_t k = 0; k < T.size(); ++k) z(T[k]) = zT(static_cast<Index>(k));
  return true;
}

} // namespace

Eigen::VectorXd brute_force_l1(const Eigen::MatrixXd& A, const Eigen::VectorXd& y)
{
  check_oracle_size(A, y);
  Eigen::VectorXd best;
  double best_objective = std::numeric_limits<double>::infinity();
  Eigen::VectorXd z;
  for_each_support(A.cols(), A.rows(), [&](const IndexSet& T) {
    if (solve_on_support(A, y, T, z)) {
      const double objective = l1_norm(z);
      if (best.size() == 0 || objective < best_objective - 1e-12 * std::max(1.0, best_objective)) {
        best_objective = objective;
        best = z;
      }
    }
    return false;
  });
  if (best.size() == 0) throw InfeasibleError("brute_force_l1: y is not in the range of A");
  return best;
}

Eigen::VectorXd brute_force_l0(const Eigen::MatrixXd& A, const Eigen::VectorXd& y)
{
  check_oracle_size(A, y);
  Eigen::VectorXd found;
  Eigen::VectorXd z;
  for_each_support(A.cols(), A.rows(), [&](const IndexSet& T) {
    if (solve_on_support(A, y, T, z)) {
      found = z;
      return true;
    }
    return false;
  });
  if (found.size() == 0) throw InfeasibleError("brute_force_l0: y is not in the range of A");
  return found;
}

} // namespace cslab
