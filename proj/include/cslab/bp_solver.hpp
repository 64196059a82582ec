#ifndef CSLAB_BP_SOLVER_HPP
#define CSLAB_BP_SOLVER_HPP

#include <cslab/linalg.hpp>

namespace cslab {

struct SolverOptions
{
  double feasibility_tolerance = 1e-8; // on ||Az - y|| / max(1, ||y||)
  double objective_tolerance = 1e-8;   // relative change of ||z||_1 over a check window
  int max_iterations = 50000;
  double step_parameter = 1.0;   // initial ADMM penalty rho
  double support_threshold = 1e-6;
  double relaxation = 1.6;       // over-relaxation factor in (0, 2)
  int check_window = 25;
  bool polish = true;            // least-squares refit on the detected support
};

void validate(const SolverOptions& opts);

template <typename Scalar>
struct SolveReport
{
  Vector<Scalar> z;
  int iterations = 0;
  bool converged = false;
  double feasibility_residual = 0.0;
  double objective = 0.0; // ||z||_1 with modulus entries
  bool polished = false;
  IndexSet support; // |z_j| > support_threshold
};

/// min ||z||_1 subject to Az = y, for real or complex data.
///
/// ADMM splitting between the affine set {z : Az = y} (exact projection via
/// a cached factorization of A A^*) and the l1 norm (complex soft
/// thresholding), with over-relaxation and residual balancing of the
/// penalty. Every returned iterate is the projected one, so feasibility is
/// at machine precision whenever y lies in the range of A.
template <typename Scalar>
SolveReport<Scalar> basis_pursuit(const Matrix<Scalar>& A, const Vector<Scalar>& y,
                                  const SolverOptions& opts = {});

// Limits for the exhaustive oracles.
inline constexpr Index kBruteForceMaxColumns = 16;
inline constexpr Index kBruteForceMaxRows = 8;
inline constexpr double kBruteForceResidual = 1e-9;

/// Exact l1 minimizer by enumerating basic solutions: every support T with
/// |T| <= m and A_T injective, solved by least squares, kept when exactly
/// feasible. Supports are visited by size and then lexicographically; the
/// first minimizer found wins ties.
Eigen::VectorXd brute_force_l1(const Eigen::MatrixXd& A, const Eigen::VectorXd& y);

/// Sparsest feasible vector by enumeration in order of increasing support size.
Eigen::VectorXd brute_force_l0(const Eigen::MatrixXd& A, const Eigen::VectorXd& y);

// ||z - x||_2 <= 1e-4 max(1, ||x||_2)
inline constexpr double kRecoveryTolerance = 1e-4;

template <typename Scalar>
bool recovered(const Vector<Scalar>& z, const Vector<Scalar>& x)
{
  return (z - x).norm() <= kRecoveryTolerance * std::max(1.0, x.norm());
}

template <typename Derived>
double l1_norm(const Eigen::MatrixBase<Derived>& z)
{
  return z.cwiseAbs().sum();
}

} // namespace cslab

#endif
