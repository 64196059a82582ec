#ifndef CSLAB_EXPERIMENTS_HPP
#define CSLAB_EXPERIMENTS_HPP

#include <cslab/bounds.hpp>
#include <cslab/bp_solver.hpp>
#include <cslab/ensembles.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cslab {

struct RateEstimate
{
  std::int64_t successes = 0;
  std::int64_t trials = 0;
  double rate = 0.0;
  double wilson_low = 0.0; // 95% Wilson score interval
  double wilson_high = 1.0;
};

RateEstimate estimate_rate(std::int64_t successes, std::int64_t trials);

// 3 sqrt(p (1 - p) / n) with p floored at 1/n.
double binomial_slack(double p_hat, std::int64_t n);

enum class RecoveryMode
{
  certificate,
  solver,
  both
};

RecoveryMode parse_recovery_mode(const std::string& name);
std::string to_string(RecoveryMode mode);

struct ExperimentConfig
{
  EnsembleSpec ensemble = EnsembleSpec::gaussian();
  SignalSpec signal; // dimension and sparsity are taken from N and s
  Index N = 1;
  Index m = 1;
  Index s = 0;
  std::int64_t trials = 1;
  std::uint64_t master_seed = 0;
  RecoveryMode mode = RecoveryMode::certificate;
  int workers = 1;
  SolverOptions solver;
  bool keep_records = false;
};

void validate(const ExperimentConfig& cfg);

struct RecoveryRecord
{
  std::int64_t trial = 0;
  std::uint64_t seed = 0;
  bool certificate_holds = false; // certificate and both modes
  double max_correlation = 0.0;
  bool solver_recovered = false; // solver and both modes
  bool solver_converged = false;
  int solver_iterations = 0;
  double recovery_error = 0.0; // ||z - x||_2
  bool success = false;
};

struct RecoveryResult
{
  RateEstimate rate;                  // per the configured mode
  std::optional<RateEstimate> certificate;
  std::optional<RateEstimate> solver;
  std::int64_t implication_violations = 0; // both mode: certificate held, solver missed
  std::vector<RecoveryRecord> records;     // sorted by trial, when requested
};

/// Empirical probability that a random sparse vector is recovered from m
/// measurements. Trial k draws its matrix and signal from seeds derived
/// from (master_seed, k), so results do not depend on the worker count.
///
/// certificate: success iff A_S is injective and the dual certificate holds.
/// solver: success iff basis pursuit converges to x.
/// both: success iff both hold; trials where the certificate holds but the
/// solver misses are counted separately.
RecoveryResult recovery_probability(const ExperimentConfig& cfg);

struct PhaseGridConfig
{
  EnsembleSpec ensemble = EnsembleSpec::gaussian();
  SignalSpec signal;
  Index N = 1;
  std::vector<Index> s_values;
  std::vector<Index> m_values;
  std::int64_t trials = 1;
  std::uint64_t master_seed = 0;
  RecoveryMode mode = RecoveryMode::certificate;
  int workers = 1;
  SolverOptions solver;
  std::optional<MeasurementBound> overlay;
  BoundParams overlay_params; // s and N are filled in per column
};

struct OverlayPoint
{
  Index s = 0;
  std::optional<std::int64_t> m; // absent when the bound is undefined
  std::string error;
};

struct PhaseGrid
{
  std::vector<Index> s_values;
  std::vector<Index> m_values;
  std::vector<RateEstimate> cells; // cells[i * m_values.size() + j] is (s_values[i], m_values[j])
  std::vector<OverlayPoint> overlay;

  const RateEstimate& at(std::size_t s_index, std::size_t m_index) const
  {
    return cells[s_index * m_values.size() + m_index];
  }
};

/// Recovery rates over an (s, m) grid. Cell seeds derive from
/// (master_seed, m, s); cells with m < s are recorded as 0 without sampling.
PhaseGrid phase_grid(const PhaseGridConfig& cfg);

// Empirical exceedance frequency against a theoretical upper bound.
struct TailRow
{
  std::string bound_name;
  double parameter = 0.0; // r or t
  std::int64_t exceedances = 0;
  std::int64_t trials = 0;
  double frequency = 0.0;
  double bound = 0.0;
  double slack = 0.0; // binomial_slack(frequency, trials)
  bool passes = false; // frequency <= bound + slack
};

using TailTable = std::vector<TailRow>;

// Event sigma_min(B) < 1 - sqrt(s/m) - r for B with i.i.d. N(0, 1/m) entries.
TailTable verify_smin_tail(Index m, Index s, const std::vector<double>& r_values,
                           std::int64_t trials, std::uint64_t master_seed, int workers = 1);

// Event |sum_j a_j X_j| >= t for i.i.d. variates X_j of the ensemble.
TailTable verify_sum_tail(const EnsembleSpec& ensemble, const Eigen::VectorXd& a,
                          const std::vector<double>& t_values, std::int64_t trials,
                          std::uint64_t master_seed, int workers = 1);

/// Event | ||A x||^2 - 1 | > t for A = (m x N variates) / sqrt(m) and x uniform
/// on the unit sphere, one fresh x per trial.
///
/// Rows are emitted against 2 exp(-c~ m t^2) when the ensemble has a
/// concentration constant, and against 2 exp(-(m/2)(t^2/2 - t^3/3)) when
/// `bernoulli_refinement` is set (Bernoulli only; t outside (0, 1) skipped).
TailTable verify_concentration(const EnsembleSpec& ensemble, Index m, Index N,
                               const std::vector<double>& t_values, std::int64_t trials,
                               std::uint64_t master_seed, bool bernoulli_refinement,
                               int workers = 1);

struct GramResult
{
  Index m = 0;
  double target = 0.0; // 1 - eps
  RateEstimate rate;
  double slack = 0.0;
  bool passes = false; // rate >= target - slack
};

// Event ||A_S^* A_S - Id|| <= delta for A_S = (m x s variates) / sqrt(m), with m
// from the Gram bound unless overridden.
GramResult verify_gram(const EnsembleSpec& ensemble, Index s, double delta, double eps,
                       std::int64_t trials, std::uint64_t master_seed, int workers = 1,
                       std::optional<Index> m_override = std::nullopt);

// ||B^* B - Id||_{2->2} for real B.
double gram_deviation(const Eigen::MatrixXd& B);

} // namespace cslab

#endif
