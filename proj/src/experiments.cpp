#include <cslab/certify.hpp>
#include <cslab/experiments.hpp>

#include "parallel.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>

namespace cslab {

namespace {

constexpr double kWilsonZ = 1.959963984540054; // 97.5% standard normal quantile

void require_trials(std::int64_t trials, int workers)
{
  if (trials < 1) throw DomainError("experiment: trials must be positive");
  if (workers < 1) throw DomainError("experiment: workers must be positive");
}

TailRow make_row(std::string name, double parameter, std::int64_t exceedances,
                 std::int64_t trials, double bound)
{
  TailRow row;
  row.bound_name = std::move(name);
  row.parameter = parameter;
  row.exceedances = exceedances;
  row.trials = trials;
  row.frequency = static_cast<double>(exceedances) / static_cast<double>(trials);
  row.bound = bound;
  row.slack = binomial_slack(row.frequency, trials);
  row.passes = row.frequency <= bound + row.slack;
  return row;
}

template <typename Pred>
std::int64_t count_if(const std::vector<double>& values, Pred pred)
{
  return static_cast<std::int64_t>(std::count_if(values.begin(), values.end(), pred));
}

template <typename Scalar>
RecoveryRecord recovery_trial(const ExperimentConfig& cfg, const SignalSpec& signal,
                              std::int64_t k)
{
  RecoveryRecord rec;
  rec.trial = k;
  rec.seed = derive_seed(cfg.master_seed, SeedTag::recovery_trial, static_cast<std::uint64_t>(k));
  const Eigen::MatrixXd A = sample_matrix(cfg.ensemble, cfg.m, cfg.N,
                                          derive_seed(rec.seed, SeedTag::matrix, 0));
  const auto sig = sample_signal<Scalar>(signal, derive_seed(rec.seed, SeedTag::signal, 0));

  if (cfg.mode != RecoveryMode::solver) {
    if constexpr (std::is_same_v<Scalar, double>) {
      const auto cert = fuchs_certificate(A, sig.support, sig.signs);
      rec.certificate_holds = cert.holds;
      rec.max_correlation = cert.max_correlation;
    } else {
      const auto cert = fuchs_certificate(A.cast<Scalar>(), sig.support, sig.signs);
      rec.certificate_holds = cert.holds;
      rec.max_correlation = cert.max_correlation;
    }
  }
  if (cfg.mode != RecoveryMode::certificate) {
    const Matrix<Scalar> As = A.cast<Scalar>();
    const Vector<Scalar> y = As * sig.x;
    const auto report = basis_pursuit<Scalar>(As, y, cfg.solver);
    rec.solver_converged = report.converged;
    rec.solver_iterations = report.iterations;
    rec.recovery_error = (report.z - sig.x).norm();
    rec.solver_recovered = report.converged && recovered<Scalar>(report.z, sig.x);
  }
  switch (cfg.mode) {
  case RecoveryMode::certificate: rec.success = rec.certificate_holds; break;
  case RecoveryMode::solver: rec.success = rec.solver_recovered; break;
  case RecoveryMode::both: rec.success = rec.certificate_holds && rec.solver_recovered; break;
  }
  return rec;
}

} // namespace

RateEstimate estimate_rate(std::int64_t successes, std::int64_t trials)
{
  if (trials < 1) throw DomainError("estimate_rate: trials must be positive");
  if (successes < 0 || successes > trials)
    throw DomainError("estimate_rate: successes must lie in [0, trials]");
  RateEstimate est;
  est.successes = successes;
  est.trials = trials;
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  est.rate = p;
  const double z2 = kWilsonZ * kWilsonZ;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = kWilsonZ / denom * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n));
  est.wilson_low = std::clamp(center - half, 0.0, p);
  est.wilson_high = std::clamp(center + half, p, 1.0);
  return est;
}

double binomial_slack(double p_hat, std::int64_t n)
{
  if (n < 1) throw DomainError("binomial_slack: n must be positive");
  const double floor = 1.0 / static_cast<double>(n);
  const double p = std::clamp(p_hat, floor, 1.0);
  return 3.0 * std::sqrt(p * (1.0 - p) / static_cast<double>(n));
}

RecoveryMode parse_recovery_mode(const std::string& name)
{
  if (name == "certificate") return RecoveryMode::certificate;
  if (name == "solver") return RecoveryMode::solver;
  if (name == "both") return RecoveryMode::both;
  throw DomainError("unknown mode '" + name + "' (expected certificate, solver or both)");
}

std::string to_string(RecoveryMode mode)
{
  switch (mode) {
  case RecoveryMode::certificate: return "certificate";
  case RecoveryMode::solver: return "solver";
  case RecoveryMode::both: return "both";
  }
  return "unknown";
}

void validate(const ExperimentConfig& cfg)
{
  validate(cfg.ensemble);
  if (cfg.N < 1 || cfg.m < 1) throw DomainError("experiment: m and N must be positive");
  if (cfg.s < 0 || cfg.s > cfg.N) throw DomainError("experiment: s must lie in [0, N]");
  require_trials(cfg.trials, cfg.workers);
  if (cfg.mode != RecoveryMode::certificate) validate(cfg.solver);
}

RecoveryResult recovery_probability(const ExperimentConfig& cfg)
{
  validate(cfg);
  SignalSpec signal = cfg.signal;
  signal.dimension = cfg.N;
  signal.sparsity = cfg.s;
  const bool complex_signal = signal.sign_model == SignModel::complex_uniform_phase
                              || std::any_of(signal.signs.begin(), signal.signs.end(),
                                             [](complexd z) { return z.imag() != 0.0; });

  std::vector<RecoveryRecord> records(static_cast<std::size_t>(cfg.trials));
  detail::for_each_trial(cfg.trials, cfg.workers, [&](std::int64_t k) {
    records[static_cast<std::size_t>(k)] = complex_signal
                                             ? recovery_trial<complexd>(cfg, signal, k)
                                             : recovery_trial<double>(cfg, signal, k);
  });

  std::int64_t successes = 0, certified = 0, solved = 0, violations = 0;
  for (const auto& rec : records) {
    successes += rec.success;
    certified += rec.certificate_holds;
    solved += rec.solver_recovered;
    violations += rec.certificate_holds && !rec.solver_recovered;
  }
  RecoveryResult result;
  result.rate = estimate_rate(successes, cfg.trials);
  if (cfg.mode != RecoveryMode::solver) result.certificate = estimate_rate(certified, cfg.trials);
  if (cfg.mode != RecoveryMode::certificate) result.solver = estimate_rate(solved, cfg.trials);
  if (cfg.mode == RecoveryMode::both) result.implication_violations = violations;
  if (cfg.keep_records) result.records = std::move(records);
  return result;
}

PhaseGrid phase_grid(const PhaseGridConfig& cfg)
{
  if (cfg.s_values.empty() || cfg.m_values.empty())
    throw DomainError("phase_grid: s and m grids must be nonempty");
  require_trials(cfg.trials, cfg.workers);

  PhaseGrid grid;
  grid.s_values = cfg.s_values;
  grid.m_values = cfg.m_values;
  grid.cells.reserve(cfg.s_values.size() * cfg.m_values.size());
  for (Index s : cfg.s_values) {
    for (Index m : cfg.m_values) {
      if (m < s) {
        grid.cells.push_back(estimate_rate(0, cfg.trials));
        continue;
      }
      ExperimentConfig cell;
      cell.ensemble = cfg.ensemble;
      cell.signal = cfg.signal;
      cell.N = cfg.N;
      cell.m = m;
      cell.s = s;
      cell.trials = cfg.trials;
      cell.master_seed = derive_seed(
        derive_seed(cfg.master_seed, SeedTag::phase_cell, static_cast<std::uint64_t>(m)),
        SeedTag::phase_cell, static_cast<std::uint64_t>(s));
      cell.mode = cfg.mode;
      cell.workers = cfg.workers;
      cell.solver = cfg.solver;
      grid.cells.push_back(recovery_probability(cell).rate);
    }
  }

  if (cfg.overlay) {
    for (Index s : cfg.s_values) {
      OverlayPoint point;
      point.s = s;
      BoundParams params = cfg.overlay_params;
      params.s = static_cast<double>(s);
      params.N = static_cast<double>(cfg.N);
      try {
        point.m = min_measurements(*cfg.overlay, params).m;
      } catch (const NonpositiveDenominator& e) {
        point.error = "nonpositive denominator (gamma = " + std::to_string(e.gamma()) + ")";
      }
      grid.overlay.push_back(std::move(point));
    }
  }
  return grid;
}

TailTable verify_smin_tail(Index m, Index s, const std::vector<double>& r_values,
                           std::int64_t trials, std::uint64_t master_seed, int workers)
{
  if (s < 1 || s > m) throw DomainError("verify_smin_tail: need 1 <= s <= m");
  require_trials(trials, workers);
  for (double r : r_values)
    if (!(r >= 0.0)) throw DomainError("verify_smin_tail: r must be nonnegative");

  const auto ensemble = EnsembleSpec::gaussian(Normalization::rows_scaled);
  std::vector<double> smin(static_cast<std::size_t>(trials));
  detail::for_each_trial(trials, workers, [&](std::int64_t k) {
    const Eigen::MatrixXd B = sample_matrix(
      ensemble, m, s, derive_seed(master_seed, SeedTag::smin_trial, static_cast<std::uint64_t>(k)));
    smin[static_cast<std::size_t>(k)] = smallest_singular_value(B);
  });

  TailTable table;
  const double base = 1.0 - std::sqrt(static_cast<double>(s) / static_cast<double>(m));
  for (double r : r_values) {
    const double threshold = base - r;
    BoundParams p;
    p.m = static_cast<double>(m);
    p.r = r;
    table.push_back(make_row(cli_name(TailBound::gaussian_smin), r,
                             count_if(smin, [&](double v) { return v < threshold; }), trials,
                             tail_bound(TailBound::gaussian_smin, p)));
  }
  return table;
}

TailTable verify_sum_tail(const EnsembleSpec& ensemble, const Eigen::VectorXd& a,
                          const std::vector<double>& t_values, std::int64_t trials,
                          std::uint64_t master_seed, int workers)
{
  validate(ensemble);
  require_trials(trials, workers);
  if (a.size() == 0 || a.norm() == 0.0)
    throw DomainError("verify_sum_tail: coefficient vector must be nonzero");
  for (double t : t_values)
    if (!(t >= 0.0)) throw DomainError("verify_sum_tail: t must be nonnegative");

  std::vector<double> sums(static_cast<std::size_t>(trials));
  detail::for_each_trial(trials, workers, [&](std::int64_t k) {
    thread_local std::vector<double> buffer;
    buffer.resize(static_cast<std::size_t>(a.size()));
    CounterRng rng(derive_seed(master_seed, SeedTag::sum_tail_trial, static_cast<std::uint64_t>(k)));
    fill_variates(ensemble, buffer, rng);
    sums[static_cast<std::size_t>(k)] =
      std::abs(a.dot(Eigen::Map<const Eigen::VectorXd>(buffer.data(), a.size())));
  });

  TailTable table;
  for (double t : t_values) {
    BoundParams p;
    p.c = ensemble.subgaussian_constant;
    p.a_norm = a.norm();
    p.t = t;
    table.push_back(make_row(cli_name(TailBound::subgaussian_sum), t,
                             count_if(sums, [&](double v) { return v >= t; }), trials,
                             tail_bound(TailBound::subgaussian_sum, p)));
  }
  return table;
}

TailTable verify_concentration(const EnsembleSpec& ensemble, Index m, Index N,
                               const std::vector<double>& t_values, std::int64_t trials,
                               std::uint64_t master_seed, bool bernoulli_refinement, int workers)
{
  validate(ensemble);
  require_trials(trials, workers);
  if (m < 1 || N < 1) throw DomainError("verify_concentration: m and N must be positive");
  if (bernoulli_refinement && ensemble.kind != EnsembleKind::bernoulli)
    throw DomainError("verify_concentration: the refined bound applies to Bernoulli matrices only");
  if (!bernoulli_refinement && !ensemble.concentration_constant)
    throw DomainError("verify_concentration: ensemble '" + ensemble.name
                      + "' has no concentration constant configured");
  if (ensemble.kind == EnsembleKind::custom) {
    const auto moments = estimate_moments(ensemble, 1000000, master_seed);
    if (std::abs(moments.variance - 1.0) > 0.01)
      throw DomainError("verify_concentration: ensemble '" + ensemble.name
                        + "' does not have unit variance");
  }
  for (double t : t_values)
    if (!(t >= 0.0)) throw DomainError("verify_concentration: t must be nonnegative");

  const auto scaled = ensemble.with_normalization(Normalization::rows_scaled);
  std::vector<double> deviation(static_cast<std::size_t>(trials));
  detail::for_each_trial(trials, workers, [&](std::int64_t k) {
    const auto seed =
      derive_seed(master_seed, SeedTag::concentration_trial, static_cast<std::uint64_t>(k));
    CounterRng rng(derive_seed(seed, SeedTag::test_vector, 0));
    Eigen::VectorXd x(N);
    for (Index j = 0; j < N; ++j) x(j) = rng.normal();
    x.normalize();
    const Eigen::MatrixXd A = sample_matrix(scaled, m, N, derive_seed(seed, SeedTag::matrix, 0));
    deviation[static_cast<std::size_t>(k)] = std::abs((A * x).squaredNorm() - 1.0);
  });

  TailTable table;
  for (double t : t_values) {
    const auto exceed = count_if(deviation, [&](double v) { return v > t; });
    BoundParams p;
    p.m = static_cast<double>(m);
    p.t = t;
    if (ensemble.concentration_constant) {
      p.c_tilde = *ensemble.concentration_constant;
      table.push_back(make_row(cli_name(TailBound::concentration), t, exceed, trials,
                               tail_bound(TailBound::concentration, p)));
    }
    if (bernoulli_refinement && t > 0.0 && t < 1.0)
      table.push_back(make_row(cli_name(TailBound::bernoulli_concentration), t, exceed, trials,
                               tail_bound(TailBound::bernoulli_concentration, p)));
  }
  return table;
}

double gram_deviation(const Eigen::MatrixXd& B)
{
  if (B.cols() == 0) return 0.0;
  const Eigen::MatrixXd G =
    B.transpose() * B - Eigen::MatrixXd::Identity(B.cols(), B.cols());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(G, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

GramResult verify_gram(const EnsembleSpec& ensemble, Index s, double delta, double eps,
                       std::int64_t trials, std::uint64_t master_seed, int workers,
                       std::optional<Index> m_override)
{
  validate(ensemble);
  require_trials(trials, workers);
  if (!ensemble.concentration_constant)
    throw DomainError("verify_gram: ensemble '" + ensemble.name
                      + "' has no concentration constant configured");

  BoundParams p;
  p.s = static_cast<double>(s);
  p.delta = delta;
  p.eps = eps;
  p.c_tilde = *ensemble.concentration_constant;
  const auto bound = min_measurements(MeasurementBound::gram, p);

  GramResult result;
  result.m = m_override ? *m_override : static_cast<Index>(bound.m);
  if (result.m < 1) throw DomainError("verify_gram: m must be positive");
  result.target = 1.0 - eps;

  const auto scaled = ensemble.with_normalization(Normalization::rows_scaled);
  std::vector<char> inside(static_cast<std::size_t>(trials));
  detail::for_each_trial(trials, workers, [&](std::int64_t k) {
    const Eigen::MatrixXd AS = sample_matrix(
      scaled, result.m, s, derive_seed(master_seed, SeedTag::gram_trial, static_cast<std::uint64_t>(k)));
    inside[static_cast<std::size_t>(k)] = gram_deviation(AS) <= delta;
  });

  result.rate = estimate_rate(std::count(inside.begin(), inside.end(), 1), trials);
  result.slack = binomial_slack(result.rate.rate, trials);
  result.passes = result.rate.rate >= result.target - result.slack;
  return result;
}

} // namespace cslab
