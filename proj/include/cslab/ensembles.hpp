#ifndef CSLAB_ENSEMBLES_HPP
#define CSLAB_ENSEMBLES_HPP

#include <cslab/linalg.hpp>
#include <cslab/rng.hpp>

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace cslab {

enum class EnsembleKind
{
  gaussian,
  bernoulli,
  custom
};

enum class Normalization
{
  raw,
  rows_scaled, // every entry divided by sqrt(m)
};

// Draws one mean-zero variate from the generator it is handed.
using ScalarSampler = std::function<double(CounterRng&)>;

/// Distribution of an m x N measurement matrix with independent entries.
///
/// `subgaussian_constant` is the c of E exp(lambda X) <= exp(c lambda^2);
/// `concentration_constant` is the c~ of the row-concentration inequality
/// P(| ||A x||^2 - ||x||^2 | > t ||x||^2) <= 2 exp(-c~ m t^2), when known.
struct EnsembleSpec
{
  EnsembleKind kind = EnsembleKind::gaussian;
  double subgaussian_constant = 0.5;
  std::optional<double> concentration_constant;
  Normalization normalization = Normalization::raw;
  ScalarSampler sampler; // custom only
  std::string name = "gaussian";

  static EnsembleSpec gaussian(Normalization norm = Normalization::raw);
  static EnsembleSpec bernoulli(Normalization norm = Normalization::raw);
  static EnsembleSpec custom(std::string name, ScalarSampler sampler, double c,
                             std::optional<double> c_tilde = std::nullopt,
                             Normalization norm = Normalization::raw);

  EnsembleSpec with_normalization(Normalization norm) const;
};

EnsembleSpec parse_ensemble(const std::string& name);
std::string to_string(EnsembleKind kind);

void validate(const EnsembleSpec& spec);

// Raw (unnormalized) variates, drawn in order from `rng`.
void fill_variates(const EnsembleSpec& spec, std::span<double> out, CounterRng& rng);

Eigen::MatrixXd sample_matrix(const EnsembleSpec& spec, Index m, Index N, std::uint64_t seed);

struct MgfCheckRow
{
  double lambda;
  double sample_mean;    // average of exp(lambda X)
  double standard_error; // of that average
  double bound;          // exp(c lambda^2)
  bool passes;           // sample_mean <= bound + 3 standard_error
};

// Empirical check of E exp(lambda X) <= exp(c lambda^2).
std::vector<MgfCheckRow> check_subgaussian_mgf(const EnsembleSpec& spec, std::size_t draws,
                                               std::uint64_t seed,
                                               const std::vector<double>& lambdas = {-1.0, -0.5,
                                                                                     0.5, 1.0});

struct MomentEstimate
{
  double mean;
  double variance;
};

MomentEstimate estimate_moments(const EnsembleSpec& spec, std::size_t draws, std::uint64_t seed);

// ---------------------------------------------------------------------------
// Sparse signals

enum class SupportModel
{
  uniform_random,
  explicit_set
};

enum class SignModel
{
  real_rademacher,
  complex_uniform_phase,
  explicit_signs
};

enum class MagnitudeModel
{
  unit,
  uniform,
  explicit_values
};

struct SignalSpec
{
  Index dimension = 1;
  Index sparsity = 0;
  SupportModel support_model = SupportModel::uniform_random;
  IndexSet support; // explicit_set; 0-based
  SignModel sign_model = SignModel::real_rademacher;
  std::vector<complexd> signs; // explicit_signs; one per support index
  MagnitudeModel magnitude_model = MagnitudeModel::unit;
  double magnitude_low = 1.0;
  double magnitude_high = 2.0;
  std::vector<double> magnitudes; // explicit_values; one per support index
};

template <typename Scalar>
struct SparseSignal
{
  Vector<Scalar> x;
  IndexSet support;     // sorted
  Vector<Scalar> signs; // sgn(x) restricted to support
};

template <typename Scalar>
SparseSignal<Scalar> sample_signal(const SignalSpec& spec, std::uint64_t seed);

// Support and signs read off an explicit vector.
template <typename Scalar>
SparseSignal<Scalar> make_signal(const Vector<Scalar>& x);

// Uniformly random s-subset of {0, ..., N-1}, sorted.
IndexSet sample_support(Index N, Index s, CounterRng& rng);

/// Entrywise sign: x_j / |x_j|, and 0 where x_j = 0.
template <typename Derived>
Vector<typename Derived::Scalar> sgn(const Eigen::MatrixBase<Derived>& x)
{
  using Scalar = typename Derived::Scalar;
  Vector<Scalar> out(x.size());
  for (Index j = 0; j < x.size(); ++j) {
    const double mod = std::abs(x(j));
    out(j) = mod == 0.0 ? Scalar(0) : Scalar(x(j) / mod);
  }
  return out;
}

} // namespace cslab

#endif
