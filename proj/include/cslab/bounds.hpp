#ifndef CSLAB_BOUNDS_HPP
#define CSLAB_BOUNDS_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace cslab {

/// Sample-complexity statements that give a minimal number of measurements.
enum class MeasurementBound
{
  gaussian,            // Gaussian matrices, exact-recovery probability 1 - eps
  gaussian_asymptotic, // 2 s ln(3N/eps); the large-N display, no finite-N guarantee
  subgaussian,         // general subgaussian constant c, needs c and c~
  bernoulli,           // Rademacher matrices with the rounded 5.45 constant
  gram,                // ||A_S^* A_S - Id|| <= delta with probability 1 - eps
};

enum class TailBound
{
  gaussian_smin,           // P(sigma_min(B) < 1 - sqrt(s/m) - r) <= exp(-m r^2 / 2)
  gaussian_scalar,         // P(|X| > t) <= exp(-t^2 / (2 sigma^2))
  subgaussian_sum,         // P(|sum a_j X_j| >= t) <= 2 exp(-t^2 / (4 c ||a||^2))
  concentration,           // 2 exp(-c~ m t^2)
  bernoulli_concentration, // 2 exp(-(m/2)(t^2/2 - t^3/3)), t in (0, 1)
};

// Command-line names ("gaussian_2_1", ...).
MeasurementBound parse_measurement_bound(const std::string& name);
std::string cli_name(MeasurementBound kind);
TailBound parse_tail_bound(const std::string& name);
std::string cli_name(TailBound kind);

/// Inputs shared by all evaluators. Each evaluator reads only the fields it
/// needs and rejects missing or out-of-domain ones with DomainError.
/// N is real-valued so that astronomically large dimensions can be probed.
struct BoundParams
{
  std::optional<double> s;
  std::optional<double> N;
  std::optional<double> eps;
  std::optional<double> c;       // subgaussian constant
  std::optional<double> c_tilde; // concentration constant
  std::optional<double> delta;
  std::optional<double> r;
  std::optional<double> t;
  std::optional<double> sigma;
  std::optional<double> a_norm;
  std::optional<double> m;
};

struct MeasurementResult
{
  std::int64_t m = 0;
  double rhs = 0.0; // unrounded right-hand side
  std::optional<double> alpha;
  std::optional<double> gamma;
  std::optional<double> delta;
  std::optional<double> covering_C;
};

/// Smallest integer m satisfying the selected inequality.
///
/// Throws NonpositiveDenominator when gamma <= 0 for the subgaussian and
/// Bernoulli statements, DomainError for missing or out-of-range params.
MeasurementResult min_measurements(MeasurementBound kind, const BoundParams& params);

double tail_bound(TailBound kind, const BoundParams& params);

struct CoveringConstant
{
  double C;   // 1 / (c~ (2 - (rho + 1)^2)^2)
  double rho; // 2 / (e^3 - 1)
};

CoveringConstant covering_constant(double c_tilde);

// Literal constants as printed: C = 1.646 / c~ and the rounded sqrt(3 * 19.76 / 2).
inline constexpr double kCoveringFactor = 1.646;
inline constexpr double kBernoulliFactor = 5.45;

// Union-bound threshold alpha = 1 / sqrt(2 ln(2N/eps)) for the Gaussian argument.
double gaussian_alpha(double N, double eps);

// gamma = 1 - sqrt(3C/(4c)) ln(4N/eps)^{-1/2} ln(4/eps)^{1/2}.
double subgaussian_gamma(double C, double c, double N, double eps);

// ceil(x - 2^-40), guarded against overflow.
std::int64_t ceil_with_slack(double x);

} // namespace cslab

#endif
