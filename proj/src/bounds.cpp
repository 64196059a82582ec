#include <cslab/bounds.hpp>
#include <cslab/errors.hpp>

#include <cmath>

namespace cslab {

namespace {

double require(const std::optional<double>& v, const char* name)
{
  if (!v) throw DomainError(std::string("bound: parameter '") + name + "' is required");
  if (!std::isfinite(*v)) throw DomainError(std::string("bound: parameter '") + name + "' is not finite");
  return *v;
}

double require_positive(const std::optional<double>& v, const char* name)
{
  const double x = require(v, name);
  if (!(x > 0.0)) throw DomainError(std::string("bound: parameter '") + name + "' must be positive");
  return x;
}

double require_nonnegative(const std::optional<double>& v, const char* name)
{
  const double x = require(v, name);
  if (!(x >= 0.0))
    throw DomainError(std::string("bound: parameter '") + name + "' must be nonnegative");
  return x;
}

double require_open_unit(const std::optional<double>& v, const char* name)
{
  const double x = require(v, name);
  if (!(x > 0.0 && x < 1.0))
    throw DomainError(std::string("bound: parameter '") + name + "' must lie in (0, 1)");
  return x;
}

struct SparsityDims
{
  double s, N, eps;
};

SparsityDims require_sparsity(const BoundParams& p)
{
  const double s = require(p.s, "s");
  const double N = require(p.N, "N");
  const double eps = require_open_unit(p.eps, "eps");
  if (!(s >= 1.0)) throw DomainError("bound: s must be at least 1");
  if (!(N >= s)) throw DomainError("bound: N must be at least s");
  return {s, N, eps};
}

MeasurementResult subgaussian_type(double prefactor_c, double C, double root_factor,
                                   const SparsityDims& d)
{
  const double log_N = std::log(4.0 * d.N / d.eps);
  const double gamma = 1.0 - root_factor / std::sqrt(log_N) * std::sqrt(std::log(4.0 / d.eps));
  if (!(gamma > 0.0))
    throw NonpositiveDenominator("NonpositiveDenominator: gamma = " + std::to_string(gamma)
                                   + " <= 0 (N too small for this eps)",
                                 gamma);
  MeasurementResult out;
  out.rhs = 4.0 * prefactor_c / gamma * d.s * log_N;
  out.m = ceil_with_slack(out.rhs);
  out.gamma = gamma;
  out.covering_C = C;
  out.alpha = std::sqrt(1.0 / (4.0 * prefactor_c * log_N));
  return out;
}

} // namespace

MeasurementBound parse_measurement_bound(const std::string& name)
{
  if (name == "gaussian_2_1") return MeasurementBound::gaussian;
  if (name == "gaussian_asymptotic_2_2") return MeasurementBound::gaussian_asymptotic;
  if (name == "subgaussian_2_5") return MeasurementBound::subgaussian;
  if (name == "bernoulli_2_7") return MeasurementBound::bernoulli;
  if (name == "gram_E_2") return MeasurementBound::gram;
  throw DomainError("unknown theorem '" + name + "'");
}

std::string cli_name(MeasurementBound kind)
{
  switch (kind) {
  case MeasurementBound::gaussian: return "gaussian_2_1";
  case MeasurementBound::gaussian_asymptotic: return "gaussian_asymptotic_2_2";
  case MeasurementBound::subgaussian: return "subgaussian_2_5";
  case MeasurementBound::bernoulli: return "bernoulli_2_7";
  case MeasurementBound::gram: return "gram_E_2";
  }
  return "unknown";
}

TailBound parse_tail_bound(const std::string& name)
{
  if (name == "gaussian_smin_B1") return TailBound::gaussian_smin;
  if (name == "gaussian_C1") return TailBound::gaussian_scalar;
  if (name == "subgaussian_sum_D1") return TailBound::subgaussian_sum;
  if (name == "concentration_E1") return TailBound::concentration;
  if (name == "bernoulli_concentration_2_6") return TailBound::bernoulli_concentration;
  throw DomainError("unknown tail bound '" + name + "'");
}

std::string cli_name(TailBound kind)
{
  switch (kind) {
  case TailBound::gaussian_smin: return "gaussian_smin_B1";
  case TailBound::gaussian_scalar: return "gaussian_C1";
  case TailBound::subgaussian_sum: return "subgaussian_sum_D1";
  case TailBound::concentration: return "concentration_E1";
  case TailBound::bernoulli_concentration: return "bernoulli_concentration_2_6";
  }
  return "unknown";
}

std::int64_t ceil_with_slack(double x)
{
  const double v = std::ceil(x - 0x1.0p-40);
  if (!(v < 9.0e18)) throw DomainError("bound: required m does not fit in a 64-bit integer");
  return v < 0.0 ? 0 : static_cast<std::int64_t>(v);
}

double gaussian_alpha(double N, double eps)
{
  return 1.0 / std::sqrt(2.0 * std::log(2.0 * N / eps));
}

double subgaussian_gamma(double C, double c, double N, double eps)
{
  return 1.0
         - std::sqrt(3.0 * C / (4.0 * c)) / std::sqrt(std::log(4.0 * N / eps))
             * std::sqrt(std::log(4.0 / eps));
}

MeasurementResult min_measurements(MeasurementBound kind, const BoundParams& p)
{
  switch (kind) {
  case MeasurementBound::gaussian: {
    const auto d = require_sparsity(p);
    // s (sqrt(2 ln(2N/eps)) + 1 + sqrt(2 ln(2/eps) / s))^2; the +1 is outside
    // the first root, matching the (1/alpha + 1) factor of the derivation.
    const double inv_alpha = std::sqrt(2.0 * std::log(2.0 * d.N / d.eps));
    const double root = inv_alpha + 1.0 + std::sqrt(2.0 * std::log(2.0 / d.eps) / d.s);
    MeasurementResult out;
    out.rhs = d.s * root * root;
    out.m = ceil_with_slack(out.rhs);
    out.alpha = 1.0 / inv_alpha;
    return out;
  }
  case MeasurementBound::gaussian_asymptotic: {
    const auto d = require_sparsity(p);
    MeasurementResult out;
    out.rhs = 2.0 * d.s * std::log(3.0 * d.N / d.eps);
    out.m = ceil_with_slack(out.rhs);
    return out;
  }
  case MeasurementBound::subgaussian: {
    const auto d = require_sparsity(p);
    const double c = require_positive(p.c, "c");
    const double c_tilde = require_positive(p.c_tilde, "c_tilde");
    const double C = kCoveringFactor / c_tilde;
    return subgaussian_type(c, C, std::sqrt(3.0 * C / (4.0 * c)), d);
  }
  case MeasurementBound::bernoulli: {
    const auto d = require_sparsity(p);
    return subgaussian_type(0.5, kCoveringFactor * 12.0, kBernoulliFactor, d);
  }
  case MeasurementBound::gram: {
    const double s = require(p.s, "s");
    if (!(s >= 1.0)) throw DomainError("bound: s must be at least 1");
    const double delta = require_open_unit(p.delta, "delta");
    const double eps = require_open_unit(p.eps, "eps");
    const double c_tilde = require_positive(p.c_tilde, "c_tilde");
    const double C = kCoveringFactor / c_tilde;
    MeasurementResult out;
    out.rhs = C / (delta * delta) * (3.0 * s + std::log(2.0 / eps));
    out.m = ceil_with_slack(out.rhs);
    out.delta = delta;
    out.covering_C = C;
    return out;
  }
  }
  throw DomainError("bound: unknown theorem");
}

double tail_bound(TailBound kind, const BoundParams& p)
{
  switch (kind) {
  case TailBound::gaussian_smin: {
    const double m = require_positive(p.m, "m");
    const double r = require_nonnegative(p.r, "r");
    return std::exp(-m * r * r / 2.0);
  }
  case TailBound::gaussian_scalar: {
    const double sigma = require_positive(p.sigma, "sigma");
    const double t = require_nonnegative(p.t, "t");
    return std::exp(-t * t / (2.0 * sigma * sigma));
  }
  case TailBound::subgaussian_sum: {
    const double c = require_positive(p.c, "c");
    const double a = require_positive(p.a_norm, "a_norm");
    const double t = require_nonnegative(p.t, "t");
    return 2.0 * std::exp(-t * t / (4.0 * c * a * a));
  }
  case TailBound::concentration: {
    const double c_tilde = require_positive(p.c_tilde, "c_tilde");
    const double m = require_positive(p.m, "m");
    const double t = require_nonnegative(p.t, "t");
    return 2.0 * std::exp(-c_tilde * m * t * t);
  }
  case TailBound::bernoulli_concentration: {
    const double m = require_positive(p.m, "m");
    const double t = require_open_unit(p.t, "t");
    return 2.0 * std::exp(-(m / 2.0) * (t * t / 2.0 - t * t * t / 3.0));
  }
  }
  throw DomainError("bound: unknown tail kind");
}

CoveringConstant covering_constant(double c_tilde)
{
  if (!(c_tilde > 0.0)) throw DomainError("covering_constant: c_tilde must be positive");
  const double rho = 2.0 / std::expm1(3.0);
  const double shrink = 2.0 - (rho + 1.0) * (rho + 1.0);
  return {1.0 / (c_tilde * shrink * shrink), rho};
}

} // namespace cslab
