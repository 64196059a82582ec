#include <cslab/ensembles.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace cslab {

EnsembleSpec EnsembleSpec::gaussian(Normalization norm)
{
  EnsembleSpec spec;
  spec.kind = EnsembleKind::gaussian;
  spec.subgaussian_constant = 0.5;
  spec.normalization = norm;
  spec.name = "gaussian";
  return spec;
}

EnsembleSpec EnsembleSpec::bernoulli(Normalization norm)
{
  EnsembleSpec spec;
  spec.kind = EnsembleKind::bernoulli;
  spec.subgaussian_constant = 0.5;
  spec.concentration_constant = 1.0 / 12.0;
  spec.normalization = norm;
  spec.name = "bernoulli";
  return spec;
}

EnsembleSpec EnsembleSpec::custom(std::string name, ScalarSampler sampler, double c,
                                  std::optional<double> c_tilde, Normalization norm)
{
  EnsembleSpec spec;
  spec.kind = EnsembleKind::custom;
  spec.subgaussian_constant = c;
  spec.concentration_constant = c_tilde;
  spec.normalization = norm;
  spec.sampler = std::move(sampler);
  spec.name = std::move(name);
  return spec;
}

EnsembleSpec EnsembleSpec::with_normalization(Normalization norm) const
{
  EnsembleSpec copy = *this;
  copy.normalization = norm;
  return copy;
}

EnsembleSpec parse_ensemble(const std::string& name)
{
  if (name == "gaussian") return EnsembleSpec::gaussian();
  if (name == "bernoulli" || name == "rademacher") return EnsembleSpec::bernoulli();
  throw DomainError("unknown ensemble '" + name + "' (expected gaussian or bernoulli)");
}

std::string to_string(EnsembleKind kind)
{
  switch (kind) {
  case EnsembleKind::gaussian: return "gaussian";
  case EnsembleKind::bernoulli: return "bernoulli";
  case EnsembleKind::custom: return "custom";
  }
  return "unknown";
}

void validate(const EnsembleSpec& spec)
{
  if (!(spec.subgaussian_constant > 0.0))
    throw DomainError("ensemble: subgaussian constant must be positive");
  if (spec.concentration_constant && !(*spec.concentration_constant > 0.0))
    throw DomainError("ensemble: concentration constant must be positive");
  switch (spec.kind) {
  case EnsembleKind::gaussian:
  case EnsembleKind::bernoulli:
    if (spec.subgaussian_constant != 0.5)
      throw DomainError("ensemble: " + to_string(spec.kind) + " has subgaussian constant 1/2");
    if (spec.kind == EnsembleKind::bernoulli && spec.concentration_constant
        && *spec.concentration_constant != 1.0 / 12.0)
      throw DomainError("ensemble: bernoulli has concentration constant 1/12");
    break;
  case EnsembleKind::custom:
    if (!spec.sampler) throw DomainError("ensemble: custom kind requires a sampler");
    break;
  }
}

void fill_variates(const EnsembleSpec& spec, std::span<double> out, CounterRng& rng)
{
  switch (spec.kind) {
  case EnsembleKind::gaussian: {
    std::size_t i = 0;
    for (; i + 1 < out.size(); i += 2) {
      const auto [a, b] = rng.normal_pair();
      out[i] = a;
      out[i + 1] = b;
    }
    if (i < out.size()) out[i] = rng.normal();
    break;
  }
  case EnsembleKind::bernoulli: {
    // 64 signs per generator word.
    std::size_t i = 0;
    while (i < out.size()) {
      std::uint64_t bits = rng();
      const std::size_t n = std::min<std::size_t>(64, out.size() - i);
      for (std::size_t k = 0; k < n; ++k, bits >>= 1) out[i + k] = (bits & 1U) ? 1.0 : -1.0;
      i += n;
    }
    break;
  }
  case EnsembleKind::custom:
    if (!spec.sampler) throw DomainError("ensemble: custom kind requires a sampler");
    for (double& v : out) v = spec.sampler(rng);
    break;
  }
}

Eigen::MatrixXd sample_matrix(const EnsembleSpec& spec, Index m, Index N, std::uint64_t seed)
{
  if (m < 1 || N < 1) throw DomainError("sample_matrix: dimensions must be positive");
  validate(spec);
  Eigen::MatrixXd A(m, N);
  CounterRng rng(seed);
  fill_variates(spec, std::span<double>(A.data(), static_cast<std::size_t>(A.size())), rng);
  if (spec.normalization == Normalization::rows_scaled) A /= std::sqrt(static_cast<double>(m));
  return A;
}

std::vector<MgfCheckRow> check_subgaussian_mgf(const EnsembleSpec& spec, std::size_t draws,
                                               std::uint64_t seed,
                                               const std::vector<double>& lambdas)
{
  validate(spec);
  if (draws < 2) throw DomainError("check_subgaussian_mgf: need at least two draws");
  std::vector<double> x(draws);
  CounterRng rng(seed);
  fill_variates(spec, x, rng);

  std::vector<MgfCheckRow> rows;
  for (double lambda : lambdas) {
    double sum = 0.0, sum_sq = 0.0;
    for (double v : x) {
      const double e = std::exp(lambda * v);
      sum += e;
      sum_sq += e * e;
    }
    const double n = static_cast<double>(draws);
    const double mean = sum / n;
    const double var = std::max(0.0, (sum_sq - n * mean * mean) / (n - 1.0));
    const double se = std::sqrt(var / n);
    const double bound = std::exp(spec.subgaussian_constant * lambda * lambda);
    rows.push_back({lambda, mean, se, bound, mean <= bound + 3.0 * se});
  }
  return rows;
}

MomentEstimate estimate_moments(const EnsembleSpec& spec, std::size_t draws, std::uint64_t seed)
{
  validate(spec);
  if (draws < 2) throw DomainError("estimate_moments: need at least two draws");
  std::vector<double> x(draws);
  CounterRng rng(seed);
  fill_variates(spec, x, rng);
  // Welford
  double mean = 0.0, m2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - mean;
    mean += d / static_cast<double>(i + 1);
    m2 += d * (x[i] - mean);
  }
  return {mean, m2 / static_cast<double>(draws - 1)};
}

IndexSet sample_support(Index N, Index s, CounterRng& rng)
{
  if (s < 0 || s > N) throw DomainError("sample_support: need 0 <= s <= N");
  // Floyd's algorithm: one draw per element, uniform over s-subsets.
  std::vector<bool> taken(static_cast<std::size_t>(N), false);
  IndexSet S;
  S.reserve(static_cast<std::size_t>(s));
  for (Index j = N - s; j < N; ++j) {
    const auto t = static_cast<Index>(rng.below(static_cast<std::uint64_t>(j + 1)));
    const Index pick = taken[static_cast<std::size_t>(t)] ? j : t;
    taken[static_cast<std::size_t>(pick)] = true;
    S.push_back(pick);
  }
  std::sort(S.begin(), S.end());
  return S;
}

namespace {

template <typename Scalar>
constexpr bool is_complex_v = !std::is_same_v<Scalar, double>;

template <typename Scalar>
Scalar to_scalar(complexd v)
{
  if constexpr (is_complex_v<Scalar>) {
    return v;
  } else {
    if (v.imag() != 0.0) throw DomainError("signal: complex sign for a real signal");
    return v.real();
  }
}

} // namespace

template <typename Scalar>
SparseSignal<Scalar> sample_signal(const SignalSpec& spec, std::uint64_t seed)
{
  const Index N = spec.dimension;
  const Index s = spec.sparsity;
  if (N < 1) throw DomainError("signal: dimension must be positive");
  if (s < 0 || s > N) throw DomainError("signal: sparsity must satisfy 0 <= s <= N");
  const auto su = static_cast<std::size_t>(s);

  CounterRng support_rng(derive_seed(seed, 1, 0));
  CounterRng sign_rng(derive_seed(seed, 2, 0));
  CounterRng magnitude_rng(derive_seed(seed, 3, 0));

  IndexSet S;
  if (spec.support_model == SupportModel::uniform_random) {
    S = sample_support(N, s, support_rng);
  } else {
    S = spec.support;
    std::sort(S.begin(), S.end());
    if (S.size() != su) throw DomainError("signal: explicit support must have exactly s indices");
    if (std::adjacent_find(S.begin(), S.end()) != S.end())
      throw DomainError("signal: explicit support has repeated indices");
    if (!S.empty() && (S.front() < 0 || S.back() >= N))
      throw DomainError("signal: explicit support index out of range");
  }

  Vector<Scalar> signs(s);
  switch (spec.sign_model) {
  case SignModel::real_rademacher:
    for (Index k = 0; k < s; ++k) signs(k) = Scalar(sign_rng.rademacher());
    break;
  case SignModel::complex_uniform_phase:
    if constexpr (is_complex_v<Scalar>) {
      for (Index k = 0; k < s; ++k)
        signs(k) = std::polar(1.0, 2.0 * std::numbers::pi * sign_rng.uniform());
    } else {
      throw DomainError("signal: complex_uniform_phase signs require a complex signal");
    }
    break;
  case SignModel::explicit_signs:
    if (spec.signs.size() != su) throw DomainError("signal: need one explicit sign per index");
    for (Index k = 0; k < s; ++k) {
      const complexd v = spec.signs[static_cast<std::size_t>(k)];
      if (std::abs(std::abs(v) - 1.0) > 1e-12)
        throw DomainError("signal: explicit sign entries must have modulus 1");
      signs(k) = to_scalar<Scalar>(v);
    }
    break;
  }

  std::vector<double> magnitude(su, 1.0);
  switch (spec.magnitude_model) {
  case MagnitudeModel::unit: break;
  case MagnitudeModel::uniform:
    if (!(spec.magnitude_low > 0.0 && spec.magnitude_high >= spec.magnitude_low))
      throw DomainError("signal: uniform magnitudes need 0 < low <= high");
    for (double& v : magnitude)
      v = spec.magnitude_low + (spec.magnitude_high - spec.magnitude_low) * magnitude_rng.uniform();
    break;
  case MagnitudeModel::explicit_values:
    if (spec.magnitudes.size() != su)
      throw DomainError("signal: need one explicit magnitude per index");
    for (std::size_t k = 0; k < su; ++k) {
      const double v = spec.magnitudes[k];
      if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError("signal: explicit magnitudes give l0-norm different from s");
      magnitude[k] = v;
    }
    break;
  }

  SparseSignal<Scalar> out;
  out.x = Vector<Scalar>::Zero(N);
  for (std::size_t k = 0; k < su; ++k)
    out.x(S[k]) = magnitude[k] * signs(static_cast<Index>(k));
  out.support = std::move(S);
  out.signs = std::move(signs);
  return out;
}

template <typename Scalar>
SparseSignal<Scalar> make_signal(const Vector<Scalar>& x)
{
  SparseSignal<Scalar> out;
  out.x = x;
  for (Index j = 0; j < x.size(); ++j)
    if (x(j) != Scalar(0)) out.support.push_back(j);
  out.signs.resize(static_cast<Index>(out.support.size()));
  for (std::size_t k = 0; k < out.support.size(); ++k) {
    const Scalar v = x(out.support[k]);
    out.signs(static_cast<Index>(k)) = v / std::abs(v);
  }
  return out;
}

template SparseSignal<double> sample_signal<double>(const SignalSpec&, std::uint64_t);
template SparseSignal<complexd> sample_signal<complexd>(const SignalSpec&, std::uint64_t);
template SparseSignal<double> make_signal<double>(const Vector<double>&);
template SparseSignal<complexd> make_signal<complexd>(const Vector<complexd>&);

} // namespace cslab
