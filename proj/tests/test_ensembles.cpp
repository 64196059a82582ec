#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"

#include <cslab/ensembles.hpp>

#include <cmath>
#include <map>

using namespace cslab;

TEST_CASE("bernoulli entries are +-1")
{
  const auto A = sample_matrix(EnsembleSpec::bernoulli(), 37, 71, 12345);
  CHECK(A.rows() == 37);
  CHECK(A.cols() == 71);
  CHECK((A.array().abs() == 1.0).all());
  // Both signs occur.
  CHECK((A.array() > 0.0).any());
  CHECK((A.array() < 0.0).any());
}

TEST_CASE("row scaling divides every entry by sqrt(m)")
{
  const auto raw = sample_matrix(EnsembleSpec::bernoulli(), 16, 5, 9);
  const auto scaled = sample_matrix(EnsembleSpec::bernoulli(Normalization::rows_scaled), 16, 5, 9);
  CHECK((scaled * 4.0 - raw).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("gaussian moments over 10^6 entries")
{
  const auto A = sample_matrix(EnsembleSpec::gaussian(), 1000, 1000, 2024);
  oracle::RunningMoments acc;
  for (Index i = 0; i < A.size(); ++i) acc.add(A.data()[i]);
  CHECK(acc.mean >= -0.01);
  CHECK(acc.mean <= 0.01);
  CHECK(acc.variance() >= 0.99);
  CHECK(acc.variance() <= 1.01);

  const auto est = estimate_moments(EnsembleSpec::gaussian(), 1000000, 2024);
  CHECK(std::abs(est.mean) <= 0.01);
  CHECK(std::abs(est.variance - 1.0) <= 0.01);
}

TEST_CASE("sampling is deterministic in the seed")
{
  for (const auto& spec : {EnsembleSpec::gaussian(), EnsembleSpec::bernoulli()}) {
    const auto A = sample_matrix(spec, 13, 29, 77);
    const auto B = sample_matrix(spec, 13, 29, 77);
    CHECK((A.array() == B.array()).all());
    const auto C = sample_matrix(spec, 13, 29, 78);
    CHECK_FALSE((A.array() == C.array()).all());
  }
}

TEST_CASE("sample_matrix validates its inputs")
{
  CHECK_THROWS_AS(sample_matrix(EnsembleSpec::gaussian(), 0, 3, 1), DomainError);
  EnsembleSpec bad = EnsembleSpec::custom("nothing", nullptr, 0.5);
  CHECK_THROWS_AS(sample_matrix(bad, 2, 2, 1), DomainError);
  EnsembleSpec wrong_c = EnsembleSpec::gaussian();
  wrong_c.subgaussian_constant = 1.0;
  CHECK_THROWS_AS(sample_matrix(wrong_c, 2, 2, 1), DomainError);
}

TEST_CASE("ensemble constants")
{
  CHECK(EnsembleSpec::gaussian().subgaussian_constant == 0.5);
  CHECK(EnsembleSpec::bernoulli().subgaussian_constant == 0.5);
  REQUIRE(EnsembleSpec::bernoulli().concentration_constant.has_value());
  CHECK(*EnsembleSpec::bernoulli().concentration_constant == doctest::Approx(1.0 / 12.0));
}

TEST_CASE("moment generating function check for registered samplers")
{
  const auto uniform = EnsembleSpec::custom(
    "uniform", [](CounterRng& rng) { return std::sqrt(3.0) * (2.0 * rng.uniform() - 1.0); }, 0.5);
  for (const auto& spec : {EnsembleSpec::gaussian(), EnsembleSpec::bernoulli(), uniform}) {
    for (const auto& row : check_subgaussian_mgf(spec, 1000000, 31)) {
      INFO(spec.name << " lambda=" << row.lambda);
      CHECK(row.passes);
    }
  }
  // A heavier-tailed variate with an understated constant is caught.
  const auto understated = EnsembleSpec::custom(
    "scaled", [](CounterRng& rng) { return 2.0 * rng.normal(); }, 0.5);
  bool any_fail = false;
  for (const auto& row : check_subgaussian_mgf(understated, 1000000, 31)) any_fail |= !row.passes;
  CHECK(any_fail);
}

TEST_CASE("sgn")
{
  CHECK(sgn(Eigen::Vector3d::Zero()).isZero(0.0));
  Eigen::VectorXd x(1);
  x << -2.0;
  CHECK(sgn(x)(0) == -1.0);
  Eigen::VectorXcd z(1);
  z << complexd(3.0, -4.0);
  CHECK(sgn(z)(0).real() == doctest::Approx(0.6));
  CHECK(sgn(z)(0).imag() == doctest::Approx(-0.8));
}

TEST_CASE("sgn properties on random sparse signals")
{
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    SignalSpec spec;
    spec.dimension = 40;
    spec.sparsity = static_cast<Index>(seed % 12);
    spec.sign_model = SignModel::complex_uniform_phase;
    spec.magnitude_model = MagnitudeModel::uniform;
    spec.magnitude_low = 0.1;
    spec.magnitude_high = 5.0;
    const auto sig = sample_signal<complexd>(spec, seed);
    const auto s1 = sgn(sig.x);
    CHECK((sgn(s1) - s1).norm() <= 1e-15);
    CHECK((s1.cwiseAbs().array() > 0).count() == spec.sparsity);
    const auto restricted = columns(Eigen::MatrixXcd(s1.transpose()), sig.support);
    CHECK(restricted.squaredNorm() == doctest::Approx(static_cast<double>(spec.sparsity)));
    CHECK(sig.signs.squaredNorm() == doctest::Approx(static_cast<double>(spec.sparsity)));
  }
}

TEST_CASE("signal edge cases")
{
  SignalSpec zero;
  zero.dimension = 10;
  zero.sparsity = 0;
  const auto z = sample_signal<double>(zero, 5);
  CHECK(z.x.isZero(0.0));
  CHECK(z.support.empty());

  SignalSpec full;
  full.dimension = 9;
  full.sparsity = 9;
  const auto f = sample_signal<double>(full, 5);
  CHECK((f.x.array().abs() == 1.0).all());
  CHECK(f.support.size() == 9);
}

TEST_CASE("signal invariants")
{
  SignalSpec spec;
  spec.dimension = 50;
  spec.sparsity = 7;
  spec.magnitude_model = MagnitudeModel::uniform;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const auto sig = sample_signal<double>(spec, seed);
    REQUIRE(sig.support.size() == 7);
    CHECK(std::is_sorted(sig.support.begin(), sig.support.end()));
    CHECK((sig.x.array() != 0.0).count() == 7);
    for (std::size_t k = 0; k < sig.support.size(); ++k) {
      const double v = sig.x(sig.support[k]);
      CHECK(sig.signs(static_cast<Index>(k)) == (v > 0 ? 1.0 : -1.0));
    }
    const auto again = sample_signal<double>(spec, seed);
    CHECK((again.x.array() == sig.x.array()).all());
  }
}

TEST_CASE("explicit signal models")
{
  SignalSpec spec;
  spec.dimension = 5;
  spec.sparsity = 2;
  spec.support_model = SupportModel::explicit_set;
  spec.support = {3, 1};
  spec.sign_model = SignModel::explicit_signs;
  spec.signs = {complexd(1.0), complexd(-1.0)};
  spec.magnitude_model = MagnitudeModel::explicit_values;
  spec.magnitudes = {2.0, 0.5};
  const auto sig = sample_signal<double>(spec, 0);
  CHECK(sig.support == IndexSet{1, 3});
  CHECK(sig.x(1) == 2.0);
  CHECK(sig.x(3) == -0.5);

  auto zero_magnitude = spec;
  zero_magnitude.magnitudes = {2.0, 0.0};
  CHECK_THROWS_AS(sample_signal<double>(zero_magnitude, 0), DomainError);

  auto non_unit = spec;
  non_unit.signs = {complexd(1.0), complexd(0.5)};
  CHECK_THROWS_AS(sample_signal<double>(non_unit, 0), DomainError);

  auto wrong_count = spec;
  wrong_count.support = {1};
  CHECK_THROWS_AS(sample_signal<double>(wrong_count, 0), DomainError);

  auto complex_for_real = spec;
  complex_for_real.sign_model = SignModel::complex_uniform_phase;
  CHECK_THROWS_AS(sample_signal<double>(complex_for_real, 0), DomainError);

  SignalSpec too_sparse;
  too_sparse.dimension = 3;
  too_sparse.sparsity = 4;
  CHECK_THROWS_AS(sample_signal<double>(too_sparse, 0), DomainError);
}

TEST_CASE("make_signal reads support and signs")
{
  Eigen::VectorXcd x = Eigen::VectorXcd::Zero(4);
  x(2) = complexd(0.0, -3.0);
  const auto sig = make_signal(x);
  CHECK(sig.support == IndexSet{2});
  CHECK(std::abs(sig.signs(0) - complexd(0.0, -1.0)) < 1e-15);
}

TEST_CASE("uniform support frequencies for s = 1")
{
  // 10^5 draws over 10^4 indices: counts are Binomial(10^5, 10^-4). Tested by
  // a chi-square statistic (df 9999, sd sqrt(2 df)) and a Bonferroni-level
  // cap on the largest count.
  const Index N = 10000;
  const int draws = 100000;
  std::vector<int> counts(static_cast<std::size_t>(N), 0);
  for (int d = 0; d < draws; ++d) {
    CounterRng rng(derive_seed(99, 1, static_cast<std::uint64_t>(d)));
    const auto S = sample_support(N, 1, rng);
    REQUIRE(S.size() == 1);
    ++counts[static_cast<std::size_t>(S[0])];
  }
  const double expected = static_cast<double>(draws) / static_cast<double>(N);
  double chi2 = 0.0;
  int max_count = 0;
  for (int c : counts) {
    chi2 += (c - expected) * (c - expected) / expected;
    max_count = std::max(max_count, c);
  }
  const double df = static_cast<double>(N - 1);
  CHECK(std::abs(chi2 - df) <= 3.0 * std::sqrt(2.0 * df));
  // P(Poisson(10) >= 30) ~ 7e-8 per index.
  CHECK(max_count < 30);
}

TEST_CASE("sample_support covers all subsets uniformly for small N")
{
  // N = 5, s = 2: 10 subsets, 20000 draws; 4 sd per cell keeps the
  // family-wise false alarm rate below 1e-3.
  std::map<IndexSet, int> freq;
  for (int d = 0; d < 20000; ++d) {
    CounterRng rng(derive_seed(3, 4, static_cast<std::uint64_t>(d)));
    ++freq[sample_support(5, 2, rng)];
  }
  CHECK(freq.size() == 10);
  for (const auto& [S, c] : freq) CHECK(std::abs(c - 2000) <= 4.0 * std::sqrt(2000 * 0.9));
}
