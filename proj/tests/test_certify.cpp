#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"

#include <cslab/bp_solver.hpp>
#include <cslab/certify.hpp>
#include <cslab/ensembles.hpp>

using namespace cslab;

TEST_CASE("certificate on a 2 x 3 example")
{
  Eigen::MatrixXd A(2, 3);
  A << 1, 0, 0.5, 0, 1, 0.5;
  Eigen::VectorXd signs(1);
  signs << 1.0;
  const auto r = fuchs_certificate(A, {0}, signs);
  CHECK(r.injective);
  CHECK(r.sigma_min == doctest::Approx(1.0));
  CHECK(r.off_support == IndexSet{1, 2});
  REQUIRE(r.correlations.size() == 2);
  CHECK(r.correlations[0] == doctest::Approx(0.0));
  CHECK(r.correlations[1] == doctest::Approx(0.5));
  CHECK(r.max_correlation == doctest::Approx(0.5));
  CHECK(r.holds);
  CHECK_FALSE(r.boundary);
}

TEST_CASE("identical columns sit exactly on the boundary")
{
  Eigen::MatrixXd A(1, 2);
  A << 1, 1;
  Eigen::VectorXd signs(1);
  signs << 1.0;
  const auto r = fuchs_certificate(A, {0}, signs);
  CHECK(r.max_correlation == doctest::Approx(1.0));
  CHECK(r.boundary);
  CHECK_FALSE(r.holds);
}

TEST_CASE("empty support and full support")
{
  const Eigen::MatrixXd A = sample_matrix(EnsembleSpec::gaussian(), 4, 6, 1);
  const auto empty = fuchs_certificate(A, {}, Eigen::VectorXd(0));
  CHECK(empty.holds);
  CHECK(empty.max_correlation == 0.0);
  CHECK(empty.correlations.size() == 6);

  const Eigen::MatrixXd square = sample_matrix(EnsembleSpec::gaussian(), 5, 5, 2);
  const auto full = fuchs_certificate(square, {0, 1, 2, 3, 4}, Eigen::VectorXd::Ones(5));
  CHECK(full.injective);
  CHECK(full.holds);
  CHECK(full.off_support.empty());
  CHECK(full.max_correlation == 0.0);
}

TEST_CASE("non-injective A_S fails without throwing")
{
  Eigen::MatrixXd A(2, 3);
  A << 1, 2, 0, 1, 2, 1;
  const auto r = fuchs_certificate(A, {0, 1}, Eigen::VectorXd::Ones(2));
  CHECK_FALSE(r.injective);
  CHECK_FALSE(r.holds);

  const Eigen::MatrixXd wide = sample_matrix(EnsembleSpec::gaussian(), 2, 6, 3);
  const auto tall_support = fuchs_certificate(wide, {0, 1, 2}, Eigen::VectorXd::Ones(3));
  CHECK_FALSE(tall_support.injective);
  CHECK_FALSE(tall_support.holds);
}

TEST_CASE("certificate input errors")
{
  const Eigen::MatrixXd A = Eigen::MatrixXd::Identity(3, 3);
  CHECK_THROWS_AS(fuchs_certificate(A, {3}, Eigen::VectorXd::Ones(1)), DomainError);
  CHECK_THROWS_AS(fuchs_certificate(A, {-1}, Eigen::VectorXd::Ones(1)), DomainError);
  CHECK_THROWS_AS(fuchs_certificate(A, {1, 1}, Eigen::VectorXd::Ones(2)), DomainError);
  CHECK_THROWS_AS(fuchs_certificate(A, {1}, Eigen::VectorXd::Constant(1, 0.5)), DomainError);
  CHECK_THROWS_AS(fuchs_certificate(A, {1}, Eigen::VectorXd::Ones(2)), DimensionError);
}

TEST_CASE("correlations match the closed-form 2 x 2 normal equations")
{
  for (std::uint64_t seed = 0; seed < 25; ++seed) {
    const Eigen::MatrixXd A = sample_matrix(EnsembleSpec::gaussian(), 20, 50, derive_seed(seed, 1, 0));
    SignalSpec spec;
    spec.dimension = 50;
    spec.sparsity = 2;
    const auto sig = sample_signal<double>(spec, derive_seed(seed, 2, 0));
    const auto r = fuchs_certificate(A, sig.support, sig.signs);
    REQUIRE(r.injective);

    const Eigen::MatrixXd AS = columns(A, sig.support);
    const Eigen::Matrix2d gram = AS.transpose() * AS;
    const Eigen::MatrixXd pinv = oracle::inverse2<double>(gram) * AS.transpose();
    for (std::size_t k = 0; k < r.off_support.size(); ++k) {
      const double expected = std::abs(sig.signs.dot(pinv * A.col(r.off_support[k])));
      CHECK(std::abs(r.correlations[k] - expected) <= 1e-10);
    }
  }
}

TEST_CASE("dual vector satisfies the on-support equations")
{
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::MatrixXcd A =
      sample_matrix(EnsembleSpec::gaussian(), 15, 30, seed).cast<complexd>();
    SignalSpec spec;
    spec.dimension = 30;
    spec.sparsity = 3;
    spec.sign_model = SignModel::complex_uniform_phase;
    const auto sig = sample_signal<complexd>(spec, seed + 1000);
    const auto r = fuchs_certificate(A, sig.support, sig.signs);
    REQUIRE(r.injective);
    const Eigen::VectorXcd lhs = columns(A, sig.support).adjoint() * r.dual_h;
    CHECK((lhs - sig.signs).cwiseAbs().maxCoeff() <= 1e-8);

    // (A_S)^+ a_l is the l-th standard basis vector for l in S.
    const Eigen::MatrixXcd pinv = pseudo_inverse(columns(A, sig.support));
    for (std::size_t k = 0; k < sig.support.size(); ++k) {
      const complexd inner = (pinv * A.col(sig.support[k])).dot(sig.signs);
      CHECK(std::abs(inner - sig.signs(static_cast<Index>(k))) <= 1e-10);
    }
    CHECK(r.holds == (r.max_correlation < 1.0));
  }
}

TEST_CASE("scale and magnitude invariance")
{
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const Eigen::MatrixXd A = sample_matrix(EnsembleSpec::gaussian(), 12, 40, seed);
    SignalSpec spec;
    spec.dimension = 40;
    spec.sparsity = 3;
    spec.magnitude_model = MagnitudeModel::uniform;
    spec.magnitude_low = 0.1;
    spec.magnitude_high = 10.0;
    const auto sig = sample_signal<double>(spec, seed);
    const auto base = fuchs_certificate(A, sig.support, sig.signs);

    for (double c : {-3.0, 1e-3, 250.0}) {
      const auto scaled = fuchs_certificate(Eigen::MatrixXd(c * A), sig.support, sig.signs);
      CHECK(scaled.holds == base.holds);
      for (std::size_t k = 0; k < base.correlations.size(); ++k)
        CHECK(scaled.correlations[k] == doctest::Approx(base.correlations[k]).epsilon(1e-10));
    }

    // Same support and signs, different magnitudes.
    auto respec = spec;
    respec.support_model = SupportModel::explicit_set;
    respec.support = sig.support;
    respec.sign_model = SignModel::explicit_signs;
    for (Index k = 0; k < sig.signs.size(); ++k) respec.signs.emplace_back(sig.signs(k));
    respec.magnitude_model = MagnitudeModel::explicit_values;
    respec.magnitudes = {7.0, 0.01, 3.0};
    const auto other = sample_signal<double>(respec, seed + 1);
    CHECK((other.x - sig.x).norm() > 0.0);
    const auto again = fuchs_certificate(A, other.support, other.signs);
    CHECK(again.holds == base.holds);
    CHECK(again.correlations == base.correlations);
    CHECK(again.max_correlation == base.max_correlation);
  }
}

TEST_CASE("verify_dual_conditions")
{
  const Eigen::MatrixXd A = sample_matrix(EnsembleSpec::gaussian(), 30, 60, 5);
  SignalSpec spec;
  spec.dimension = 60;
  spec.sparsity = 2;
  const auto sig = sample_signal<double>(spec, 6);
  const auto r = fuchs_certificate(A, sig.support, sig.signs);
  REQUIRE(r.holds);
  CHECK(verify_dual_conditions(A, sig.support, sig.signs, r.dual_h));
  CHECK_FALSE(verify_dual_conditions(A, sig.support, sig.signs, Eigen::VectorXd::Zero(30)));

  // Push h along the component of the worst off-support column orthogonal to
  // range(A_S): the on-support equations are untouched, the worst
  // correlation is raised past 1.
  const auto worst = std::max_element(r.correlations.begin(), r.correlations.end())
                     - r.correlations.begin();
  const Index l = r.off_support[static_cast<std::size_t>(worst)];
  const Eigen::MatrixXd AS = columns(A, sig.support);
  const Eigen::VectorXd residual = A.col(l) - AS * (pseudo_inverse(AS) * A.col(l));
  const double current = A.col(l).dot(r.dual_h);
  const double direction = current >= 0 ? 1.0 : -1.0;
  const double step = 2.0 * (1.0 - r.max_correlation) / residual.squaredNorm();
  const Eigen::VectorXd h = r.dual_h + direction * step * residual;
  CHECK(std::abs(A.col(l).dot(h)) >= 1.0);
  CHECK((AS.transpose() * h - sig.signs).cwiseAbs().maxCoeff() <= 1e-8);
  CHECK_FALSE(verify_dual_conditions(A, sig.support, sig.signs, h));

  CHECK_THROWS_AS(verify_dual_conditions(A, sig.support, sig.signs, Eigen::VectorXd::Zero(3)),
                  DimensionError);
}

TEST_CASE("a holding certificate means basis pursuit returns x")
{
  int holding = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const Eigen::MatrixXd A = sample_matrix(EnsembleSpec::gaussian(), 25, 60, seed);
    SignalSpec spec;
    spec.dimension = 60;
    spec.sparsity = 3;
    spec.magnitude_model = MagnitudeModel::uniform;
    const auto sig = sample_signal<double>(spec, seed + 77);
    const auto r = fuchs_certificate(A, sig.support, sig.signs);
    if (!r.holds) continue;
    ++holding;
    const auto report = basis_pursuit<double>(A, A * sig.x);
    CHECK(report.converged);
    CHECK(recovered<double>(report.z, sig.x));
  }
  CHECK(holding >= 20);
}
