#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "oracles.hpp"

#include <cslab/linalg.hpp>
#include <cslab/rng.hpp>

#include <algorithm>
#include <numeric>

using namespace cslab;

namespace {

Eigen::MatrixXd random_matrix(Index m, Index n, std::uint64_t seed)
{
  CounterRng rng(seed);
  Eigen::MatrixXd M(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) M(i, j) = rng.normal();
  return M;
}

Eigen::MatrixXcd random_complex_matrix(Index m, Index n, std::uint64_t seed)
{
  CounterRng rng(seed);
  Eigen::MatrixXcd M(m, n);
  for (Index j = 0; j < n; ++j)
    for (Index i = 0; i < m; ++i) M(i, j) = complexd(rng.normal(), rng.normal());
  return M;
}

} // namespace

TEST_CASE("smallest singular value of simple matrices")
{
  CHECK(smallest_singular_value(Eigen::Matrix3d::Identity()) == doctest::Approx(1.0));
  Eigen::Matrix2d D = Eigen::Vector2d(3.0, 1.0).asDiagonal();
  CHECK(smallest_singular_value(D) == doctest::Approx(1.0));
  Eigen::Matrix2d negative = Eigen::Vector2d(-3.0, -0.5).asDiagonal();
  CHECK(smallest_singular_value(negative) == doctest::Approx(0.5));
}

TEST_CASE("smallest singular value rejects wide matrices")
{
  CHECK_THROWS_AS(smallest_singular_value(Eigen::MatrixXd::Ones(2, 3)), DimensionError);
}

TEST_CASE("singular values of m x 2 matrices match the Gram oracle")
{
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    const Eigen::MatrixXd M = random_matrix(4, 2, seed);
    const auto sv = oracle::singular_values_m_by_2(M);
    CHECK(std::abs(smallest_singular_value(M) - sv[0]) <= 1e-10 * sv[1]);
    CHECK(std::abs(operator_norm(M) - sv[1]) <= 1e-10 * sv[1]);

    const Eigen::MatrixXcd Mc = random_complex_matrix(5, 2, seed + 100);
    const auto svc = oracle::singular_values_m_by_2(Mc);
    CHECK(std::abs(smallest_singular_value(Mc) - svc[0]) <= 1e-10 * svc[1]);
    CHECK(std::abs(operator_norm(Mc) - svc[1]) <= 1e-10 * svc[1]);
  }
}

TEST_CASE("singular values of m x 3 matrices match the Gram oracle")
{
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const Eigen::MatrixXd M = random_matrix(6, 3, seed);
    const Eigen::Matrix3d G = M.transpose() * M;
    const auto ev = oracle::symmetric3_eigenvalues(G);
    const double smax = std::sqrt(ev[2]);
    CHECK(std::abs(smallest_singular_value(M) - std::sqrt(ev[0])) <= 1e-10 * smax);
    CHECK(std::abs(operator_norm(M) - smax) <= 1e-10 * smax);
  }
}

TEST_CASE("operator norm")
{
  CHECK(operator_norm(Eigen::MatrixXd::Identity(5, 5)) == doctest::Approx(1.0));

  Eigen::Vector3d u(1.0, -2.0, 2.0);
  Eigen::Vector4d v(0.5, 0.5, 0.5, 0.5);
  const Eigen::MatrixXd rank_one = u * v.transpose();
  CHECK(operator_norm(rank_one) == doctest::Approx(u.norm() * v.norm()).epsilon(1e-12));

  Eigen::Matrix2d S;
  S << 2, 1, 1, 2;
  CHECK(operator_norm(S) == doctest::Approx(3.0).epsilon(1e-12));

  CHECK(operator_norm(Eigen::MatrixXd(0, 0)) == 0.0);
}

TEST_CASE("pseudo-inverse examples")
{
  const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(3, 3);
  CHECK((pseudo_inverse(I) - I).norm() < 1e-14);

  Eigen::MatrixXd col(2, 1);
  col << 1, 1;
  const Eigen::MatrixXd p = pseudo_inverse(col);
  REQUIRE(p.rows() == 1);
  REQUIRE(p.cols() == 2);
  CHECK(p(0, 0) == doctest::Approx(0.5));
  CHECK(p(0, 1) == doctest::Approx(0.5));
}

TEST_CASE("pseudo-inverse matches the normal equations with a cofactor inverse")
{
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    const Eigen::MatrixXd B = random_matrix(5, 3, seed);
    const Eigen::MatrixXd pinv = pseudo_inverse(B);
    CHECK(operator_norm(pinv * B - Eigen::MatrixXd::Identity(3, 3)) <= 1e-10);

    const Eigen::Matrix3d gram = B.transpose() * B;
    const Eigen::MatrixXd normal = oracle::cofactor_inverse(gram) * B.transpose();
    CHECK((pinv - normal).cwiseAbs().maxCoeff() <= 1e-10 * std::max(1.0, normal.norm()));
  }
}

TEST_CASE("pseudo-inverse rejects non-injective matrices")
{
  Eigen::MatrixXd B(3, 2);
  B << 1, 2, 2, 4, 3, 6;
  CHECK_THROWS_AS(pseudo_inverse(B), RankDeficientError);
  CHECK_THROWS_AS(pseudo_inverse(Eigen::MatrixXd::Ones(2, 3)), DimensionError);
  CHECK_THROWS_AS(pseudo_inverse(Eigen::MatrixXd::Zero(3, 1)), RankDeficientError);
}

TEST_CASE("properties over random tall matrices")
{
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    CounterRng rng(seed * 7919);
    const Index n = 1 + static_cast<Index>(rng.below(5));
    const Index m = n + static_cast<Index>(rng.below(6));
    const Eigen::MatrixXcd M = random_complex_matrix(m, n, seed);

    const auto pinv = pseudo_inverse(M);
    CHECK(operator_norm(pinv * M - Eigen::MatrixXcd::Identity(n, n)) <= 1e-10);

    const double smin = smallest_singular_value(M);
    CHECK(operator_norm(pinv) * smin == doctest::Approx(1.0).epsilon(1e-8));

    // Row permutation.
    std::vector<Index> perm(static_cast<std::size_t>(m));
    std::iota(perm.begin(), perm.end(), 0);
    for (Index i = m - 1; i > 0; --i)
      std::swap(perm[static_cast<std::size_t>(i)],
                perm[static_cast<std::size_t>(rng.below(static_cast<std::uint64_t>(i + 1)))]);
    Eigen::MatrixXcd P(m, n);
    for (Index i = 0; i < m; ++i) P.row(i) = M.row(perm[static_cast<std::size_t>(i)]);
    CHECK(smallest_singular_value(P) == doctest::Approx(smin).epsilon(1e-10));
    CHECK(operator_norm(P) == doctest::Approx(operator_norm(M)).epsilon(1e-10));

    // Left multiplication by a unitary matrix.
    const Eigen::MatrixXcd Q = random_complex_matrix(m, m, seed + 500).householderQr().householderQ();
    const Eigen::MatrixXcd QM = Q * M;
    CHECK(smallest_singular_value(QM) == doctest::Approx(smin).epsilon(1e-10));
    CHECK(operator_norm(QM) == doctest::Approx(operator_norm(M)).epsilon(1e-10));
  }
}

TEST_CASE("columns extracts A_S in the given order")
{
  Eigen::MatrixXd A(2, 3);
  A << 1, 2, 3, 4, 5, 6;
  const Eigen::MatrixXd AS = columns(A, {2, 0});
  CHECK(AS(0, 0) == 3);
  CHECK(AS(1, 1) == 4);
}
