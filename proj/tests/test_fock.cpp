#include <gtest/gtest.h>

#include "sps/fock.hpp"

#include <random>

using namespace sps;

namespace {

const std::vector<std::string> xy{"x", "y"};

SubproductSystem quad(const char* rel, int level) {
  QuadraticIdeal j(2);
  j.add(parse_poly(rel, xy));
  return build_quadratic(j, level);
}

Vector random_vector(Index n, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Index i = 0; i < n; ++i) v(i) = Complex(g(rng), g(rng));
  return v;
}

}  // namespace

TEST(Fock, TotalDimensions) {
  EXPECT_EQ(build_fock(quad("x*y - y*x", 4), 2).total_dim(), 1 + 2 + 3);
  EXPECT_EQ(build_fock(build_quadratic(QuadraticIdeal(2), 4), 4).total_dim(), 1 + 2 + 4 + 8 + 16);
  EXPECT_EQ(build_fock(quad("x*x", 4), 4).total_dim(), 1 + 2 + 3 + 5 + 8);
  const auto f = build_fock(quad("x*y - y*x", 4), 3);
  EXPECT_EQ(f.offset(2), 3);
  EXPECT_EQ(f.level_dim(3), 4);
}

TEST(Fock, SingleVariableShiftIsUnilateral) {
  const auto f = build_fock(build_quadratic(QuadraticIdeal(1), 6), 6);
  const Matrix s = shift(f, 0).matrix;
  Matrix expected = Matrix::Zero(7, 7);
  for (Index k = 0; k < 6; ++k) expected(k + 1, k) = 1.0;
  EXPECT_LT(residual_norm(s - expected), 1e-14);
}

TEST(Fock, ToeplitzIsLinearInTheSymbol) {
  std::mt19937 rng(1);
  const auto f = build_fock(quad("x*x", 5), 4);
  const Vector a = random_vector(2, rng), b = random_vector(2, rng);
  const Complex c(0.3, -1.2);
  const Matrix lhs = toeplitz(f, a + c * b).matrix;
  const Matrix rhs = toeplitz(f, a).matrix + c * toeplitz(f, b).matrix;
  EXPECT_LT(residual_norm(lhs - rhs), 1e-12);
  EXPECT_THROW(toeplitz(f, Vector::Zero(3)), Error);
}

TEST(Fock, ShiftsAreIsometriesBeforeTruncation) {
  // free system: S_i^* S_j = delta_ij on the levels below the top
  const auto f = build_fock(build_quadratic(QuadraticIdeal(3), 3), 3);
  const Matrix zone = f.level_range_projector(0, 2);
  for (Index i = 0; i < 3; ++i)
    for (Index j = 0; j < 3; ++j) {
      const Matrix m = shift(f, i).matrix.adjoint() * shift(f, j).matrix * zone;
      EXPECT_LT(residual_norm(m - (i == j ? zone : Matrix::Zero(m.rows(), m.cols()))), 1e-12);
    }
}

TEST(Fock, VacuumIdentity) {
  for (const char* rel : {"x*y - y*x", "x*x", "x*y"}) {
    EXPECT_LT(vacuum_identity_residual(build_fock(quad(rel, 5), 5)), 1e-10) << rel;
  }
}

TEST(Fock, MatrixFreeApplyMatchesDense) {
  std::mt19937 rng(2);
  const auto f = build_fock(quad("x*y - 2*y*x", 6), 6);
  const Vector xi = random_vector(2, rng);
  const Matrix t = toeplitz(f, xi).matrix;
  for (int trial = 0; trial < 5; ++trial) {
    const Vector x = random_vector(f.total_dim(), rng);
    EXPECT_LT((apply_toeplitz(f, xi, x) - t * x).norm(), 1e-12);
    EXPECT_LT((apply_toeplitz(f, xi, x, true) - t.adjoint() * x).norm(), 1e-12);
  }
}

TEST(Fock, AdjointConsistency) {
  std::mt19937 rng(3);
  const auto f = build_fock(quad("x*x - y*x", 5), 5);
  const Vector xi = random_vector(2, rng);
  for (int trial = 0; trial < 10; ++trial) {
    const Vector x = random_vector(f.total_dim(), rng), y = random_vector(f.total_dim(), rng);
    const Complex lhs = y.dot(apply_toeplitz(f, xi, x));
    const Complex rhs = apply_toeplitz(f, xi, y, true).dot(x);
    EXPECT_LT(std::abs(lhs - rhs), 1e-10 * (1.0 + std::abs(lhs)));
  }
}

TEST(UniversalRelations, CommutatorHolds) {
  const auto s = quad("x*y - y*x", 6);
  const auto f = build_fock(s, 5);
  const auto rep = check_universal_relations(f, coeff_matrix(parse_poly("x*y - y*x", xy)), 1.0);
  EXPECT_TRUE(rep.all_passed);
  ASSERT_EQ(rep.relations.size(), 4u);
  for (const auto& r : rep.relations) EXPECT_LT(r.residual, 1e-10) << r.name;
  EXPECT_EQ(rep.zone_max_level, 3);
}

TEST(UniversalRelations, QuantumPlaneHolds) {
  const auto t = normalize_tl(parse_poly("1.4142135623730951*x*y - 0.7071067811865476*y*x", xy), 6);
  const auto rep = check_universal_relations(build_fock(t.system, 6), t.a, t.q);
  EXPECT_TRUE(rep.all_passed);
  for (const auto& r : rep.relations) EXPECT_LT(r.residual, 1e-10) << r.name;
}

TEST(UniversalRelations, NonTLSystemFailsTheCuntzRelation) {
  const auto s = quad("x*x", 6);
  CoeffMatrix a{Matrix::Zero(2, 2)};
  a.entries(0, 0) = 1.0;
  const auto rep = evaluate_universal_relations(build_fock(s, 5), a, 1.0);
  EXPECT_FALSE(rep.all_passed);
  EXPECT_LT(rep.relations[0].residual, 1e-10);
  EXPECT_LT(rep.relations[1].residual, 1e-10);
  EXPECT_GT(rep.relations[2].residual, 0.1);
  EXPECT_LT(rep.relations[3].residual, 1e-10);
}

TEST(UniversalRelations, PreconditionErrors) {
  const auto s = quad("x*y - y*x", 4);
  const auto f = build_fock(s, 3);
  const auto a = coeff_matrix(parse_poly("x*y - y*x", xy));
  for (double q : {0.0, -0.5, 1.5}) {
    try {
      check_universal_relations(f, a, q);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::QOutOfRange);
    }
  }
  try {
    check_universal_relations(f, coeff_matrix(parse_poly("x*x", xy)), 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotTemperleyLieb);
  }
  try {
    check_universal_relations(f, a, 0.5);  // trace 2 is not q + 1/q
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotTemperleyLieb);
  }
}
