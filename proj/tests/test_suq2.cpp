#include <gtest/gtest.h>

#include "sps/freeprod.hpp"
#include "sps/suq2.hpp"

#include <cmath>
#include <random>

using namespace sps;

namespace {

double collinearity_defect(const Vector& a, const Vector& b) {
  return 1.0 - std::abs(a.dot(b)) / (a.norm() * b.norm());
}

}  // namespace

TEST(Suq2, CoefficientsOfTheDefiningRepresentation) {
  const auto a = det_coefficients(1, 0.25);
  ASSERT_EQ(a.size(), 2u);
  EXPECT_NEAR(a[0], -2.0, 1e-15);
  EXPECT_NEAR(a[1], 0.5, 1e-15);
  const auto one = det_coefficients(3, 1.0);
  EXPECT_EQ(one, (std::vector<double>{-1.0, 1.0, -1.0, 1.0}));
  EXPECT_THROW(det_coefficients(2, 0.0), Error);
  EXPECT_THROW(det_vector_irrep(0, 0.5), Error);
}

TEST(Suq2, DefiningRepresentationIsTheQuantumPlane) {
  for (double q : {0.3, 0.5, 0.7, 1.0}) {
    const Vector det = poly_to_vector(det_vector_irrep(1, q), 2);
    NCPoly plane(2);
    plane.add_term({0, 1}, 1.0);
    plane.add_term({1, 0}, -q);
    EXPECT_LT(collinearity_defect(det, poly_to_vector(plane, 2)), 1e-12) << q;
  }
}

TEST(Suq2, ClassicalLimitParity) {
  for (int n = 1; n <= 5; ++n) {
    const CoeffMatrix a = coeff_matrix(det_vector_irrep(n, 1.0));
    const double sign = n % 2 ? -1.0 : 1.0;
    EXPECT_LT(residual_norm(a.entries.transpose() - sign * a.entries), 1e-15) << n;
  }
}

TEST(Suq2, IrreduciblesAreTemperleyLieb) {
  for (int n = 1; n <= 4; ++n)
    for (double q : {0.3, 0.7, 1.0}) {
      const auto p = det_vector_irrep(n, q);
      ASSERT_TRUE(is_temperley_lieb(p).is_tl);
      const auto t = normalize_tl(p, 2);
      EXPECT_NEAR(t.q + 1.0 / t.q, q_number(n + 1, q), 1e-10) << n << " " << q;
    }
}

TEST(Suq2, AdjointRepresentationSeries) {
  const auto s = suq2_system(parse_rep_spec("2", 0.5), 5);
  EXPECT_EQ(hilbert_series(s).coefficients, (std::vector<long long>{1, 3, 8, 21, 55, 144}));
  EXPECT_EQ(s.tl_factor_dims(), (std::vector<std::size_t>{3}));
}

TEST(Suq2, DetSpaceDimensions) {
  EXPECT_EQ(det_space(parse_rep_spec("1", 0.5)).dim(), 1);
  EXPECT_EQ(det_space(parse_rep_spec("1:2", 0.5)).dim(), 4);
  EXPECT_EQ(det_space(parse_rep_spec("1:1,2:1", 0.5)).dim(), 2);
  EXPECT_EQ(det_space(parse_rep_spec("0:2,3:1", 0.8)).dim(), 5);
  const auto vs = det_vectors(parse_rep_spec("1:2,2:2", 0.6));
  ASSERT_EQ(vs.size(), 8u);
  for (std::size_t i = 0; i < vs.size(); ++i)
    for (std::size_t j = i + 1; j < vs.size(); ++j) EXPECT_LT(std::abs(vs[i].dot(vs[j])), 1e-15);
}

TEST(Suq2, MultiplicityFreeIsAFreeProductOfIrreducibles) {
  for (double q : {0.3, 1.0}) {
    const auto spec = parse_rep_spec("1:1,2:1", q);
    const auto s = suq2_system(spec, 4);
    const auto t1 = normalize_tl(det_vector_irrep(1, q), 4);
    const auto t2 = normalize_tl(det_vector_irrep(2, q), 4);
    const auto fp = free_product(t1.system, t2.system, 4);
    for (int n = 0; n <= 4; ++n) EXPECT_TRUE(equal(s.fibre(n), fp.fibre(n))) << n;
    EXPECT_EQ(s.tl_factor_dims(), (std::vector<std::size_t>{2, 3}));
    EXPECT_EQ(hilbert_series(s), generic_series(5, 2, 4));
  }
}

TEST(Suq2, IsotypicalSeries) {
  const auto rho = isotypical_series(1, 2, 5);
  EXPECT_EQ(rho.recurrence.coefficients, (std::vector<long long>{1, 4, 12, 32, 80, 192}));
  EXPECT_EQ(rho.substituted, rho.recurrence);
  for (int n = 1; n <= 4; ++n)
    for (int t = 1; t <= 3; ++t) EXPECT_NO_THROW(isotypical_series(n, t, 8));
  EXPECT_THROW(isotypical_series(0, 1, 3), Error);
}

TEST(Suq2, IsotypicalSystemMatchesItsSeries) {
  for (const auto& [n, t] : std::vector<std::pair<int, int>>{{1, 2}, {2, 2}, {1, 3}}) {
    const auto spec = parse_rep_spec(std::to_string(n) + ":" + std::to_string(t), 0.7);
    const auto s = suq2_system(spec, 4);
    EXPECT_EQ(hilbert_series(s), isotypical_series(n, t, 4).recurrence) << n << ":" << t;
    EXPECT_TRUE(s.tl_factor_dims().empty());
  }
}

TEST(Suq2, FewRelationsAndGeneric) {
  for (const char* text : {"1", "2", "1:1,2:1", "1:2", "1:1,3:1", "2:2"}) {
    const auto s = suq2_system(parse_rep_spec(text, 0.6), 4);
    EXPECT_TRUE(has_few_relations(s)) << text;
    EXPECT_TRUE(is_generic(s)) << text;
  }
}

TEST(Suq2, ParseErrors) {
  const auto spec = parse_rep_spec(" 1:1, 2 ", 0.5);
  EXPECT_EQ(spec.weights, (std::vector<Weight>{{1, 1}, {2, 1}}));
  EXPECT_EQ(spec.to_string(), "1:1,2:1");
  EXPECT_EQ(spec.dimension(), 5u);
  for (const auto& [text, kind] : std::vector<std::pair<const char*, ErrorKind>>{
           {"", ErrorKind::EmptyAlphabet},
           {"1:0", ErrorKind::OutOfRange},
           {"1,1", ErrorKind::InvalidArgument},
           {"1;2", ErrorKind::SyntaxError},
           {"a", ErrorKind::SyntaxError}}) {
    try {
      parse_rep_spec(text, 0.5);
      FAIL() << text;
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), kind) << text;
    }
  }
  EXPECT_THROW(parse_rep_spec("1", 1.5), Error);
}
