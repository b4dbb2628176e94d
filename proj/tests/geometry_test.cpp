#include "qrange/error.hpp"
#include "qrange/geometry.hpp"
#include "qrange/simplex.hpp"
#include "qrange/tsirelson.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qrange;

namespace {

BehaviorMatrix chsh_point() {
  const double r = 1.0 / std::sqrt(2.0);
  RealMatrix s(2, 2);
  s << r, r, r, -r;
  return tsirelson_to_bell0(SignedCorrelationMatrix(s));
}

BehaviorMatrix random_box_point(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  RealVector v(free_dimension(n));
  for (Index k = 0; k < v.size(); ++k) v(k) = u(rng);
  return BehaviorMatrix::from_free(n, v);
}

BehaviorMatrix vertex_point(const VertexSet& vs, std::size_t k) {
  RealVector v(vs.dim);
  for (int c = 0; c < vs.dim; ++c) v(c) = vs.vertices[k][c];
  return BehaviorMatrix::from_free(vs.n, v);
}

}  // namespace

TEST(Simplex, SolvesSmallLinearProgram) {
  // min -x - y  s.t.  x + s1 = 2, y + s2 = 3, x + y + s3 = 4
  Eigen::MatrixXd a(3, 5);
  a << 1, 0, 1, 0, 0, 0, 1, 0, 1, 0, 1, 1, 0, 0, 1;
  Eigen::VectorXd b(3), c(5);
  b << 2, 3, 4;
  c << -1, -1, 0, 0, 0;
  const lp::Result r = lp::solve(a, b, c);
  ASSERT_EQ(r.status, lp::Status::optimal);
  EXPECT_NEAR(r.objective, -4.0, 1e-12);
  EXPECT_LE((a * r.x - b).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Simplex, InfeasibleReturnsFarkasCertificate) {
  // x + y = 1 and x + y = 2 with x, y >= 0.
  Eigen::MatrixXd a(2, 2);
  a << 1, 1, 1, 1;
  Eigen::VectorXd b(2), c = Eigen::VectorXd::Zero(2);
  b << 1, 2;
  const lp::Result r = lp::solve(a, b, c);
  ASSERT_EQ(r.status, lp::Status::infeasible);
  EXPECT_LE((a.transpose() * r.duals).maxCoeff(), 1e-12);
  EXPECT_GT(b.dot(r.duals), 0.0);
}

TEST(Norm, ParsesNames) {
  EXPECT_EQ(parse_norm("l1"), Norm::l1);
  EXPECT_EQ(parse_norm("linf"), Norm::linf);
  EXPECT_EQ(to_string(Norm::l2), "l2");
  EXPECT_THROW(parse_norm("l3"), std::invalid_argument);
}

TEST(Membership, VerticesAndMixturesAreInside) {
  const VertexSet vs = classical_vertices(2);
  for (std::size_t k = 0; k < vs.vertices.size(); ++k)
    EXPECT_EQ(lp_membership(vertex_point(vs, k), vs).verdict, Verdict::inside);

  std::mt19937_64 rng(2);
  const RealMatrix v = vertex_matrix(vs);
  for (int trial = 0; trial < 20; ++trial) {
    RealVector w = RealVector::Zero(v.cols());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (Index k = 0; k < w.size(); ++k) w(k) = u(rng);
    w /= w.sum();
    const BehaviorMatrix b = BehaviorMatrix::from_free(2, v * w);
    const MembershipCertificate cert = lp_membership(b, vs);
    ASSERT_EQ(cert.verdict, Verdict::inside);
    RealVector rec = RealVector::Zero(vs.dim);
    double total = 0.0;
    for (const auto& vw : cert.weights) {
      EXPECT_GE(vw.weight, 0.0);
      rec += vw.weight * v.col(Index(vw.vertex));
      total += vw.weight;
    }
    EXPECT_NEAR(total, 1.0, 1e-9);
    EXPECT_LE((rec - b.free_vector()).cwiseAbs().maxCoeff(), 1e-9);
  }
}

TEST(Membership, ChshPointIsSeparatedByClauserHorne) {
  const VertexSet vs = classical_vertices(2);
  const auto catalog = enumerate_facets(vs);
  const MembershipCertificate cert = lp_membership(chsh_point(), vs, catalog);
  ASSERT_EQ(cert.verdict, Verdict::outside);
  ASSERT_TRUE(cert.separating.has_value());
  EXPECT_TRUE(cert.separating_from_catalog);
  EXPECT_TRUE(find_facet(std::vector<Facet>{*cert.separating}, clauser_horne_facet(2)).has_value());
  EXPECT_NEAR(cert.margin, (std::sqrt(2.0) - 1.0) / 2.0, 1e-9);
}

TEST(Membership, SeparatorWithoutCatalogIsExactlyValid) {
  const VertexSet vs = classical_vertices(2);
  const MembershipCertificate cert = lp_membership(chsh_point(), vs);
  ASSERT_EQ(cert.verdict, Verdict::outside);
  ASSERT_TRUE(cert.separating.has_value());
  EXPECT_FALSE(cert.separating_from_catalog);
  for (const auto& v : vs.vertices) EXPECT_LE(cert.separating->slack(v), 0);
  EXPECT_GT(evaluate_functional(*cert.separating, chsh_point()), 1e-9);
}

TEST(Membership, QuantumClosureContainsChshPoint) {
  EXPECT_EQ(lp_membership(chsh_point(), q_closure_vertices(2)).verdict, Verdict::inside);
}

TEST(NearestPoint, MatchesProjectedGradientOracle) {
  std::mt19937_64 rng(4);
  for (int n = 1; n <= 2; ++n) {
    const VertexSet vs = classical_vertices(n);
    const RealMatrix v = vertex_matrix(vs);
    for (int trial = 0; trial < 15; ++trial) {
      const BehaviorMatrix b = random_box_point(n, rng);
      const NearestPoint np = nearest_point(b, vs);
      const auto ref = oracle::projected_gradient_distance(v, b.free_vector());
      EXPECT_NEAR(np.distance, ref.distance, 1e-6);
      EXPECT_LE(np.kkt_residual, 1e-10);
      EXPECT_NEAR(np.distance, (np.point.free_vector() - b.free_vector()).norm(), 1e-12);
    }
  }
}

TEST(NearestPoint, ChshDistanceHasClosedForm) {
  const VertexSet vs = classical_vertices(2);
  const double expect = (std::sqrt(2.0) - 1.0) / (2.0 * std::sqrt(6.0));
  EXPECT_NEAR(distance(chsh_point(), vs), expect, 1e-9);
}

TEST(NearestPoint, NormOrderingAndInsidePoints) {
  std::mt19937_64 rng(12);
  const VertexSet vs = classical_vertices(2);
  for (int trial = 0; trial < 10; ++trial) {
    const BehaviorMatrix b = random_box_point(2, rng);
    const double l1 = distance(b, vs, Norm::l1), l2 = distance(b, vs, Norm::l2), li = distance(b, vs, Norm::linf);
    EXPECT_LE(li, l2 + 1e-9);
    EXPECT_LE(l2, l1 + 1e-9);
    const NearestPoint p1 = nearest_point(b, vs, Norm::l1);
    EXPECT_NEAR((p1.point.free_vector() - b.free_vector()).lpNorm<1>(), l1, 1e-8);
  }
  EXPECT_NEAR(distance(vertex_point(vs, 3), vs, Norm::l1), 0.0, 1e-12);
  EXPECT_NEAR(distance(vertex_point(vs, 3), vs, Norm::linf), 0.0, 1e-12);
}
