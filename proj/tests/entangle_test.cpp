#include "qrange/entangle.hpp"
#include "qrange/geometry.hpp"
#include "qrange/polytope.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace qrange;

namespace {

const double kR = 1.0 / std::sqrt(2.0);

PureState angle_state(double theta) {
  return PureState::from_schmidt({std::cos(theta), std::sin(theta)});
}

}  // namespace

TEST(Trajectory, ProductStatesStayClassical) {
  const VertexSet vs = classical_vertices(2);
  const auto catalog = enumerate_facets(vs);
  const auto points = trajectory_sample(PureState::from_schmidt({1.0, 0.0}), 2, 3, 50, 17);
  for (const auto& p : points) EXPECT_EQ(lp_membership(p.behavior, vs, catalog).verdict, Verdict::inside);
}

TEST(Trajectory, DeterministicPerSeed) {
  const auto a = trajectory_sample(PureState::from_schmidt({kR, kR}), 2, 2, 5, 3);
  const auto b = trajectory_sample(PureState::from_schmidt({kR, kR}), 2, 2, 5, 3);
  for (std::size_t k = 0; k < a.size(); ++k) EXPECT_EQ(a[k].behavior.matrix(), b[k].behavior.matrix());
}

TEST(Trajectory, RejectsSmallDimensions) {
  EXPECT_THROW(trajectory_sample(PureState::from_schmidt({kR, kR}), 2, 1, 1, 0), std::invalid_argument);
  const PureState three = PureState::from_schmidt({0.8, 0.48, 0.36});
  EXPECT_THROW(trajectory_sample(three, 2, 2, 1, 0), std::invalid_argument);
}

TEST(Trajectory, BellStateEventuallyLeavesClassicalPolytope) {
  const auto points = trajectory_sample(PureState::from_schmidt({kR, kR}), 2, 2, 10000, 1);
  const auto catalog = enumerate_facets(classical_vertices(2));
  bool outside = false;
  for (const auto& p : points)
    for (const Facet& f : catalog) outside = outside || evaluate_functional(f, p.behavior) > 1e-9;
  EXPECT_TRUE(outside);
}

TEST(GisinPeres, MatchesClosedFormOnAngleGrid) {
  const Facet ch = clauser_horne_facet(2);
  for (int k = 1; k <= 20; ++k) {
    const double theta = (M_PI / 4.0) * k / 20.0;
    const PureState w = angle_state(theta);
    const TrajectoryPoint p = gisin_peres_settings(w);
    const double margin = evaluate_functional(ch, p.behavior);
    EXPECT_NEAR(margin, oracle::ch_closed_form(std::cos(theta), std::sin(theta)), 1e-9);
    EXPECT_GT(margin, 0.0);
  }
}

TEST(GisinPeres, HigherRankAndLargerNStillViolate) {
  const PureState w = PureState::from_schmidt({0.8, 0.48, 0.36});
  const TrajectoryPoint p = gisin_peres_settings(w, 3);
  EXPECT_GT(evaluate_functional(clauser_horne_facet(3), p.behavior), 0.0);
  EXPECT_THROW(gisin_peres_settings(PureState::from_schmidt({1.0, 0.0})), std::invalid_argument);
}

TEST(GisinPeres, RotatedBasesGiveSameMargin) {
  std::mt19937_64 rng(5);
  const ComplexMatrix u = oracle::random_unitary(3, rng), v = oracle::random_unitary(3, rng);
  const PureState w({0.9, std::sqrt(1.0 - 0.81), 0.0}, u, v);
  const double margin = evaluate_functional(clauser_horne_facet(2), gisin_peres_settings(w).behavior);
  EXPECT_NEAR(margin, oracle::ch_closed_form(0.9, std::sqrt(1.0 - 0.81)), 1e-9);
}

TEST(Entanglement, ProductStateIsZero) {
  EntanglementConfig cfg;
  cfg.restarts = 3;
  cfg.max_iterations = 300;
  EXPECT_LE(entanglement_measure(PureState::from_schmidt({1.0, 0.0}), 2, Norm::l2, cfg).value, 1e-6);
}

TEST(Entanglement, BellStateReachesChshDistance) {
  EntanglementConfig cfg;
  cfg.restarts = 2;
  cfg.max_iterations = 500;
  const EntanglementReport r = entanglement_measure(PureState::from_schmidt({kR, kR}), 2, Norm::l2, cfg);
  EXPECT_GE(r.value, (std::sqrt(2.0) - 1.0) / (2.0 * std::sqrt(6.0)) - 1e-6);
  EXPECT_TRUE(r.lower_bound);
  EXPECT_NEAR(r.value, distance(r.best.behavior, classical_vertices(2)), 1e-12);
}

TEST(Entanglement, ReproducibleAcrossThreadCounts) {
  EntanglementConfig cfg;
  cfg.restarts = 4;
  cfg.max_iterations = 200;
  cfg.seed = 99;
  const PureState w = angle_state(0.4);
  const EntanglementReport a = entanglement_measure(w, 2, Norm::l2, cfg);
  cfg.threads = 3;
  const EntanglementReport b = entanglement_measure(w, 2, Norm::l2, cfg);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.restart_values, b.restart_values);
}

TEST(Entanglement, MoreRestartsNeverDecrease) {
  EntanglementConfig cfg;
  cfg.max_iterations = 200;
  cfg.seed = 5;
  const PureState w = angle_state(0.3);
  cfg.restarts = 2;
  const double two = entanglement_measure(w, 2, Norm::l1, cfg).value;
  cfg.restarts = 4;
  EXPECT_GE(entanglement_measure(w, 2, Norm::l1, cfg).value, two);
}

TEST(Entanglement, RejectsUnsupportedN) {
  EXPECT_THROW(entanglement_measure(PureState::from_schmidt({kR, kR}), 1), std::invalid_argument);
  EXPECT_THROW(entanglement_measure(PureState::from_schmidt({kR, kR}), kMaxEntanglementN + 1), std::invalid_argument);
}

TEST(Majorization, ComparesSquaredCoefficients) {
  const std::vector<double> product{1.0, 0.0}, bell{kR, kR};
  EXPECT_EQ(majorizes(product, bell), Majorization::yes);
  EXPECT_EQ(majorizes(bell, product), Majorization::no);
  EXPECT_EQ(majorizes(bell, bell), Majorization::yes);
  const std::vector<double> a{std::sqrt(0.6), std::sqrt(0.2), std::sqrt(0.2)};
  const std::vector<double> b{std::sqrt(0.5), std::sqrt(0.4), std::sqrt(0.1)};
  EXPECT_EQ(majorizes(a, b), Majorization::incomparable);
  const std::vector<double> unnormalized{0.5, 0.5};
  EXPECT_THROW(majorizes(unnormalized, bell), std::invalid_argument);
}

TEST(MonotonicityProbe, ProductVersusBellIsConsistent) {
  EntanglementConfig cfg;
  cfg.restarts = 2;
  cfg.max_iterations = 300;
  const std::vector<PureState> states{PureState::from_schmidt({1.0, 0.0}), PureState::from_schmidt({kR, kR})};
  const ProbeReport r = monotonicity_probe(states, 2, Norm::l2, cfg);
  EXPECT_EQ(r.relation[0][1], Majorization::yes);
  EXPECT_TRUE(r.all_consistent);
  EXPECT_LT(r.values[0], r.values[1]);
}
