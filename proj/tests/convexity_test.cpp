#include "qrange/convexity.hpp"
#include "qrange/error.hpp"

#include "generators.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace qrange;

TEST(MixRepresentations, BehaviorIsConvexCombination) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + trial % 3;
    const auto a = gen::random_representation(1 + trial % 3, 2, n, rng);
    const auto b = gen::random_representation(2, 1 + trial % 2, n, rng);
    const double lambda = u(rng);
    const RealMatrix expect = lambda * a.behavior().matrix() + (1.0 - lambda) * b.behavior().matrix();
    const QuantumRepresentation mixed = mix_representations(a, b, lambda);
    EXPECT_LE((mixed.behavior().matrix() - expect).cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_EQ(mixed.state().dim_left(), a.state().dim_left() + b.state().dim_left());
  }
}

TEST(MixRepresentations, EndpointsReproduceInputs) {
  std::mt19937_64 rng(6);
  const auto a = gen::random_representation(2, 2, 2, rng);
  const auto b = gen::random_representation(3, 2, 2, rng);
  EXPECT_LE((mix_representations(a, b, 1.0).behavior().matrix() - a.behavior().matrix()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LE((mix_representations(a, b, 0.0).behavior().matrix() - b.behavior().matrix()).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_THROW(mix_representations(a, b, 1.5), std::invalid_argument);
}

TEST(EffectRepresentation, RejectsNonEffects) {
  ComplexMatrix bad = ComplexMatrix::Identity(2, 2) * 1.5;
  EXPECT_FALSE(EffectRepresentation::is_effect(bad));
  EXPECT_THROW(EffectRepresentation(MixedState::pure(PureState::from_schmidt({1.0, 0.0})), {bad},
                                    {ComplexMatrix::Identity(2, 2)}),
               std::invalid_argument);
}

TEST(EffectPeeling, ReconstructsBehaviorWithConvexWeights) {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 40; ++trial) {
    const auto rep = gen::random_effect_representation(1 + trial % 3, 1 + (trial / 3) % 3, 1 + trial % 2, rng);
    const auto parts = effect_to_projection_mixture(rep);
    double total = 0.0;
    for (const auto& p : parts) {
      EXPECT_GE(p.weight, 0.0);
      total += p.weight;
    }
    EXPECT_NEAR(total, 1.0, 1e-12);
    EXPECT_LE((gen::mixture_behavior(parts) - rep.behavior().matrix()).cwiseAbs().maxCoeff(), 1e-12);
  }
}

TEST(EffectPeeling, ProjectionsPassThroughAsSingleTerm) {
  const double r = 1.0 / std::sqrt(2.0);
  ComplexMatrix p = ComplexMatrix::Zero(2, 2);
  p(0, 0) = 1.0;
  const EffectRepresentation rep(MixedState::pure(PureState::from_schmidt({r, r})), {p}, {p});
  const auto parts = effect_to_projection_mixture(rep);
  ASSERT_EQ(parts.size(), 1u);
  EXPECT_NEAR(parts[0].weight, 1.0, 1e-15);
}

TEST(AverageWitness, ReproducesMeanBehavior) {
  std::mt19937_64 rng(9);
  for (int k = 2; k <= 3; ++k)
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<QuantumRepresentation> reps;
      RealMatrix mean = RealMatrix::Zero(3, 3);
      for (int r = 0; r < k; ++r) {
        reps.push_back(gen::random_representation(2, 2, 2, rng));
        mean += reps.back().behavior().matrix() / double(k);
      }
      const QuantumRepresentation avg = average_witness(reps);
      EXPECT_LE((avg.behavior().matrix() - mean).cwiseAbs().maxCoeff(), 1e-10);
    }
}

TEST(AverageWitness, EnforcesSizeCap) {
  std::mt19937_64 rng(10);
  std::vector<QuantumRepresentation> reps;
  for (int r = 0; r < 5; ++r) reps.push_back(gen::random_representation(4, 4, 1, rng));
  EXPECT_THROW(average_witness(reps), SizeCapExceeded);
}
