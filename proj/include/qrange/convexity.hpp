#pragma once

// Constructive witnesses for the convex structure of the quantum range:
// mixing two representations on a direct sum, peeling effects into
// mixtures of projection representations, and K-fold tensor averaging.

#include "qrange/qcore.hpp"

#include <span>
#include <vector>

namespace qrange {

/// State W with projection families E_1..E_n, F_1..F_n (E_0 = F_0 = I implied).
class QuantumRepresentation {
 public:
  QuantumRepresentation(MixedState state, ProjectionFamily e, ProjectionFamily f);

  const MixedState& state() const { return state_; }
  const ProjectionFamily& e() const { return e_; }
  const ProjectionFamily& f() const { return f_; }
  int n() const { return static_cast<int>(e_.size()); }
  BehaviorMatrix behavior() const { return evaluate_behavior(state_, e_, f_); }

 private:
  MixedState state_;
  ProjectionFamily e_;
  ProjectionFamily f_;
};

/// Same data with effects (Hermitian, spectrum in [0,1]) instead of projections.
class EffectRepresentation {
 public:
  EffectRepresentation(MixedState state, std::vector<ComplexMatrix> a, std::vector<ComplexMatrix> b);

  const MixedState& state() const { return state_; }
  const std::vector<ComplexMatrix>& a() const { return a_; }
  const std::vector<ComplexMatrix>& b() const { return b_; }
  int n() const { return static_cast<int>(a_.size()); }
  /// q_ij = sum_k w_k <Phi_k| A_i (x) B_j |Phi_k>, A_0 = B_0 = I.
  BehaviorMatrix behavior() const;

  static bool is_effect(const ComplexMatrix& m);

 private:
  MixedState state_;
  std::vector<ComplexMatrix> a_;
  std::vector<ComplexMatrix> b_;
};

struct WeightedRepresentation {
  double weight;
  QuantumRepresentation rep;
};

/// Representation on (H + H') (x) (H + H') whose behavior is
/// lambda * p_A + (1 - lambda) * p_B. Terms of zero weight are dropped.
QuantumRepresentation mix_representations(const QuantumRepresentation& rep_a,
                                          const QuantumRepresentation& rep_b, double lambda);

/// Spectral peeling of every effect, A_1..A_n then B_1..B_n. Each effect
/// sum_k eta_k E^k (eta_1 > ... > eta_l > 0) is replaced by the cumulative
/// projections E^1 + ... + E^k with weights eta_k - eta_{k+1}, plus the zero
/// projection with weight 1 - eta_1. Requires a pure state.
std::vector<WeightedRepresentation> effect_to_projection_mixture(const EffectRepresentation& rep);

inline constexpr Index kAverageWitnessCap = 4096;

/// Representation whose behavior is the arithmetic mean of the inputs'.
///
/// Factor r is embedded as H_r + C|w_r>, with every projection extended by
/// the identity on |w_r>. Term r of the averaged state carries its own state
/// in slot r and |w_s>|w_s> in every other slot s, where all projections act
/// as the identity. Throws SizeCapExceeded when K times the product of the
/// extended dimensions exceeds kAverageWitnessCap on either side.
QuantumRepresentation average_witness(std::span<const QuantumRepresentation> reps);

}  // namespace qrange
