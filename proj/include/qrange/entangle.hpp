#pragma once

// Behaviors reachable from a fixed pure state as the measurement projections
// vary, and how far they get from the classical polytope.

#include "qrange/geometry.hpp"
#include "qrange/qcore.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qrange {

struct TrajectoryPoint {
  BehaviorMatrix behavior;
  PureState state;
  ProjectionFamily e;
  ProjectionFamily f;
  Index dim = 0;
  std::uint64_t seed = 0;
  std::string provenance;
};

/// sum_i c_i |i>|i> in C^dim (x) C^dim from the Schmidt data of w.
PureState schmidt_embedding(const PureState& w, Index dim);

/// Random behaviors of w embedded in C^dim (x) C^dim. Every projection gets a
/// rank drawn uniformly from 1..dim-1. Point k depends only on (seed, k).
/// Requires dim >= max(2, schmidt rank).
std::vector<TrajectoryPoint> trajectory_sample(const PureState& w, int n, Index dim, std::size_t count,
                                               std::uint64_t seed);

/// Rank-one settings in the span of the two leading Schmidt pairs that violate
/// the Clauser-Horne inequality whenever w is entangled: with (c1, c2) the
/// leading coefficients renormalized within that block and tan(mu) = 2 c1 c2,
/// A1 = Z, A2 = X, B1,2 = cos(mu) Z +- sin(mu) X, E = (I + A) / 2 on the block
/// and 0 elsewhere. Projections beyond the second are zero. Throws
/// std::invalid_argument for product states.
TrajectoryPoint gisin_peres_settings(const PureState& w, int n = 2);

inline constexpr int kMaxEntanglementN = 4;

struct EntanglementConfig {
  int restarts = 8;
  long max_iterations = 2000;  // Nelder-Mead iterations per restart
  std::uint64_t seed = 0;
  Index dim = 0;               // 0: max(2, schmidt rank)
  int threads = 1;
};

struct EntanglementReport {
  double value = 0.0;
  bool lower_bound = true;  // the supremum is approximated from below
  TrajectoryPoint best;
  NearestPoint nearest;     // nearest classical behavior to best.behavior
  Norm norm = Norm::l2;
  int best_restart = 0;
  std::vector<double> restart_values;
  long iterations = 0;
  std::uint64_t seed = 0;
};

/// Largest distance from c(n) found over the behaviors of w. Restart 0 starts
/// from the Gisin-Peres settings when w is entangled; every other restart k
/// starts from random projections seeded by (seed, k). Deterministic for a
/// fixed config regardless of thread count.
EntanglementReport entanglement_measure(const PureState& w, int n, Norm norm = Norm::l2,
                                        const EntanglementConfig& config = {});

enum class Majorization { yes, no, incomparable };

std::string_view to_string(Majorization m);

/// Compares the squared Schmidt coefficients of c and d. yes: c majorizes d;
/// no: d majorizes c strictly; incomparable otherwise. Partial sums are
/// compared within 1e-12. Shorter lists are padded with zeros.
Majorization majorizes(std::span<const double> c, std::span<const double> d);

struct ProbeReport {
  std::vector<double> values;
  std::vector<std::vector<Majorization>> relation;  // relation[i][j] = majorizes(c_i, c_j)
  /// consistent[i]: for every j with c_i majorizing c_j, value_i <= value_j + slack.
  std::vector<bool> consistent;
  bool all_consistent = true;
};

inline constexpr double kProbeSlack = 1e-6;

/// Tabulates the entanglement measure against the majorization order.
ProbeReport monotonicity_probe(std::span<const PureState> states, int n, Norm norm = Norm::l2,
                               const EntanglementConfig& config = {});

}  // namespace qrange
