#pragma once

// Membership, separation and distance oracles for behaviors against the
// vertex-described polytopes of polytope.hpp. Behaviors are compared in the
// free coordinates; p_00 is fixed at 1 and never contributes.

#include "qrange/polytope.hpp"
#include "qrange/qcore.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <utility>
#include <vector>

namespace qrange {

enum class Norm { l1, l2, linf };

std::string_view to_string(Norm norm);
/// Accepts "l1", "l2", "linf". Throws std::invalid_argument otherwise.
Norm parse_norm(std::string_view text);

enum class Verdict { inside, outside };

struct VertexWeight {
  std::size_t vertex;  // index into VertexSet::vertices
  double weight;
};

struct MembershipCertificate {
  Verdict verdict = Verdict::inside;
  std::vector<VertexWeight> weights;  // inside: convex weights
  std::optional<Facet> separating;    // outside: violated valid inequality
  double margin = 0.0;                // a . x - b of the separating inequality
  bool separating_from_catalog = false;
  /// inside: ||sum w_v v - x||_inf; outside: 0.
  double residual = 0.0;
};

inline constexpr double kMembershipTolerance = 1e-9;
inline constexpr std::size_t kMaxOracleVertices = 65536;

RealMatrix vertex_matrix(const VertexSet& vs);  // dim x |V|, one column per vertex

/// Decides b in conv(vs). Outside verdicts carry the most violated catalog
/// facet when a catalog is supplied, otherwise an integer inequality
/// recovered from the LP's Farkas multipliers and verified exactly against
/// every vertex. Throws Undecided when neither certificate can be produced
/// (points within the tolerance band of the boundary).
MembershipCertificate lp_membership(const BehaviorMatrix& b, const VertexSet& vs,
                                    std::span<const Facet> catalog = {});

struct NearestPoint {
  BehaviorMatrix point;
  double distance;
  std::vector<VertexWeight> weights;
  /// max(0, ||x||^2 - min_v x.(v - b)) for x = q - b; zero at the optimum.
  double kkt_residual = 0.0;
  long iterations = 0;
};

/// Euclidean projection onto conv(vs) by Wolfe's minimum-norm-point method.
NearestPoint nearest_point(const BehaviorMatrix& b, const VertexSet& vs);

/// Nearest point in the given norm. L2 uses nearest_point; L1 and Linf
/// solve linear programs over (weights, slacks).
NearestPoint nearest_point(const BehaviorMatrix& b, const VertexSet& vs, Norm norm);

double distance(const BehaviorMatrix& b, const VertexSet& vs, Norm norm = Norm::l2);

/// a . b_free - bound; positive means the inequality is violated.
double evaluate_functional(const Facet& f, const BehaviorMatrix& b);

}  // namespace qrange
