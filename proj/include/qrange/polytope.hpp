#pragma once

// Exact vertex and facet descriptions of the classical correlation polytope
// c(n) and of the closure of the quantum-logical range q(n).
//
// Points are written in the free coordinates
//   (p_10..p_n0, p_01..p_0n, p_11, p_12, ..., p_nn)
// so every polytope here lives in R^(n^2 + 2n). Facets are a . x <= b with
// coprime integer data. No floating point is used in this module.

#include <boost/multiprecision/cpp_int.hpp>

#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qrange {

using BigInt = boost::multiprecision::cpp_int;
using BigRational = boost::multiprecision::cpp_rational;

enum class PolytopeKind { classical, quantum_closure };

std::string coordinate_order(int n);

struct VertexSet {
  PolytopeKind kind = PolytopeKind::classical;
  int n = 0;
  int dim = 0;
  std::vector<std::vector<int>> vertices;  // 0/1 entries, sorted lexicographically
};

struct Facet {
  std::vector<BigInt> coeffs;
  BigInt bound;

  /// a . v - b for an integer point; positive means violated.
  BigInt slack(std::span<const int> point) const;

  friend bool operator==(const Facet&, const Facet&) = default;
  friend std::strong_ordering operator<=>(const Facet& x, const Facet& y);
};

enum class Sense { less_equal, greater_equal };

inline constexpr int kMaxClassicalN = 8;
inline constexpr int kMaxQuantumClosureN = 4;

/// The 2^(2n) deterministic points u_i0 = e_i, u_0j = d_j, u_ij = e_i d_j.
VertexSet classical_vertices(int n);

/// All 0/1 points with u_ij <= u_i0 and u_ij <= u_0j.
VertexSet q_closure_vertices(int n);

/// Complete facet list of conv(vertices), sorted, by the double description
/// method on the homogenized cone {(1, v)}. Throws std::invalid_argument if
/// the vertices do not affinely span R^dim.
std::vector<Facet> enumerate_facets(const VertexSet& vs);

/// Clears denominators, divides out the gcd and converts to a <= b.
/// Throws std::invalid_argument for an all-zero coefficient vector.
Facet canonicalize_facet(std::span<const BigRational> coeffs, const BigRational& bound,
                         Sense sense = Sense::less_equal);
Facet canonicalize_facet(std::span<const BigInt> coeffs, const BigInt& bound,
                         Sense sense = Sense::less_equal);

/// Every vertex satisfies the inequality and the tight vertices affinely
/// span a hyperplane.
bool is_facet_of(const Facet& facet, const VertexSet& vs);

/// Coordinate permutations generated by relabeling 1..n on each side and by
/// swapping sides; perm[k] is the image of coordinate k.
std::vector<std::vector<int>> symmetry_group(int n);
Facet apply_symmetry(const Facet& facet, std::span<const int> perm);

/// Looks up `pattern` in `facets` up to the relabel/swap symmetry group.
/// Returns the matching catalog entry.
std::optional<Facet> find_facet(std::span<const Facet> facets, const Facet& pattern);

/// Zero-pads a facet written for n_from to the coordinates of n_to >= n_from.
Facet lift_facet(const Facet& facet, int n_from, int n_to);

/// p_11 + p_12 + p_21 - p_22 - p_10 - p_01 <= 0, lifted to n >= 2.
Facet clauser_horne_facet(int n);

/// Index of p_ij in the free coordinates (i, j not both 0).
int free_index(int n, int i, int j);

}  // namespace qrange
