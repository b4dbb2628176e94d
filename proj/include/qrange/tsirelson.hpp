#pragma once

// Correlation matrices s_ij = <A_i (x) B_j> of +-1 observables, their affine
// correspondence with behaviors, PSD-completion membership and explicit
// Clifford-algebra realizations from unit vectors.

#include "qrange/qcore.hpp"

#include <optional>
#include <vector>

namespace qrange {

/// n x n matrix with |s_ij| <= 1 + 1e-9.
class SignedCorrelationMatrix {
 public:
  explicit SignedCorrelationMatrix(RealMatrix s);
  int n() const { return static_cast<int>(s_.rows()); }
  double operator()(int i, int j) const { return s_(i, j); }
  const RealMatrix& matrix() const { return s_; }

 private:
  RealMatrix s_;
};

/// Unit vectors x_1..x_n and y_1..y_n of a common dimension.
class VectorRepresentation {
 public:
  VectorRepresentation(std::vector<RealVector> x, std::vector<RealVector> y);
  const std::vector<RealVector>& x() const { return x_; }
  const std::vector<RealVector>& y() const { return y_; }
  int n() const { return static_cast<int>(x_.size()); }
  Index ambient_dim() const { return x_.front().size(); }
  /// Matrix of inner products x_i . y_j.
  RealMatrix correlations() const;

 private:
  std::vector<RealVector> x_;
  std::vector<RealVector> y_;
};

struct CliffordRealization {
  Index dim = 0;                   // 2^m
  int configuration_rank = 0;      // rank of span{x_i, y_j}
  std::vector<ComplexMatrix> gamma;  // 2m Hermitian anticommuting generators
  std::vector<ComplexMatrix> a;    // A_i = sum_k x_ik gamma_k
  std::vector<ComplexMatrix> b;    // B_j = sum_k y_jk gamma_k^T
  ProjectionFamily e;              // (I + A_i) / 2
  ProjectionFamily f;              // (I + B_j) / 2
  PureState state = PureState::from_schmidt({1.0});  // sum_i |ii> / sqrt(dim)

  /// <Phi| A_i (x) B_j |Phi>.
  RealMatrix correlations() const;
  BehaviorMatrix behavior() const;
};

/// s_ij = 4 p_ij - 2 p_i0 - 2 p_0j + 1.
SignedCorrelationMatrix bell_to_tsirelson(const BehaviorMatrix& b);

/// p_ij = (s_ij + 1) / 4 with all marginals 1/2.
BehaviorMatrix tsirelson_to_bell0(const SignedCorrelationMatrix& s);

struct GramOptions {
  long max_iterations = 100000;
  double member_residual = 1e-7;   // constraint residual accepted as member
  double infeasible_gap = 1e-6;    // stabilized gap reported as infeasible
  double target_residual = 1e-13;  // early exit once this accurate
  long stabilization_window = 1000;
  double stabilization_relative = 1e-4;
};

struct GramResult {
  bool member = false;
  std::optional<VectorRepresentation> vectors;  // member only, in R^(2n)
  double residual = 0.0;  // max |G_ij - target| over fixed entries of the PSD iterate
  double gap = 0.0;       // Frobenius distance between the two alternating sets
  double reconstruction_residual = 0.0;  // max |x_i . y_j - s_ij| (member only)
  long iterations = 0;
};

/// Decides whether the 2n x 2n partial Gram matrix [[1, s], [s^T, 1]]
/// (diagonal blocks free off the diagonal) has a PSD completion, by
/// Dykstra's alternating projections between the PSD cone and the affine
/// set of matrices matching the fixed entries. Throws Undecided when the
/// iteration cap is reached inside the ambiguity band.
GramResult gram_feasible(const SignedCorrelationMatrix& s, const GramOptions& options = {});

/// Unit vectors in R^(2n) with p_ij = (x_i . y_j + 1) / 4. Requires all
/// marginals equal to 1/2 within 1e-9 (std::invalid_argument otherwise);
/// throws Infeasible when the point has no such vectors.
VectorRepresentation extract_vectors(const BehaviorMatrix& b, const GramOptions& options = {});

/// gamma_{2k-1} = Z^(k-1) (x) X (x) I^(m-k), gamma_{2k} = Z^(k-1) (x) Y (x) I^(m-k).
std::vector<ComplexMatrix> clifford_generators(int m);

CliffordRealization clifford_realize(const VectorRepresentation& v);

}  // namespace qrange
