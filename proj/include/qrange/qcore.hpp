#pragma once

// Dense complex linear algebra for bipartite quantum systems: states in
// Schmidt form, projections, and the (n+1)x(n+1) behavior matrices
// p_ij = tr[W (E_i (x) F_j)] with E_0 = F_0 = I.

#include <Eigen/Dense>

#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace qrange {

using cplx = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

namespace tol {
inline constexpr double kOperator = 1e-10;     // hermiticity / idempotence
inline constexpr double kNormalization = 1e-12;
inline constexpr double kSchmidtDrop = 1e-12;  // smaller c_i are set to 0
inline constexpr double kMeetNullSpace = 1e-9;
inline constexpr double kProbability = 1e-10;
}  // namespace tol

bool all_finite(const ComplexMatrix& m);
double max_abs(const ComplexMatrix& m);

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);
ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b);

/// Orthogonal projection P = P^dagger = P^2 on a finite-dimensional space.
class Projection {
 public:
  /// Throws std::invalid_argument unless the matrix is square, finite,
  /// Hermitian and idempotent within tol::kOperator.
  explicit Projection(ComplexMatrix m);

  static Projection identity(Index dim);
  static Projection zero(Index dim);
  /// P = V V^dagger for a matrix with orthonormal columns (checked).
  static Projection onto_columns(const ComplexMatrix& frame);

  const ComplexMatrix& matrix() const { return m_; }
  Index dim() const { return m_.rows(); }
  double trace() const { return m_.trace().real(); }

  static bool is_projection(const ComplexMatrix& m, double tolerance = tol::kOperator);

 private:
  ComplexMatrix m_;
};

using ProjectionFamily = std::vector<Projection>;

/// Bipartite pure state sum_i c_i |alpha_i>|beta_i> in Schmidt form.
/// Coefficients are real, non-negative and descending; phases live in the
/// right basis.
class PureState {
 public:
  /// basis_left is dim_left x k, basis_right is dim_right x k with
  /// k = schmidt.size(); columns orthonormal. Throws std::invalid_argument.
  PureState(std::vector<double> schmidt, ComplexMatrix basis_left, ComplexMatrix basis_right);

  /// State sum_i c_i |i>|i> on C^m (x) C^m, m = c.size().
  static PureState from_schmidt(std::vector<double> c);
  /// Same Schmidt data embedded in C^dim (x) C^dim.
  static PureState from_schmidt(std::vector<double> c, Index dim);
  static PureState product(const ComplexVector& left, const ComplexVector& right);

  Index dim_left() const { return left_.rows(); }
  Index dim_right() const { return right_.rows(); }
  const std::vector<double>& schmidt() const { return schmidt_; }
  const ComplexMatrix& basis_left() const { return left_; }
  const ComplexMatrix& basis_right() const { return right_; }
  std::size_t schmidt_rank() const;
  bool is_product() const { return schmidt_rank() <= 1; }

  /// Amplitudes indexed a * dim_right + b.
  ComplexVector vector() const;
  /// Coefficient matrix M with M(a, b) = <a b | Phi>.
  ComplexMatrix coefficients() const;

 private:
  std::vector<double> schmidt_;
  ComplexMatrix left_;
  ComplexMatrix right_;
};

/// W = sum_k weight_k |Phi_k><Phi_k|.
class MixedState {
 public:
  struct Term {
    double weight;
    PureState state;
  };

  explicit MixedState(std::vector<Term> terms);
  static MixedState pure(PureState state);

  const std::vector<Term>& terms() const { return terms_; }
  bool is_pure() const { return terms_.size() == 1; }
  Index dim_left() const { return terms_.front().state.dim_left(); }
  Index dim_right() const { return terms_.front().state.dim_right(); }

 private:
  std::vector<Term> terms_;
};

/// The matrix (p_ij), 0 <= i, j <= n, with p_00 = 1. Row 0 holds the right
/// marginals p_0j, column 0 the left marginals p_i0.
class BehaviorMatrix {
 public:
  /// Throws std::invalid_argument unless p is square of size >= 2,
  /// p(0,0) == 1 exactly and all entries lie in [0,1] within tol::kProbability.
  explicit BehaviorMatrix(RealMatrix p);

  int n() const { return static_cast<int>(p_.rows()) - 1; }
  double operator()(int i, int j) const { return p_(i, j); }
  const RealMatrix& matrix() const { return p_; }

  /// Free coordinates (p_10..p_n0, p_01..p_0n, p_11, p_12, ..., p_nn).
  RealVector free_vector() const;
  static BehaviorMatrix from_free(int n, const RealVector& v);

  /// p_ij <= min(p_i0, p_0j) + tol and p_ij >= p_i0 + p_0j - 1 - tol.
  bool quantum_consistent(double tolerance = tol::kProbability) const;

 private:
  RealMatrix p_;
};

inline int free_dimension(int n) { return n * n + 2 * n; }

PureState schmidt_decompose(const ComplexVector& vector, Index dim_left, Index dim_right);

/// <Phi| A (x) B |Phi>; A acts on the left factor, B on the right.
cplx expectation(const PureState& state, const ComplexMatrix& a, const ComplexMatrix& b);

BehaviorMatrix evaluate_behavior(const MixedState& state, const ProjectionFamily& e,
                                 const ProjectionFamily& f);

/// tr(C E C F^T) with C = diag(c) and E, F written in the state's Schmidt
/// bases; for Hermitian F, F^T is the entrywise conjugate F*.
double diag_form_evaluate(std::span<const double> c, const ComplexMatrix& e, const ComplexMatrix& f);

/// Projection onto range(E) intersected with range(F).
Projection meet_projection(const Projection& e, const Projection& f);

/// dim x rank matrix with Haar-distributed orthonormal columns.
ComplexMatrix random_frame(Index dim, Index rank, std::mt19937_64& rng);
Projection random_projection(Index dim, Index rank, std::mt19937_64& rng);
Projection random_projection(Index dim, Index rank, std::uint64_t seed);

/// Haar-random unit vector.
ComplexVector random_unit_vector(Index dim, std::mt19937_64& rng);

}  // namespace qrange
