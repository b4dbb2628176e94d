#include "qrange/qcore.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <unsupported/Eigen/KroneckerProduct>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace qrange {

namespace {

bool orthonormal_columns(const ComplexMatrix& b, double tolerance) {
  const ComplexMatrix gram = b.adjoint() * b;
  return max_abs(gram - ComplexMatrix::Identity(b.cols(), b.cols())) <= tolerance;
}

}  // namespace

bool all_finite(const ComplexMatrix& m) {
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b).eval();
}

ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out = ComplexMatrix::Zero(a.rows() + b.rows(), a.cols() + b.cols());
  out.topLeftCorner(a.rows(), a.cols()) = a;
  out.bottomRightCorner(b.rows(), b.cols()) = b;
  return out;
}

// ---------------------------------------------------------------- Projection

bool Projection::is_projection(const ComplexMatrix& m, double tolerance) {
  if (m.rows() != m.cols() || !all_finite(m)) return false;
  if (max_abs(m - m.adjoint()) > tolerance) return false;
  return max_abs(m * m - m) <= tolerance;
}

Projection::Projection(ComplexMatrix m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols()) throw std::invalid_argument("projection: matrix is not square");
  if (!all_finite(m_)) throw std::invalid_argument("projection: non-finite entries");
  if (max_abs(m_ - m_.adjoint()) > tol::kOperator)
    throw std::invalid_argument("projection: matrix is not Hermitian");
  if (max_abs(m_ * m_ - m_) > tol::kOperator)
    throw std::invalid_argument("projection: matrix is not idempotent");
}

Projection Projection::identity(Index dim) { return Projection(ComplexMatrix::Identity(dim, dim)); }

Projection Projection::zero(Index dim) { return Projection(ComplexMatrix::Zero(dim, dim)); }

Projection Projection::onto_columns(const ComplexMatrix& frame) {
  if (frame.cols() > 0 && !orthonormal_columns(frame, tol::kOperator))
    throw std::invalid_argument("projection: frame columns are not orthonormal");
  return Projection(frame * frame.adjoint());
}

// ----------------------------------------------------------------- PureState

PureState::PureState(std::vector<double> schmidt, ComplexMatrix basis_left,
                     ComplexMatrix basis_right)
    : schmidt_(std::move(schmidt)), left_(std::move(basis_left)), right_(std::move(basis_right)) {
  const auto k = static_cast<Index>(schmidt_.size());
  if (k == 0) throw std::invalid_argument("pure state: empty Schmidt list");
  if (left_.cols() != k || right_.cols() != k)
    throw std::invalid_argument("pure state: basis column count differs from Schmidt length");
  if (left_.rows() < k || right_.rows() < k)
    throw std::invalid_argument("pure state: more Schmidt terms than dimensions");
  double norm2 = 0.0;
  for (std::size_t i = 0; i < schmidt_.size(); ++i) {
    const double c = schmidt_[i];
    if (!std::isfinite(c) || c < 0.0) throw std::invalid_argument("pure state: negative Schmidt coefficient");
    if (i > 0 && c > schmidt_[i - 1]) throw std::invalid_argument("pure state: Schmidt list not descending");
    norm2 += c * c;
  }
  if (std::abs(norm2 - 1.0) > tol::kNormalization)
    throw std::invalid_argument("pure state: Schmidt coefficients not normalized");
  if (!all_finite(left_) || !all_finite(right_))
    throw std::invalid_argument("pure state: non-finite basis entries");
  if (!orthonormal_columns(left_, tol::kNormalization) || !orthonormal_columns(right_, tol::kNormalization))
    throw std::invalid_argument("pure state: basis columns not orthonormal");
}

PureState PureState::from_schmidt(std::vector<double> c) {
  const auto m = static_cast<Index>(c.size());
  return from_schmidt(std::move(c), m);
}

PureState PureState::from_schmidt(std::vector<double> c, Index dim) {
  const auto m = static_cast<Index>(c.size());
  if (dim < m) throw std::invalid_argument("pure state: dimension below Schmidt length");
  const ComplexMatrix basis = ComplexMatrix::Identity(dim, m);
  return PureState(std::move(c), basis, basis);
}

PureState PureState::product(const ComplexVector& left, const ComplexVector& right) {
  const double nl = left.norm();
  const double nr = right.norm();
  if (nl == 0.0 || nr == 0.0) throw std::invalid_argument("pure state: zero factor");
  return PureState({1.0}, left / nl, right / nr);
}

std::size_t PureState::schmidt_rank() const {
  return static_cast<std::size_t>(
      std::count_if(schmidt_.begin(), schmidt_.end(), [](double c) { return c > 0.0; }));
}

ComplexMatrix PureState::coefficients() const {
  RealVector c = Eigen::Map<const RealVector>(schmidt_.data(), static_cast<Index>(schmidt_.size()));
  return left_ * c.cast<cplx>().asDiagonal() * right_.transpose();
}

ComplexVector PureState::vector() const {
  const ComplexMatrix m = coefficients();
  ComplexVector v(m.size());
  for (Index a = 0; a < m.rows(); ++a)
    for (Index b = 0; b < m.cols(); ++b) v(a * m.cols() + b) = m(a, b);
  return v;
}

// ---------------------------------------------------------------- MixedState

MixedState::MixedState(std::vector<Term> terms) : terms_(std::move(terms)) {
  if (terms_.empty()) throw std::invalid_argument("mixed state: no terms");
  double total = 0.0;
  for (const auto& t : terms_) {
    if (!std::isfinite(t.weight) || t.weight < 0.0 || t.weight > 1.0)
      throw std::invalid_argument("mixed state: weight outside [0,1]");
    if (t.state.dim_left() != dim_left() || t.state.dim_right() != dim_right())
      throw std::invalid_argument("mixed state: terms on different dimensions");
    total += t.weight;
  }
  if (std::abs(total - 1.0) > tol::kNormalization)
    throw std::invalid_argument("mixed state: weights do not sum to 1");
}

MixedState MixedState::pure(PureState state) { return MixedState({Term{1.0, std::move(state)}}); }

// ------------------------------------------------------------ BehaviorMatrix

BehaviorMatrix::BehaviorMatrix(RealMatrix p) : p_(std::move(p)) {
  if (p_.rows() != p_.cols() || p_.rows() < 2)
    throw std::invalid_argument("behavior: matrix must be square with n >= 1");
  if (p_(0, 0) != 1.0) throw std::invalid_argument("behavior: p_00 must equal 1");
  for (Index i = 0; i < p_.rows(); ++i)
    for (Index j = 0; j < p_.cols(); ++j) {
      const double v = p_(i, j);
      if (!std::isfinite(v) || v < -tol::kProbability || v > 1.0 + tol::kProbability)
        throw std::invalid_argument("behavior: entry outside [0,1]");
    }
}

RealVector BehaviorMatrix::free_vector() const {
  const int m = n();
  RealVector v(free_dimension(m));
  Index k = 0;
  for (int i = 1; i <= m; ++i) v(k++) = p_(i, 0);
  for (int j = 1; j <= m; ++j) v(k++) = p_(0, j);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) v(k++) = p_(i, j);
  return v;
}

BehaviorMatrix BehaviorMatrix::from_free(int n, const RealVector& v) {
  if (n < 1 || v.size() != free_dimension(n))
    throw std::invalid_argument("behavior: free vector has wrong length");
  RealMatrix p(n + 1, n + 1);
  p(0, 0) = 1.0;
  Index k = 0;
  for (int i = 1; i <= n; ++i) p(i, 0) = v(k++);
  for (int j = 1; j <= n; ++j) p(0, j) = v(k++);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) p(i, j) = v(k++);
  return BehaviorMatrix(std::move(p));
}

bool BehaviorMatrix::quantum_consistent(double tolerance) const {
  const int m = n();
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j) {
      const double pij = p_(i, j);
      if (pij > std::min(p_(i, 0), p_(0, j)) + tolerance) return false;
      if (pij < p_(i, 0) + p_(0, j) - 1.0 - tolerance) return false;
    }
  return true;
}

// ---------------------------------------------------------------- Operations

PureState schmidt_decompose(const ComplexVector& vector, Index dim_left, Index dim_right) {
  if (dim_left < 1 || dim_right < 1 || vector.size() != dim_left * dim_right)
    throw std::invalid_argument("schmidt_decompose: length differs from dim_left * dim_right");
  if (!all_finite(vector)) throw std::invalid_argument("schmidt_decompose: non-finite amplitudes");
  const double norm = vector.norm();
  if (std::abs(norm - 1.0) > 1e-10) throw std::invalid_argument("schmidt_decompose: vector is not unit norm");

  ComplexMatrix m(dim_left, dim_right);
  for (Index a = 0; a < dim_left; ++a)
    for (Index b = 0; b < dim_right; ++b) m(a, b) = vector(a * dim_right + b);

  // M = U S V^dagger, so Phi = sum_i s_i u_i (x) conj(v_i).
  Eigen::JacobiSVD<ComplexMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RealVector& s = svd.singularValues();
  std::vector<double> c(static_cast<std::size_t>(s.size()));
  double norm2 = 0.0;
  for (Index i = 0; i < s.size(); ++i) {
    c[static_cast<std::size_t>(i)] = s(i) < tol::kSchmidtDrop ? 0.0 : s(i);
    norm2 += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(i)];
  }
  const double scale = 1.0 / std::sqrt(norm2);
  for (double& x : c) x *= scale;
  return PureState(std::move(c), svd.matrixU(), svd.matrixV().conjugate());
}

cplx expectation(const PureState& state, const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != state.dim_left() || a.cols() != state.dim_left() || b.rows() != state.dim_right() ||
      b.cols() != state.dim_right())
    throw std::invalid_argument("expectation: operator dimensions differ from the state's");
  const ComplexMatrix m = state.coefficients();
  // <Phi|A (x) B|Phi> = tr(M^dagger A M B^T)
  const ComplexMatrix x = m.adjoint() * a * m;
  return x.cwiseProduct(b).sum();
}

BehaviorMatrix evaluate_behavior(const MixedState& state, const ProjectionFamily& e,
                                 const ProjectionFamily& f) {
  if (e.empty() || e.size() != f.size())
    throw std::invalid_argument("evaluate_behavior: families must be non-empty and of equal size");
  const Index dl = state.dim_left();
  const Index dr = state.dim_right();
  for (const auto& p : e)
    if (p.dim() != dl) throw std::invalid_argument("evaluate_behavior: left projection dimension mismatch");
  for (const auto& p : f)
    if (p.dim() != dr) throw std::invalid_argument("evaluate_behavior: right projection dimension mismatch");

  const int n = static_cast<int>(e.size());
  RealMatrix p = RealMatrix::Zero(n + 1, n + 1);
  for (const auto& term : state.terms()) {
    const ComplexMatrix m = term.state.coefficients();
    std::vector<ComplexMatrix> left(static_cast<std::size_t>(n) + 1);
    left[0] = m.adjoint() * m;
    for (int i = 1; i <= n; ++i) left[static_cast<std::size_t>(i)] = m.adjoint() * e[static_cast<std::size_t>(i) - 1].matrix() * m;
    for (int i = 0; i <= n; ++i) {
      const ComplexMatrix& x = left[static_cast<std::size_t>(i)];
      p(i, 0) += term.weight * x.trace().real();
      for (int j = 1; j <= n; ++j)
        p(i, j) += term.weight * x.cwiseProduct(f[static_cast<std::size_t>(j) - 1].matrix()).sum().real();
    }
  }
  p(0, 0) = 1.0;
  return BehaviorMatrix(std::move(p));
}

double diag_form_evaluate(std::span<const double> c, const ComplexMatrix& e, const ComplexMatrix& f) {
  const auto m = static_cast<Index>(c.size());
  if (e.rows() != m || e.cols() != m || f.rows() != m || f.cols() != m)
    throw std::invalid_argument("diag_form_evaluate: operator size differs from Schmidt length");
  cplx sum = 0.0;
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j)
      sum += c[static_cast<std::size_t>(i)] * c[static_cast<std::size_t>(j)] * e(i, j) * f(i, j);
  return sum.real();
}

Projection meet_projection(const Projection& e, const Projection& f) {
  if (e.dim() != f.dim()) throw std::invalid_argument("meet_projection: dimension mismatch");
  const Index d = e.dim();
  const ComplexMatrix k = 2.0 * ComplexMatrix::Identity(d, d) - e.matrix() - f.matrix();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(k);
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) {
    if (eig.eigenvalues()(i) < tol::kMeetNullSpace) {
      const ComplexVector v = eig.eigenvectors().col(i);
      out += v * v.adjoint();
    }
  }
  return Projection(std::move(out));
}

ComplexMatrix random_frame(Index dim, Index rank, std::mt19937_64& rng) {
  if (dim < 1 || rank < 0 || rank > dim) throw std::invalid_argument("random_frame: need 0 <= rank <= dim");
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexMatrix g(dim, rank);
  for (Index j = 0; j < rank; ++j)
    for (Index i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      g(i, j) = cplx(re, im);
    }
  if (rank == 0) return g;
  Eigen::HouseholderQR<ComplexMatrix> qr(g);
  ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, rank);
  const ComplexMatrix& r = qr.matrixQR();
  for (Index j = 0; j < rank; ++j) {
    const double a = std::abs(r(j, j));
    if (a > 0.0) q.col(j) *= r(j, j) / a;
  }
  return q;
}

Projection random_projection(Index dim, Index rank, std::mt19937_64& rng) {
  if (rank < 0 || rank > dim) throw std::invalid_argument("random_projection: rank exceeds dimension");
  if (rank == dim) return Projection::identity(dim);
  if (rank == 0) return Projection::zero(dim);
  const ComplexMatrix v = random_frame(dim, rank, rng);
  ComplexMatrix p = v * v.adjoint();
  p = 0.5 * (p + p.adjoint()).eval();
  return Projection(std::move(p));
}

Projection random_projection(Index dim, Index rank, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return random_projection(dim, rank, rng);
}

ComplexVector random_unit_vector(Index dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  ComplexVector v(dim);
  for (Index i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = cplx(re, im);
  }
  return v / v.norm();
}

}  // namespace qrange
