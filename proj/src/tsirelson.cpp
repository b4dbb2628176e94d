#include "qrange/tsirelson.hpp"

#include "qrange/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace qrange {

namespace {

constexpr double kUnitTolerance = 1e-9;
constexpr double kRankTolerance = 1e-9;

RealMatrix psd_project(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (m + m.transpose()));
  const RealVector lam = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * lam.asDiagonal() * es.eigenvectors().transpose();
}

// Fixed entries: the diagonal and the off-diagonal blocks.
RealMatrix affine_project(RealMatrix m, const RealMatrix& s) {
  const Index n = s.rows();
  m.diagonal().setOnes();
  m.topRightCorner(n, n) = s;
  m.bottomLeftCorner(n, n) = s.transpose();
  return m;
}

double fixed_residual(const RealMatrix& m, const RealMatrix& s) {
  const Index n = s.rows();
  double r = (m.diagonal().array() - 1.0).abs().maxCoeff();
  r = std::max(r, (m.topRightCorner(n, n) - s).cwiseAbs().maxCoeff());
  r = std::max(r, (m.bottomLeftCorner(n, n) - s.transpose()).cwiseAbs().maxCoeff());
  return r;
}

double fixed_gap(const RealMatrix& m, const RealMatrix& s) {
  const Index n = s.rows();
  return std::sqrt((m.diagonal().array() - 1.0).square().sum() +
                   2.0 * (m.topRightCorner(n, n) - s).squaredNorm());
}

// Rows of the returned matrix are unit vectors whose Gram matrix is g.
RealMatrix factor_gram(const RealMatrix& g) {
  Eigen::SelfAdjointEigenSolver<RealMatrix> es(0.5 * (g + g.transpose()));
  RealVector lam = es.eigenvalues();
  const double cut = 1e-12 * std::max(1.0, lam.cwiseAbs().maxCoeff());
  for (Index k = 0; k < lam.size(); ++k)
    if (lam(k) < cut) lam(k) = 0.0;
  const RealVector root = lam.cwiseSqrt();
  RealMatrix v = es.eigenvectors() * root.asDiagonal();
  for (Index i = 0; i < v.rows(); ++i) {
    const double nr = v.row(i).norm();
    if (nr > 0.0) v.row(i) /= nr;
  }
  return v;
}

ComplexMatrix pauli(char which) {
  ComplexMatrix p(2, 2);
  switch (which) {
    case 'I': p << 1, 0, 0, 1; break;
    case 'X': p << 0, 1, 1, 0; break;
    case 'Y': p << 0, cplx(0, -1), cplx(0, 1), 0; break;
    case 'Z': p << 1, 0, 0, -1; break;
    default: throw std::logic_error("pauli");
  }
  return p;
}

}  // namespace

SignedCorrelationMatrix::SignedCorrelationMatrix(RealMatrix s) : s_(std::move(s)) {
  if (s_.rows() < 1 || s_.rows() != s_.cols())
    throw std::invalid_argument("SignedCorrelationMatrix: matrix must be square and non-empty");
  if (!all_finite(s_)) throw std::invalid_argument("SignedCorrelationMatrix: non-finite entry");
  if (s_.cwiseAbs().maxCoeff() > 1.0 + kUnitTolerance)
    throw std::invalid_argument("SignedCorrelationMatrix: entry outside [-1, 1]");
}

VectorRepresentation::VectorRepresentation(std::vector<RealVector> x, std::vector<RealVector> y)
    : x_(std::move(x)), y_(std::move(y)) {
  if (x_.empty() || x_.size() != y_.size())
    throw std::invalid_argument("VectorRepresentation: need n >= 1 vectors on each side");
  const Index d = x_.front().size();
  if (d < 1) throw std::invalid_argument("VectorRepresentation: empty vectors");
  for (const auto* side : {&x_, &y_})
    for (const RealVector& v : *side) {
      if (v.size() != d) throw std::invalid_argument("VectorRepresentation: dimension mismatch");
      if (!all_finite(v) || std::abs(v.norm() - 1.0) > kUnitTolerance)
        throw std::invalid_argument("VectorRepresentation: vectors must be unit length");
    }
}

RealMatrix VectorRepresentation::correlations() const {
  const int n = this->n();
  RealMatrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = x_[i].dot(y_[j]);
  return s;
}

RealMatrix CliffordRealization::correlations() const {
  const int n = static_cast<int>(a.size());
  RealMatrix s(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s(i, j) = expectation(state, a[i], b[j]).real();
  return s;
}

BehaviorMatrix CliffordRealization::behavior() const {
  return evaluate_behavior(MixedState::pure(state), e, f);
}

SignedCorrelationMatrix bell_to_tsirelson(const BehaviorMatrix& b) {
  const int n = b.n();
  if (n < 1) throw std::invalid_argument("bell_to_tsirelson: n must be >= 1");
  RealMatrix s(n, n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) s(i - 1, j - 1) = 4.0 * b(i, j) - 2.0 * b(i, 0) - 2.0 * b(0, j) + 1.0;
  return SignedCorrelationMatrix(std::move(s));
}

BehaviorMatrix tsirelson_to_bell0(const SignedCorrelationMatrix& s) {
  const int n = s.n();
  RealMatrix p(n + 1, n + 1);
  p(0, 0) = 1.0;
  for (int k = 1; k <= n; ++k) {
    p(k, 0) = 0.5;
    p(0, k) = 0.5;
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) p(i, j) = std::clamp((s(i - 1, j - 1) + 1.0) / 4.0, 0.0, 1.0);
  return BehaviorMatrix(std::move(p));
}

GramResult gram_feasible(const SignedCorrelationMatrix& s, const GramOptions& opt) {
  const Index n = s.n();
  const RealMatrix& target = s.matrix();
  RealMatrix x = affine_project(RealMatrix::Zero(2 * n, 2 * n), target);
  RealMatrix correction = RealMatrix::Zero(2 * n, 2 * n);
  RealMatrix y = x;

  GramResult res;
  double window_gap = std::numeric_limits<double>::infinity();
  bool stabilized = false;
  for (long it = 1; it <= opt.max_iterations; ++it) {
    y = psd_project(x + correction);
    correction = x + correction - y;
    x = affine_project(y, target);
    res.iterations = it;
    res.residual = fixed_residual(y, target);
    res.gap = fixed_gap(y, target);
    if (res.residual <= opt.target_residual) break;
    if (it % opt.stabilization_window == 0) {
      if (res.gap > opt.infeasible_gap &&
          std::abs(window_gap - res.gap) <= opt.stabilization_relative * res.gap) {
        stabilized = true;
        break;
      }
      window_gap = res.gap;
    }
  }

  if (res.residual <= opt.member_residual) {
    const RealMatrix v = factor_gram(y);
    std::vector<RealVector> xs, ys;
    for (Index i = 0; i < n; ++i) {
      xs.emplace_back(v.row(i).transpose());
      ys.emplace_back(v.row(n + i).transpose());
    }
    VectorRepresentation rep(std::move(xs), std::move(ys));
    res.reconstruction_residual = (rep.correlations() - target).cwiseAbs().maxCoeff();
    if (res.reconstruction_residual <= opt.member_residual) {
      res.member = true;
      res.vectors = std::move(rep);
      return res;
    }
  }
  if (stabilized || res.gap > opt.infeasible_gap) {
    if (!stabilized && res.iterations >= opt.max_iterations)
      throw Undecided("gram_feasible: gap " + std::to_string(res.gap) + " not stabilized within the iteration cap");
    res.member = false;
    return res;
  }
  throw Undecided("gram_feasible: residual " + std::to_string(res.residual) + " inside the ambiguity band");
}

VectorRepresentation extract_vectors(const BehaviorMatrix& b, const GramOptions& options) {
  const int n = b.n();
  for (int k = 1; k <= n; ++k)
    if (std::abs(b(k, 0) - 0.5) > 1e-9 || std::abs(b(0, k) - 0.5) > 1e-9)
      throw std::invalid_argument("extract_vectors: marginals must all equal 1/2");
  GramResult g = gram_feasible(bell_to_tsirelson(b), options);
  if (!g.member) throw Infeasible("extract_vectors: no unit vectors realize this point");
  return std::move(*g.vectors);
}

std::vector<ComplexMatrix> clifford_generators(int m) {
  if (m < 1 || m > 12) throw std::invalid_argument("clifford_generators: m must be in [1, 12]");
  std::vector<ComplexMatrix> out;
  for (int k = 0; k < m; ++k) {
    for (char head : {'X', 'Y'}) {
      ComplexMatrix g = ComplexMatrix::Identity(1, 1);
      for (int l = 0; l < m; ++l) {
        const char c = l < k ? 'Z' : (l == k ? head : 'I');
        g = kron(g, pauli(c));
      }
      out.push_back(std::move(g));
    }
  }
  return out;
}

CliffordRealization clifford_realize(const VectorRepresentation& v) {
  const int n = v.n();
  const Index ambient = v.ambient_dim();
  RealMatrix stack(2 * n, ambient);
  for (int i = 0; i < n; ++i) {
    stack.row(i) = v.x()[i].transpose();
    stack.row(n + i) = v.y()[i].transpose();
  }
  // Rotate the configuration so that its span is the leading coordinates.
  Eigen::JacobiSVD<RealMatrix> svd(stack, Eigen::ComputeFullV);
  int d = 0;
  for (Index k = 0; k < svd.singularValues().size(); ++k)
    if (svd.singularValues()(k) > kRankTolerance) ++d;
  d = std::max(d, 1);
  const RealMatrix coords = stack * svd.matrixV().leftCols(d);

  const int m = (d + 1) / 2;
  CliffordRealization r;
  r.configuration_rank = d;
  r.gamma = clifford_generators(m);
  r.dim = r.gamma.front().rows();
  const ComplexMatrix id = ComplexMatrix::Identity(r.dim, r.dim);
  for (int i = 0; i < n; ++i) {
    ComplexMatrix a = ComplexMatrix::Zero(r.dim, r.dim);
    ComplexMatrix b = ComplexMatrix::Zero(r.dim, r.dim);
    const RealVector xi = coords.row(i).transpose().normalized();
    const RealVector yi = coords.row(n + i).transpose().normalized();
    for (int k = 0; k < d; ++k) {
      a += xi(k) * r.gamma[k];
      b += yi(k) * r.gamma[k].transpose();
    }
    r.e.emplace_back(0.5 * (id + a));
    r.f.emplace_back(0.5 * (id + b));
    r.a.push_back(std::move(a));
    r.b.push_back(std::move(b));
  }
  r.state = PureState::from_schmidt(std::vector<double>(static_cast<std::size_t>(r.dim), 1.0 / std::sqrt(double(r.dim))));
  return r;
}

}  // namespace qrange
