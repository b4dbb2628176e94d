#include "qrange/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qrange::lp {

namespace {

using Tableau = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Eigen::Index;

class Solver {
 public:
  Solver(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Options& opt)
      : m_(a.rows()), n_(a.cols()), opt_(opt), sign_(m_), t_(m_, n_ + m_ + 1), basis_(static_cast<std::size_t>(m_)) {
    for (Index i = 0; i < m_; ++i) {
      sign_(i) = b(i) < 0.0 ? -1.0 : 1.0;
      t_.row(i).head(n_) = sign_(i) * a.row(i);
      t_.row(i).segment(n_, m_).setZero();
      t_(i, n_ + i) = 1.0;
      t_(i, n_ + m_) = sign_(i) * b(i);
      basis_[static_cast<std::size_t>(i)] = n_ + i;
    }
    barred_.assign(static_cast<std::size_t>(n_ + m_), false);
  }

  // Minimizes cost over the current tableau; cost has length n + m.
  Status optimize(const Eigen::VectorXd& cost, long& iterations) {
    Eigen::VectorXd r = cost;
    for (Index i = 0; i < m_; ++i) {
      const double cb = cost(basis_[static_cast<std::size_t>(i)]);
      if (cb != 0.0) r -= cb * t_.row(i).head(n_ + m_).transpose();
    }
    int degenerate = 0;
    while (true) {
      if (iterations >= opt_.max_iterations) return Status::iteration_limit;
      const bool bland = degenerate >= opt_.degenerate_switch;
      Index q = -1;
      double best = -opt_.feasibility_tolerance;
      for (Index j = 0; j < n_ + m_; ++j) {
        if (barred_[static_cast<std::size_t>(j)] || r(j) >= best) continue;
        q = j;
        if (bland) break;
        best = r(j);
      }
      if (q < 0) return Status::optimal;

      Index p = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (Index i = 0; i < m_; ++i) {
        const double col = t_(i, q);
        if (col <= opt_.pivot_tolerance) continue;
        const double rr = std::max(t_(i, n_ + m_), 0.0) / col;
        if (rr < ratio - 1e-15 ||
            (rr <= ratio + 1e-15 && p >= 0 && basis_[static_cast<std::size_t>(i)] < basis_[static_cast<std::size_t>(p)])) {
          ratio = rr;
          p = i;
        }
      }
      if (p < 0) return Status::unbounded;
      degenerate = ratio <= 1e-15 ? degenerate + 1 : 0;
      pivot(p, q, r);
      ++iterations;
    }
  }

  void pivot(Index p, Index q, Eigen::VectorXd& r) {
    t_.row(p) /= t_(p, q);
    for (Index i = 0; i < m_; ++i) {
      if (i == p) continue;
      const double f = t_(i, q);
      if (f != 0.0) t_.row(i) -= f * t_.row(p);
    }
    const double f = r(q);
    if (f != 0.0) r -= f * t_.row(p).head(n_ + m_).transpose();
    basis_[static_cast<std::size_t>(p)] = q;
  }

  void pivot_no_cost(Index p, Index q) {
    Eigen::VectorXd dummy = Eigen::VectorXd::Zero(n_ + m_);
    pivot(p, q, dummy);
  }

  // Dual multipliers for the original (unflipped) rows.
  Eigen::VectorXd duals(const Eigen::VectorXd& cost, const Eigen::MatrixXd& a) const {
    Eigen::MatrixXd bmat(m_, m_);
    Eigen::VectorXd cb(m_);
    for (Index i = 0; i < m_; ++i) {
      const Index j = basis_[static_cast<std::size_t>(i)];
      if (j < n_) bmat.col(i) = sign_.cwiseProduct(a.col(j));
      else {
        bmat.col(i).setZero();
        bmat(j - n_, i) = 1.0;
      }
      cb(i) = cost(j);
    }
    const Eigen::VectorXd yflip = bmat.transpose().fullPivLu().solve(cb);
    return sign_.cwiseProduct(yflip);
  }

  Index m_, n_;
  Options opt_;
  Eigen::VectorXd sign_;
  Tableau t_;
  std::vector<Index> basis_;
  std::vector<bool> barred_;
};

}  // namespace

Result solve(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, const Eigen::VectorXd& c, const Options& options) {
  if (a.rows() != b.size() || a.cols() != c.size()) throw std::invalid_argument("lp::solve: dimension mismatch");
  const Index m = a.rows();
  const Index n = a.cols();
  Solver s(a, b, options);
  Result res;

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n + m);
  phase1.tail(m).setOnes();
  Status st = s.optimize(phase1, res.iterations);
  if (st == Status::iteration_limit) {
    res.status = st;
    return res;
  }
  double infeas = 0.0;
  for (Index i = 0; i < m; ++i)
    if (s.basis_[static_cast<std::size_t>(i)] >= n) infeas += std::max(s.t_(i, n + m), 0.0);
  res.infeasibility = infeas;
  if (infeas > options.feasibility_tolerance) {
    res.status = Status::infeasible;
    res.duals = s.duals(phase1, a);
    res.basis = s.basis_;
    return res;
  }

  // Drive remaining artificials out of the basis; rows where that fails are
  // redundant and keep their artificial at zero.
  for (Index i = 0; i < m; ++i) {
    if (s.basis_[static_cast<std::size_t>(i)] < n) continue;
    Index q = -1;
    double best = options.pivot_tolerance;
    for (Index j = 0; j < n; ++j)
      if (std::abs(s.t_(i, j)) > best) {
        best = std::abs(s.t_(i, j));
        q = j;
      }
    if (q >= 0) s.pivot_no_cost(i, q);
  }
  for (Index j = n; j < n + m; ++j) s.barred_[static_cast<std::size_t>(j)] = true;

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n + m);
  cost.head(n) = c;
  st = s.optimize(cost, res.iterations);
  res.status = st;
  if (st != Status::optimal) return res;

  res.x = Eigen::VectorXd::Zero(n);
  for (Index i = 0; i < m; ++i) {
    const Index j = s.basis_[static_cast<std::size_t>(i)];
    if (j < n) res.x(j) = std::max(s.t_(i, n + m), 0.0);
  }
  res.objective = c.dot(res.x);
  res.duals = s.duals(cost, a);
  res.basis = s.basis_;
  return res;
}

}  // namespace qrange::lp
