#include "qrange/geometry.hpp"

#include "qrange/error.hpp"
#include "qrange/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace qrange {

namespace {

void check_compatible(const BehaviorMatrix& b, const VertexSet& vs) {
  if (b.n() != vs.n || free_dimension(b.n()) != vs.dim)
    throw std::invalid_argument("geometry: behavior size differs from the polytope's n");
  if (vs.vertices.empty()) throw std::invalid_argument("geometry: empty vertex set");
  if (vs.vertices.size() > kMaxOracleVertices) throw SizeCapExceeded("geometry: too many vertices");
}

// Best rational approximation with denominator at most max_den.
BigRational approximate(double x, long long max_den) {
  const bool negative = x < 0.0;
  double r = std::abs(x);
  long long p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  for (int iter = 0; iter < 64; ++iter) {
    const double a = std::floor(r);
    if (a > 9e15) break;
    const auto ai = static_cast<long long>(a);
    const long long q2 = q0 + ai * q1;
    if (q2 > max_den) break;
    const long long p2 = p0 + ai * p1;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    const double frac = r - a;
    if (frac < 1e-15) break;
    r = 1.0 / frac;
  }
  if (q1 == 0) return BigRational(0);
  BigRational out{BigInt(p1), BigInt(q1)};
  return negative ? BigRational(-out) : out;
}

// Rounds a real normal vector to a primitive integer one and takes the
// exact support value over the vertices as bound, which makes the result
// valid by construction.
std::optional<Facet> certify_separator(const RealVector& normal, const BehaviorMatrix& b, const VertexSet& vs) {
  const double scale = normal.cwiseAbs().maxCoeff();
  if (!(scale > 0.0) || !std::isfinite(scale)) return std::nullopt;
  const RealVector unit = normal / scale;
  for (long long den = 10; den <= 100000000LL; den *= 10) {
    std::vector<BigRational> coeffs;
    coeffs.reserve(static_cast<std::size_t>(unit.size()));
    bool nonzero = false;
    for (Index k = 0; k < unit.size(); ++k) {
      coeffs.push_back(approximate(unit(k), den));
      nonzero = nonzero || coeffs.back() != 0;
    }
    if (!nonzero) continue;
    Facet f = canonicalize_facet(std::span<const BigRational>(coeffs), BigRational(0));
    BigInt support = -1;
    bool first = true;
    for (const auto& v : vs.vertices) {
      BigInt s = 0;
      for (std::size_t k = 0; k < v.size(); ++k)
        if (v[k] != 0) s += f.coeffs[k] * v[k];
      if (first || s > support) support = s;
      first = false;
    }
    f.bound = support;
    f = canonicalize_facet(std::span<const BigInt>(f.coeffs), f.bound);
    if (evaluate_functional(f, b) > kMembershipTolerance) return f;
  }
  return std::nullopt;
}

// Re-solves the equality system on the support of an LP vertex solution.
RealVector polish_weights(const RealMatrix& vmat, const RealVector& x, const RealVector& weights) {
  std::vector<Index> support;
  for (Index k = 0; k < weights.size(); ++k)
    if (weights(k) > 1e-14) support.push_back(k);
  if (support.empty()) return weights;
  const Index d = vmat.rows();
  RealMatrix sys(d + 1, static_cast<Index>(support.size()));
  for (std::size_t s = 0; s < support.size(); ++s) {
    sys.col(static_cast<Index>(s)).head(d) = vmat.col(support[s]);
    sys(d, static_cast<Index>(s)) = 1.0;
  }
  RealVector rhs(d + 1);
  rhs.head(d) = x;
  rhs(d) = 1.0;
  const RealVector mu = sys.colPivHouseholderQr().solve(rhs);
  if (mu.minCoeff() < 0.0) return weights;
  RealVector out = RealVector::Zero(weights.size());
  for (std::size_t s = 0; s < support.size(); ++s) out(support[s]) = mu(static_cast<Index>(s));
  return out;
}

double combination_residual(const RealMatrix& vmat, const RealVector& x, const RealVector& w) {
  return std::max((vmat * w - x).cwiseAbs().maxCoeff(), std::abs(w.sum() - 1.0));
}

std::vector<VertexWeight> sparse_weights(const RealVector& w) {
  std::vector<VertexWeight> out;
  for (Index k = 0; k < w.size(); ++k)
    if (w(k) > 0.0) out.push_back({static_cast<std::size_t>(k), w(k)});
  return out;
}

BehaviorMatrix clamp_to_behavior(int n, RealVector q) {
  for (Index k = 0; k < q.size(); ++k) q(k) = std::clamp(q(k), 0.0, 1.0);
  return BehaviorMatrix::from_free(n, q);
}

NearestPoint lp_nearest(const BehaviorMatrix& b, const VertexSet& vs, Norm norm) {
  const RealMatrix v = vertex_matrix(vs);
  const RealVector x = b.free_vector();
  const Index d = v.rows();
  const Index m = v.cols();
  // columns: lambda (m), t+ (d), t- (d) [, tau, s+ (d), s- (d)]
  const bool inf = norm == Norm::linf;
  const Index cols = m + 2 * d + (inf ? 1 + 2 * d : 0);
  const Index rows = d + 1 + (inf ? 2 * d : 0);
  RealMatrix a = RealMatrix::Zero(rows, cols);
  RealVector rhs = RealVector::Zero(rows);
  RealVector c = RealVector::Zero(cols);
  a.topLeftCorner(d, m) = v;
  a.block(0, m, d, d) = -RealMatrix::Identity(d, d);
  a.block(0, m + d, d, d) = RealMatrix::Identity(d, d);
  rhs.head(d) = x;
  a.block(d, 0, 1, m).setOnes();
  rhs(d) = 1.0;
  if (inf) {
    const Index tau = m + 2 * d;
    for (Index k = 0; k < d; ++k) {
      a(d + 1 + k, m + k) = 1.0;
      a(d + 1 + k, tau + 1 + k) = 1.0;
      a(d + 1 + k, tau) = -1.0;
      a(d + 1 + d + k, m + d + k) = 1.0;
      a(d + 1 + d + k, tau + 1 + d + k) = 1.0;
      a(d + 1 + d + k, tau) = -1.0;
    }
    c(tau) = 1.0;
  } else {
    c.segment(m, 2 * d).setOnes();
  }
  const lp::Result res = lp::solve(a, rhs, c);
  if (res.status != lp::Status::optimal) throw std::runtime_error("distance: linear program did not reach optimality");
  RealVector w = res.x.head(m);
  w /= w.sum();
  const RealVector q = v * w;
  const RealVector diff = q - x;
  const double dist = inf ? diff.cwiseAbs().maxCoeff() : diff.cwiseAbs().sum();
  return NearestPoint{clamp_to_behavior(b.n(), q), std::max(dist, 0.0), sparse_weights(w), 0.0, res.iterations};
}

}  // namespace

std::string_view to_string(Norm norm) {
  switch (norm) {
    case Norm::l1: return "l1";
    case Norm::l2: return "l2";
    case Norm::linf: return "linf";
  }
  return "l2";
}

Norm parse_norm(std::string_view text) {
  if (text == "l1") return Norm::l1;
  if (text == "l2") return Norm::l2;
  if (text == "linf") return Norm::linf;
  throw std::invalid_argument("unknown norm '" + std::string(text) + "' (expected l1, l2 or linf)");
}

RealMatrix vertex_matrix(const VertexSet& vs) {
  RealMatrix v(vs.dim, static_cast<Index>(vs.vertices.size()));
  for (std::size_t k = 0; k < vs.vertices.size(); ++k)
    for (int i = 0; i < vs.dim; ++i) v(i, static_cast<Index>(k)) = vs.vertices[k][static_cast<std::size_t>(i)];
  return v;
}

double evaluate_functional(const Facet& f, const BehaviorMatrix& b) {
  const RealVector x = b.free_vector();
  if (static_cast<Index>(f.coeffs.size()) != x.size())
    throw std::invalid_argument("evaluate_functional: facet dimension differs from the behavior's");
  double s = 0.0;
  for (Index k = 0; k < x.size(); ++k) s += f.coeffs[static_cast<std::size_t>(k)].convert_to<double>() * x(k);
  return s - f.bound.convert_to<double>();
}

MembershipCertificate lp_membership(const BehaviorMatrix& b, const VertexSet& vs, std::span<const Facet> catalog) {
  check_compatible(b, vs);
  const RealMatrix v = vertex_matrix(vs);
  const RealVector x = b.free_vector();
  const Index d = v.rows();
  const Index m = v.cols();

  RealMatrix a(d + 1, m);
  a.topRows(d) = v;
  a.row(d).setOnes();
  RealVector rhs(d + 1);
  rhs.head(d) = x;
  rhs(d) = 1.0;
  const lp::Result res = lp::solve(a, rhs, RealVector::Zero(m));

  if (res.status == lp::Status::optimal) {
    RealVector w = polish_weights(v, x, res.x);
    double residual = combination_residual(v, x, w);
    const double raw = combination_residual(v, x, res.x);
    if (raw < residual) {
      w = res.x;
      residual = raw;
    }
    if (residual <= kMembershipTolerance) {
      MembershipCertificate cert;
      cert.verdict = Verdict::inside;
      cert.weights = sparse_weights(w);
      cert.residual = residual;
      return cert;
    }
  }

  if (!catalog.empty()) {
    const Facet* best = nullptr;
    double best_margin = -std::numeric_limits<double>::infinity();
    for (const auto& f : catalog) {
      const double mg = evaluate_functional(f, b);
      if (mg > best_margin) {
        best_margin = mg;
        best = &f;
      }
    }
    if (best && best_margin > kMembershipTolerance) {
      MembershipCertificate cert;
      cert.verdict = Verdict::outside;
      cert.separating = *best;
      cert.margin = best_margin;
      cert.separating_from_catalog = true;
      return cert;
    }
  }

  std::vector<RealVector> normals;
  if (res.status == lp::Status::infeasible && res.duals.size() == d + 1) normals.push_back(res.duals.head(d));
  {
    const NearestPoint np = nearest_point(b, vs);
    normals.push_back(x - np.point.free_vector());
  }
  for (const auto& normal : normals) {
    if (auto f = certify_separator(normal, b, vs)) {
      MembershipCertificate cert;
      cert.verdict = Verdict::outside;
      cert.margin = evaluate_functional(*f, b);
      cert.separating = std::move(f);
      return cert;
    }
  }
  throw Undecided("lp_membership: point lies within the tolerance band of the boundary");
}

NearestPoint nearest_point(const BehaviorMatrix& b, const VertexSet& vs) {
  check_compatible(b, vs);
  const RealMatrix v = vertex_matrix(vs);
  const RealVector x0 = b.free_vector();
  const RealMatrix p = v.colwise() - x0;  // translated so the target is the origin
  const Index m = p.cols();
  const RealVector norms2 = p.colwise().squaredNorm();
  const double scale = std::max(1.0, norms2.maxCoeff());
  constexpr double kOptimality = 1e-14;
  constexpr double kWeight = 1e-10;

  Index start = 0;
  for (Index k = 1; k < m; ++k)
    if (norms2(k) < norms2(start)) start = k;
  std::vector<Index> corral{start};
  std::vector<double> lambda{1.0};
  RealVector x = p.col(start);
  long iterations = 0;
  const long max_major = 50 * (m + p.rows()) + 1000;

  auto affine_minimizer = [&](const std::vector<Index>& s) {
    const auto k = static_cast<Index>(s.size());
    RealMatrix sys = RealMatrix::Zero(k + 1, k + 1);
    for (Index i = 0; i < k; ++i)
      for (Index j = 0; j < k; ++j) sys(i, j) = p.col(s[static_cast<std::size_t>(i)]).dot(p.col(s[static_cast<std::size_t>(j)]));
    sys.block(0, k, k, 1).setOnes();
    sys.block(k, 0, 1, k).setOnes();
    RealVector rhs = RealVector::Zero(k + 1);
    rhs(k) = 1.0;
    const RealVector sol = sys.completeOrthogonalDecomposition().solve(rhs);
    RealVector alpha = sol.head(k);
    alpha /= alpha.sum();
    return alpha;
  };

  for (long major = 0; major < max_major; ++major) {
    const double xx = x.squaredNorm();
    if (xx <= 1e-26) break;
    const RealVector dots = p.transpose() * x;
    Index j = 0;
    for (Index k = 1; k < m; ++k)
      if (dots(k) < dots(j)) j = k;
    if (dots(j) >= xx - kOptimality * scale) break;
    if (std::find(corral.begin(), corral.end(), j) != corral.end()) break;
    corral.push_back(j);
    lambda.push_back(0.0);

    while (true) {
      ++iterations;
      const RealVector alpha = affine_minimizer(corral);
      if (alpha.minCoeff() > kWeight) {
        for (std::size_t i = 0; i < corral.size(); ++i) lambda[i] = alpha(static_cast<Index>(i));
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < corral.size(); ++i) {
        const double a = alpha(static_cast<Index>(i));
        if (a <= kWeight && lambda[i] - a > 0.0) theta = std::min(theta, lambda[i] / (lambda[i] - a));
      }
      for (std::size_t i = 0; i < corral.size(); ++i)
        lambda[i] = (1.0 - theta) * lambda[i] + theta * alpha(static_cast<Index>(i));
      std::vector<Index> kept;
      std::vector<double> kept_lambda;
      for (std::size_t i = 0; i < corral.size(); ++i)
        if (lambda[i] > kWeight) {
          kept.push_back(corral[i]);
          kept_lambda.push_back(lambda[i]);
        }
      if (kept.empty()) {  // numerical breakdown; keep the entering point
        kept.push_back(j);
        kept_lambda.push_back(1.0);
      }
      corral = std::move(kept);
      lambda = std::move(kept_lambda);
      double total = 0.0;
      for (double l : lambda) total += l;
      for (double& l : lambda) l /= total;
      if (corral.size() == 1) break;
    }
    x.setZero();
    for (std::size_t i = 0; i < corral.size(); ++i) x += lambda[i] * p.col(corral[i]);
  }

  RealVector w = RealVector::Zero(m);
  for (std::size_t i = 0; i < corral.size(); ++i) w(corral[i]) = lambda[i];
  const RealVector q = v * w;
  const RealVector diff = q - x0;
  const double xx = diff.squaredNorm();
  const double min_dot = (p.transpose() * diff).minCoeff();
  return NearestPoint{clamp_to_behavior(b.n(), q), std::sqrt(xx), sparse_weights(w),
                      std::max(0.0, xx - min_dot), iterations};
}

NearestPoint nearest_point(const BehaviorMatrix& b, const VertexSet& vs, Norm norm) {
  if (norm == Norm::l2) return nearest_point(b, vs);
  check_compatible(b, vs);
  return lp_nearest(b, vs, norm);
}

double distance(const BehaviorMatrix& b, const VertexSet& vs, Norm norm) {
  return nearest_point(b, vs, norm).distance;
}

}  // namespace qrange
