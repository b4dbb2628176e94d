#include "qrange/entangle.hpp"

#include "qrange/nelder_mead.hpp"
#include "qrange/polytope.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>
#include <thread>

namespace qrange {

namespace {

std::mt19937_64 derived_rng(std::uint64_t seed, std::uint64_t k) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
  return std::mt19937_64(seq);
}

void check_n(int n, const char* who) {
  if (n < 1) throw std::invalid_argument(std::string(who) + ": n must be >= 1");
}

// Leading eigenvectors of a projection, as a dim x rank frame.
ComplexMatrix frame_of(const Projection& p) {
  const Index r = static_cast<Index>(std::lround(p.trace()));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(p.matrix());
  return es.eigenvectors().rightCols(r);
}

// Behavior of sum_a c_a |aa> with projections given as frames; bypasses the
// per-projection validation on the optimizer's hot path.
BehaviorMatrix frames_behavior(std::span<const double> c, const std::vector<ComplexMatrix>& pe,
                               const std::vector<ComplexMatrix>& pf) {
  const int n = static_cast<int>(pe.size());
  const Index dim = static_cast<Index>(c.size());
  const ComplexMatrix id = ComplexMatrix::Identity(dim, dim);
  RealMatrix p(n + 1, n + 1);
  p(0, 0) = 1.0;
  for (int i = 1; i <= n; ++i) p(i, 0) = std::clamp(diag_form_evaluate(c, pe[i - 1], id), 0.0, 1.0);
  for (int j = 1; j <= n; ++j) p(0, j) = std::clamp(diag_form_evaluate(c, id, pf[j - 1]), 0.0, 1.0);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) p(i, j) = std::clamp(diag_form_evaluate(c, pe[i - 1], pf[j - 1]), 0.0, 1.0);
  return BehaviorMatrix(std::move(p));
}

// Parameter layout: for each of the 2n projections, re/im parts of a
// dim x rank matrix whose column space is the projection's range.
struct Layout {
  Index dim;
  std::vector<Index> ranks;  // E_1..E_n, F_1..F_n

  Index size() const {
    Index s = 0;
    for (Index r : ranks) s += 2 * dim * r;
    return s;
  }

  ComplexMatrix projector(const RealVector& x, Index offset, Index rank) const {
    if (rank == 0) return ComplexMatrix::Zero(dim, dim);
    ComplexMatrix g(dim, rank);
    for (Index j = 0; j < rank; ++j)
      for (Index i = 0; i < dim; ++i) {
        const Index k = offset + 2 * (j * dim + i);
        g(i, j) = cplx(x(k), x(k + 1));
      }
    Eigen::HouseholderQR<ComplexMatrix> qr(g);
    const ComplexMatrix q = qr.householderQ() * ComplexMatrix::Identity(dim, rank);
    ComplexMatrix p = q * q.adjoint();
    return 0.5 * (p + p.adjoint());
  }

  void unpack(const RealVector& x, std::vector<ComplexMatrix>& pe, std::vector<ComplexMatrix>& pf) const {
    const std::size_t n = ranks.size() / 2;
    pe.clear();
    pf.clear();
    Index offset = 0;
    for (std::size_t k = 0; k < ranks.size(); ++k) {
      (k < n ? pe : pf).push_back(projector(x, offset, ranks[k]));
      offset += 2 * dim * ranks[k];
    }
  }

  RealVector pack(const std::vector<ComplexMatrix>& frames) const {
    RealVector x(size());
    Index offset = 0;
    for (std::size_t k = 0; k < ranks.size(); ++k) {
      const ComplexMatrix& g = frames[k];
      for (Index j = 0; j < ranks[k]; ++j)
        for (Index i = 0; i < dim; ++i) {
          x(offset + 2 * (j * dim + i)) = g(i, j).real();
          x(offset + 2 * (j * dim + i) + 1) = g(i, j).imag();
        }
      offset += 2 * dim * ranks[k];
    }
    return x;
  }
};

ProjectionFamily to_family(const std::vector<ComplexMatrix>& ps) {
  ProjectionFamily out;
  for (const ComplexMatrix& p : ps) out.emplace_back(p);
  return out;
}

struct RestartOutcome {
  double value = -1.0;
  Layout layout;
  RealVector x;
  long iterations = 0;
};

}  // namespace

PureState schmidt_embedding(const PureState& w, Index dim) {
  std::vector<double> c = w.schmidt();
  while (!c.empty() && c.back() == 0.0 && static_cast<Index>(c.size()) > dim) c.pop_back();
  if (static_cast<Index>(c.size()) > dim)
    throw std::invalid_argument("schmidt_embedding: dim is below the Schmidt rank");
  return PureState::from_schmidt(std::move(c), dim);
}

std::vector<TrajectoryPoint> trajectory_sample(const PureState& w, int n, Index dim, std::size_t count,
                                               std::uint64_t seed) {
  check_n(n, "trajectory_sample");
  if (dim < 2 || dim < static_cast<Index>(w.schmidt_rank()))
    throw std::invalid_argument("trajectory_sample: dim must be >= max(2, schmidt rank)");
  const PureState state = schmidt_embedding(w, dim);
  const MixedState mixed = MixedState::pure(state);
  std::uniform_int_distribution<Index> rank_dist(1, dim - 1);
  std::vector<TrajectoryPoint> out;
  out.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    std::mt19937_64 rng = derived_rng(seed, k);
    ProjectionFamily e, f;
    for (int i = 0; i < n; ++i) e.push_back(random_projection(dim, rank_dist(rng), rng));
    for (int j = 0; j < n; ++j) f.push_back(random_projection(dim, rank_dist(rng), rng));
    BehaviorMatrix b = evaluate_behavior(mixed, e, f);
    out.push_back(TrajectoryPoint{std::move(b), state, std::move(e), std::move(f), dim, seed,
                                  "trajectory sample " + std::to_string(k)});
  }
  return out;
}

TrajectoryPoint gisin_peres_settings(const PureState& w, int n) {
  if (n < 2) throw std::invalid_argument("gisin_peres_settings: n must be >= 2");
  const std::vector<double>& c = w.schmidt();
  if (c.size() < 2 || c[1] <= 1e-9)
    throw std::invalid_argument("gisin_peres_settings: state is a product state");
  const double norm = std::hypot(c[0], c[1]);
  const double c1 = c[0] / norm, c2 = c[1] / norm;
  const double mu = std::atan(2.0 * c1 * c2);

  Eigen::Matrix2cd z, x;
  z << 1, 0, 0, -1;
  x << 0, 1, 1, 0;
  const Eigen::Matrix2cd id = Eigen::Matrix2cd::Identity();
  const Eigen::Matrix2cd a[2] = {z, x};
  const Eigen::Matrix2cd b[2] = {std::cos(mu) * z + std::sin(mu) * x, std::cos(mu) * z - std::sin(mu) * x};

  const ComplexMatrix left = w.basis_left().leftCols(2);
  const ComplexMatrix right = w.basis_right().leftCols(2);
  ProjectionFamily e, f;
  for (int k = 0; k < n; ++k) {
    if (k < 2) {
      ComplexMatrix pe = left * (0.5 * (id + a[k])) * left.adjoint();
      ComplexMatrix pf = right * (0.5 * (id + b[k])) * right.adjoint();
      e.emplace_back(0.5 * (pe + pe.adjoint()));
      f.emplace_back(0.5 * (pf + pf.adjoint()));
    } else {
      e.push_back(Projection::zero(w.dim_left()));
      f.push_back(Projection::zero(w.dim_right()));
    }
  }
  BehaviorMatrix beh = evaluate_behavior(MixedState::pure(w), e, f);
  return TrajectoryPoint{std::move(beh), w, std::move(e), std::move(f), w.dim_left(), 0, "gisin-peres settings"};
}

EntanglementReport entanglement_measure(const PureState& w, int n, Norm norm, const EntanglementConfig& config) {
  if (n < 2 || n > kMaxEntanglementN)
    throw std::invalid_argument("entanglement_measure: n must be in [2, " + std::to_string(kMaxEntanglementN) + "]");
  if (config.restarts < 1) throw std::invalid_argument("entanglement_measure: restarts must be >= 1");
  if (config.max_iterations < 0) throw std::invalid_argument("entanglement_measure: max_iterations must be >= 0");
  const Index rank = static_cast<Index>(w.schmidt_rank());
  const Index dim = config.dim > 0 ? config.dim : std::max<Index>(2, rank);
  if (dim < 2 || dim < rank) throw std::invalid_argument("entanglement_measure: dim must be >= max(2, schmidt rank)");

  const PureState state = schmidt_embedding(w, dim);
  std::vector<double> coeffs = state.schmidt();
  coeffs.resize(static_cast<std::size_t>(dim), 0.0);
  const VertexSet vs = classical_vertices(n);

  auto objective_of = [&](const Layout& layout) {
    return [&, layout](const RealVector& x) {
      std::vector<ComplexMatrix> pe, pf;
      layout.unpack(x, pe, pf);
      return -distance(frames_behavior(coeffs, pe, pf), vs, norm);
    };
  };

  auto start_of = [&](int k) -> std::pair<Layout, RealVector> {
    if (k == 0 && !state.is_product()) {
      const TrajectoryPoint gp = gisin_peres_settings(state, n);
      Layout layout{dim, {}};
      std::vector<ComplexMatrix> frames;
      for (const auto* fam : {&gp.e, &gp.f})
        for (const Projection& p : *fam) {
          frames.push_back(frame_of(p));
          layout.ranks.push_back(frames.back().cols());
        }
      return {layout, layout.pack(frames)};
    }
    std::mt19937_64 rng = derived_rng(config.seed, static_cast<std::uint64_t>(k));
    std::uniform_int_distribution<Index> rank_dist(1, dim - 1);
    std::normal_distribution<double> normal(0.0, 1.0);
    Layout layout{dim, {}};
    for (int i = 0; i < 2 * n; ++i) layout.ranks.push_back(rank_dist(rng));
    RealVector x(layout.size());
    for (Index i = 0; i < x.size(); ++i) x(i) = normal(rng);
    return {layout, x};
  };

  std::vector<RestartOutcome> outcomes(static_cast<std::size_t>(config.restarts));
  auto run = [&](int k) {
    auto [layout, x0] = start_of(k);
    NelderMeadOptions opt;
    opt.max_iterations = config.max_iterations;
    const NelderMeadResult r = nelder_mead_minimize(objective_of(layout), x0, opt);
    outcomes[static_cast<std::size_t>(k)] = RestartOutcome{-r.value, layout, r.x, r.iterations};
  };

  const int threads = std::clamp(config.threads, 1, config.restarts);
  if (threads == 1) {
    for (int k = 0; k < config.restarts; ++k) run(k);
  } else {
    std::atomic<int> next{0};
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t)
      pool.emplace_back([&, t] {
        try {
          for (int k = next++; k < config.restarts; k = next++) run(k);
        } catch (...) {
          errors[static_cast<std::size_t>(t)] = std::current_exception();
        }
      });
    for (std::thread& th : pool) th.join();
    for (const auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  int best = 0;
  long iterations = 0;
  std::vector<double> values;
  for (int k = 0; k < config.restarts; ++k) {
    const RestartOutcome& o = outcomes[static_cast<std::size_t>(k)];
    values.push_back(o.value);
    iterations += o.iterations;
    if (o.value > outcomes[static_cast<std::size_t>(best)].value) best = k;
  }

  const RestartOutcome& o = outcomes[static_cast<std::size_t>(best)];
  std::vector<ComplexMatrix> pe, pf;
  o.layout.unpack(o.x, pe, pf);
  ProjectionFamily e = to_family(pe), f = to_family(pf);
  BehaviorMatrix beh = evaluate_behavior(MixedState::pure(state), e, f);
  NearestPoint np = nearest_point(beh, vs, norm);
  const double value = np.distance;
  TrajectoryPoint point{std::move(beh), state, std::move(e), std::move(f), dim, config.seed,
                        "entanglement restart " + std::to_string(best)};
  return EntanglementReport{value, true, std::move(point), std::move(np), norm, best, std::move(values), iterations,
                            config.seed};
}

std::string_view to_string(Majorization m) {
  switch (m) {
    case Majorization::yes: return "yes";
    case Majorization::no: return "no";
    case Majorization::incomparable: return "incomparable";
  }
  return "?";
}

Majorization majorizes(std::span<const double> c, std::span<const double> d) {
  auto squares = [](std::span<const double> v, std::size_t len) {
    std::vector<double> s(len, 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (!std::isfinite(v[i]) || v[i] < 0.0) throw std::invalid_argument("majorizes: coefficients must be >= 0");
      s[i] = v[i] * v[i];
      total += s[i];
    }
    if (std::abs(total - 1.0) > tol::kNormalization * 10)
      throw std::invalid_argument("majorizes: coefficients must be normalized");
    std::sort(s.begin(), s.end(), std::greater<>());
    return s;
  };
  const std::size_t len = std::max(c.size(), d.size());
  const std::vector<double> a = squares(c, len), b = squares(d, len);
  constexpr double eps = 1e-12;
  bool a_ge = true, b_ge = true;
  double sa = 0.0, sb = 0.0;
  for (std::size_t k = 0; k < len; ++k) {
    sa += a[k];
    sb += b[k];
    if (sa < sb - eps) a_ge = false;
    if (sb < sa - eps) b_ge = false;
  }
  if (a_ge) return Majorization::yes;
  if (b_ge) return Majorization::no;
  return Majorization::incomparable;
}

ProbeReport monotonicity_probe(std::span<const PureState> states, int n, Norm norm, const EntanglementConfig& config) {
  ProbeReport rep;
  const std::size_t m = states.size();
  Index dim = config.dim;
  for (const PureState& s : states) dim = std::max<Index>(dim, std::max<Index>(2, s.schmidt_rank()));
  EntanglementConfig cfg = config;
  cfg.dim = dim;
  for (const PureState& s : states) rep.values.push_back(entanglement_measure(s, n, norm, cfg).value);
  rep.relation.assign(m, std::vector<Majorization>(m, Majorization::incomparable));
  rep.consistent.assign(m, true);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      rep.relation[i][j] = majorizes(states[i].schmidt(), states[j].schmidt());
      if (i != j && rep.relation[i][j] == Majorization::yes && rep.values[i] > rep.values[j] + kProbeSlack) {
        rep.consistent[i] = false;
        rep.consistent[j] = false;
        rep.all_consistent = false;
      }
    }
  return rep;
}

}  // namespace qrange
