// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fail.

#include "qrange/cli/commands.hpp"
#include "qrange/convexity.hpp"
#include "qrange/entangle.hpp"
#include "qrange/geometry.hpp"
#include "qrange/polytope.hpp"
#include "qrange/tsirelson.hpp"

#include "generators.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>

using namespace qrange;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

const double kR = 1.0 / std::sqrt(2.0);
const double kChMargin = (std::sqrt(2.0) - 1.0) / 2.0;

Outcome facet_counts() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::size_t c2 = enumerate_facets(classical_vertices(2)).size();
  const std::size_t c3 = enumerate_facets(classical_vertices(3)).size();
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return {c2 == 24 && c3 == 684 && secs < 300.0, fmt("c(2)=%.0f c(3)=%.0f in %.2fs", double(c2), double(c3), secs)};
}

Outcome vertex_counts() {
  bool ok = true;
  std::string detail;
  for (int n = 1; n <= 6; ++n) {
    const std::size_t got = classical_vertices(n).vertices.size();
    ok = ok && got == (std::size_t{1} << (2 * n));
    detail += std::to_string(got) + (n < 6 ? "," : "");
  }
  return {ok, "counts " + detail};
}

Outcome ch_presence() {
  const auto facets = enumerate_facets(classical_vertices(2));
  const auto hit = find_facet(facets, clauser_horne_facet(2));
  return {hit.has_value(), hit ? "CH pattern found among 24 facets" : "CH pattern missing"};
}

Outcome brute_force_hull() {
  const VertexSet vs = classical_vertices(1);
  std::vector<std::array<long, 3>> pts;
  for (const auto& v : vs.vertices) pts.push_back({v[0], v[1], v[2]});
  const auto expect = oracle::brute_force_hull_3d(pts);
  std::set<std::array<long, 4>> got;
  for (const Facet& f : enumerate_facets(vs))
    got.insert({f.coeffs[0].convert_to<long>(), f.coeffs[1].convert_to<long>(), f.coeffs[2].convert_to<long>(),
                f.bound.convert_to<long>()});
  return {got == expect && got.size() == 4, fmt("%.0f facets, oracle %.0f", double(got.size()), double(expect.size()))};
}

Outcome diagonal_identity() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Index d = 1 + trial % 4;
    std::vector<double> c(static_cast<std::size_t>(d));
    double norm = 0.0;
    for (double& x : c) {
      x = u(rng);
      norm += x * x;
    }
    for (double& x : c) x /= std::sqrt(norm);
    std::sort(c.begin(), c.end(), std::greater<>());
    const ComplexMatrix e = oracle::random_projector(d, std::uniform_int_distribution<Index>(0, d)(rng), rng);
    const ComplexMatrix f = oracle::random_projector(d, std::uniform_int_distribution<Index>(0, d)(rng), rng);
    const double direct = oracle::kron_expectation(PureState::from_schmidt(c).vector(), e, f);
    worst = std::max(worst, std::abs(diag_form_evaluate(c, e, f) - direct));
  }
  return {worst <= 1e-12, fmt("max error %.3e over 1000 trials", worst)};
}

Outcome mixer() {
  std::mt19937_64 rng(102);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 3;
    const auto a = gen::random_representation(1 + trial % 3, 1 + (trial / 3) % 3, n, rng);
    const auto b = gen::random_representation(1 + (trial / 2) % 3, 1 + trial % 2, n, rng);
    const double lambda = u(rng);
    const RealMatrix expect = lambda * a.behavior().matrix() + (1.0 - lambda) * b.behavior().matrix();
    worst = std::max(worst, (mix_representations(a, b, lambda).behavior().matrix() - expect).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-12, fmt("max error %.3e over 100 pairs", worst)};
}

Outcome peeling() {
  std::mt19937_64 rng(103);
  double worst = 0.0, worst_sum = 0.0;
  bool nonneg = true;
  for (int trial = 0; trial < 100; ++trial) {
    const auto rep = gen::random_effect_representation(1 + trial % 3, 1 + (trial / 3) % 3, 1 + trial % 2, rng);
    const auto parts = effect_to_projection_mixture(rep);
    double total = 0.0;
    for (const auto& p : parts) {
      nonneg = nonneg && p.weight >= 0.0;
      total += p.weight;
    }
    worst_sum = std::max(worst_sum, std::abs(total - 1.0));
    worst = std::max(worst, (gen::mixture_behavior(parts) - rep.behavior().matrix()).cwiseAbs().maxCoeff());
  }
  return {worst <= 1e-12 && worst_sum <= 1e-12 && nonneg,
          fmt("reconstruction %.3e, weight sum error %.3e", worst, worst_sum)};
}

Outcome averaging() {
  std::mt19937_64 rng(104);
  double worst = 0.0;
  for (int k = 2; k <= 3; ++k)
    for (int trial = 0; trial < 10; ++trial) {
      std::vector<QuantumRepresentation> reps;
      RealMatrix mean = RealMatrix::Zero(3, 3);
      for (int r = 0; r < k; ++r) {
        reps.push_back(gen::random_representation(1 + (trial + r) % 2, 2, 2, rng));
        mean += reps.back().behavior().matrix() / double(k);
      }
      worst = std::max(worst, (average_witness(reps).behavior().matrix() - mean).cwiseAbs().maxCoeff());
    }
  return {worst <= 1e-10, fmt("max error %.3e for K=2,3", worst)};
}

Outcome clifford() {
  const auto [x, y] = oracle::chsh_vectors(2);
  const VectorRepresentation v(x, y);
  const CliffordRealization r = clifford_realize(v);
  const RealMatrix s = r.correlations();
  const double s_err = (s - v.correlations()).cwiseAbs().maxCoeff();
  const double chsh = s(0, 0) + s(0, 1) + s(1, 0) - s(1, 1);
  double marginal = 0.0;
  const ComplexMatrix id = ComplexMatrix::Identity(r.dim, r.dim);
  for (std::size_t i = 0; i < r.a.size(); ++i) {
    marginal = std::max(marginal, std::abs(expectation(r.state, r.a[i], id)));
    marginal = std::max(marginal, std::abs(expectation(r.state, id, r.b[i])));
  }
  const double margin = evaluate_functional(clauser_horne_facet(2), r.behavior());
  const bool ok = s_err <= 1e-12 && std::abs(chsh - 2.0 * std::sqrt(2.0)) <= 1e-9 && marginal <= 1e-12 &&
                  std::abs(margin - kChMargin) <= 1e-9;
  return {ok, fmt("s error %.3e, CHSH-2sqrt2 %.3e, CH margin error %.3e", s_err, chsh - 2.0 * std::sqrt(2.0),
                  margin - kChMargin) +
                  fmt(", marginals %.3e, dim %.0f", marginal, double(r.dim))};
}

Outcome gram() {
  RealMatrix s(2, 2), pr(2, 2);
  s << kR, kR, kR, -kR;
  pr << 1, 1, 1, -1;
  const GramResult a = gram_feasible(SignedCorrelationMatrix(s));
  const GramResult b = gram_feasible(SignedCorrelationMatrix(pr));
  const bool ok = a.member && a.reconstruction_residual <= 1e-7 && !b.member && b.gap > 1e-6;
  return {ok, fmt("CHSH residual %.3e; PR box gap %.3e", a.reconstruction_residual, b.gap)};
}

Outcome product_classical() {
  std::mt19937_64 rng(105);
  const VertexSet vs = classical_vertices(2);
  const auto catalog = enumerate_facets(vs);
  int inside = 0;
  double worst_residual = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const Index dl = 1 + trial % 3, dr = 1 + (trial / 3) % 3;
    const PureState w = PureState::product(oracle::random_state_vector(dl, rng), oracle::random_state_vector(dr, rng));
    ProjectionFamily e, f;
    for (int k = 0; k < 2; ++k) {
      e.push_back(random_projection(dl, std::uniform_int_distribution<Index>(0, dl)(rng), rng));
      f.push_back(random_projection(dr, std::uniform_int_distribution<Index>(0, dr)(rng), rng));
    }
    const MembershipCertificate cert = lp_membership(evaluate_behavior(MixedState::pure(w), e, f), vs, catalog);
    if (cert.verdict == Verdict::inside) {
      ++inside;
      worst_residual = std::max(worst_residual, cert.residual);
    }
  }
  return {inside == 200 && worst_residual <= 1e-9, fmt("%.0f/200 inside, max residual %.3e", inside, worst_residual)};
}

Outcome entangled_violation() {
  const Facet ch = clauser_horne_facet(2);
  double worst_closed = 0.0, worst_cross = 0.0, bell_err = 1.0;
  bool all_violate = true;
  for (int k = 1; k <= 50; ++k) {
    const double theta = (M_PI / 4.0) * k / 50.0;
    const double c1 = std::cos(theta), c2 = std::sin(theta);
    const PureState w = (k == 50) ? PureState::from_schmidt({kR, kR}) : PureState::from_schmidt({c1, c2});
    const TrajectoryPoint p = gisin_peres_settings(w);
    const double margin = evaluate_functional(ch, p.behavior);
    std::vector<ComplexMatrix> em, fm;
    for (const auto& x : p.e) em.push_back(x.matrix());
    for (const auto& x : p.f) fm.push_back(x.matrix());
    const RealMatrix q = oracle::kron_behavior(w.vector(), em, fm);
    const double direct = q(1, 1) + q(1, 2) + q(2, 1) - q(2, 2) - q(1, 0) - q(0, 1);
    all_violate = all_violate && margin > 0.0;
    worst_closed = std::max(worst_closed, std::abs(margin - oracle::ch_closed_form(c1, c2)));
    worst_cross = std::max(worst_cross, std::abs(direct - oracle::ch_closed_form(c1, c2)));
    if (k == 50) bell_err = std::abs(margin - kChMargin);
  }
  const bool ok = all_violate && worst_closed <= 1e-9 && worst_cross <= 1e-9 && bell_err <= 1e-9;
  return {ok, fmt("closed-form error %.3e, direct-evaluation error %.3e, Bell error %.3e", worst_closed, worst_cross,
                  bell_err)};
}

Outcome entanglement_measure_anchors() {
  EntanglementConfig cfg;
  cfg.seed = 2024;
  const double product = entanglement_measure(PureState::from_schmidt({1.0, 0.0}), 2, Norm::l2, cfg).value;
  const double bell = entanglement_measure(PureState::from_schmidt({kR, kR}), 2, Norm::l2, cfg).value;
  const double bound = (std::sqrt(2.0) - 1.0) / (2.0 * std::sqrt(6.0));

  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "qrange_acceptance";
  fs::create_directories(dir);
  {
    std::ofstream(dir / "bell.json") << R"({"schema_version":"1","kind":"pure_state","schmidt":[0.7071067811865476,0.7071067811865476]})";
  }
  auto run_once = [&](const fs::path& out) {
    const std::string in = (dir / "bell.json").string(), o = out.string();
    const char* argv[] = {"qrange", "entanglement", "--input", in.c_str(), "--seed", "7", "--out", o.c_str()};
    std::ostringstream so, se;
    return cli::run(8, argv, so, se);
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  const int ra = run_once(dir / "a.json"), rb = run_once(dir / "b.json");
  const bool identical = ra == 0 && rb == 0 && slurp(dir / "a.json") == slurp(dir / "b.json");
  fs::remove_all(dir);

  const bool ok = product <= 1e-6 && bell >= bound - 1e-6 && identical;
  return {ok, fmt("E(product)=%.3e, E(Bell)=%.9f (bound %.9f)", product, bell, bound) +
                  (identical ? ", fixed-seed outputs byte-identical" : ", outputs differ")};
}

Outcome nearest_point_oracle() {
  std::mt19937_64 rng(106);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  long max_iters = 0;
  for (int n = 1; n <= 2; ++n) {
    const VertexSet vs = classical_vertices(n);
    const RealMatrix v = vertex_matrix(vs);
    for (int trial = 0; trial < 100; ++trial) {
      RealVector x(vs.dim);
      for (Index k = 0; k < x.size(); ++k) x(k) = u(rng);
      const BehaviorMatrix b = BehaviorMatrix::from_free(n, x);
      const auto ref = oracle::projected_gradient_distance(v, x, 1000000);
      max_iters = std::max(max_iters, ref.iterations);
      worst = std::max(worst, std::abs(nearest_point(b, vs).distance - ref.distance));
    }
  }
  return {worst <= 1e-6, fmt("max |Wolfe - oracle| %.3e over 200 points (oracle <= %.0f iterations)", worst,
                             double(max_iters))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"facet counts c(2)=24, c(3)=684", facet_counts},
      {"vertex counts 2^(2n), n=1..6", vertex_counts},
      {"Clauser-Horne facet present in c(2)", ch_presence},
      {"n=1 facets match brute-force hull", brute_force_hull},
      {"diagonal-form expectation identity", diagonal_identity},
      {"direct-sum mixer", mixer},
      {"effect peeling into projection mixtures", peeling},
      {"finite-K averaging witness", averaging},
      {"Clifford realization of CHSH vectors", clifford},
      {"Gram completion: CHSH member, PR box infeasible", gram},
      {"product states stay in c(2)", product_classical},
      {"entangled two-qubit states violate CH", entangled_violation},
      {"entanglement measure anchors", entanglement_measure_anchors},
      {"nearest point vs projected-gradient oracle", nearest_point_oracle},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    Outcome o{false, ""};
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  " << (k + 1) << ". " << criteria[k].first << " -- " << o.detail
              << std::endl;
  }
  std::cout << (criteria.size() - failures) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failures == 0 ? 0 : 1;
}
