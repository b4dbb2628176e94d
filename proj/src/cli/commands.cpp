#include "qrange/cli/commands.hpp"

#include "qrange/cli/formats.hpp"
#include "qrange/error.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <optional>

namespace qrange::cli {

namespace {

struct Common {
  std::uint64_t seed = 0;
  std::string norm = "l2";
  std::string out;
};

void add_common(CLI::App* sub, Common& c) {
  sub->add_option("--seed", c.seed, "RNG seed, recorded in the output");
  sub->add_option("--norm", c.norm, "Distance norm")->check(CLI::IsMember({"l1", "l2", "linf"}));
  sub->add_option("--out", c.out, "Output path; stdout when omitted");
}

void emit(const Common& c, std::string_view command, json body, std::ostream& out) {
  body["command"] = command;
  body["seed"] = c.seed;
  body["norm"] = c.norm;
  const std::string text = finalize(std::move(body));
  if (c.out.empty())
    out << text;
  else
    write_atomic(c.out, text);
}

int threads_from_env() {
  const char* v = std::getenv(kThreadsEnv);
  if (v == nullptr || *v == '\0') return 1;
  char* end = nullptr;
  const long t = std::strtol(v, &end, 10);
  if (*end != '\0' || t < 1 || t > 1024)
    throw std::invalid_argument(std::string(kThreadsEnv) + " must be an integer in [1, 1024]");
  return static_cast<int>(t);
}

VertexSet vertex_set(const std::string& set, int n) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (set == "c") {
    if (n > kMaxClassicalN) throw SizeCapExceeded("c(n) vertices are capped at n = " + std::to_string(kMaxClassicalN));
    return classical_vertices(n);
  }
  if (n > kMaxQuantumClosureN)
    throw SizeCapExceeded("q(n) vertices are capped at n = " + std::to_string(kMaxQuantumClosureN));
  return q_closure_vertices(n);
}

json weights_json(const std::vector<VertexWeight>& ws, const VertexSet& vs) {
  json out = json::array();
  for (const VertexWeight& w : ws)
    out.push_back({{"index", w.vertex}, {"vertex", vs.vertices[w.vertex]}, {"weight", w.weight}});
  return out;
}

json vectors_json(const VectorRepresentation& v) {
  json x = json::array(), y = json::array();
  for (const RealVector& a : v.x()) x.push_back(to_json(a));
  for (const RealVector& b : v.y()) y.push_back(to_json(b));
  return {{"x", std::move(x)}, {"y", std::move(y)}};
}

json matrices_json(const std::vector<ComplexMatrix>& ms) {
  json out = json::array();
  for (const ComplexMatrix& m : ms) out.push_back(to_json(m));
  return out;
}

int cmd_vertices(const Common& c, const std::string& set, int n, std::ostream& out) {
  const VertexSet vs = vertex_set(set, n);
  json body = to_json(vs);
  body["kind"] = "vertex_set";
  body["input_digest"] = sha256_hex("vertices --set " + set + " --n " + std::to_string(n));
  emit(c, "vertices", std::move(body), out);
  return kExitSuccess;
}

int cmd_facets(const Common& c, const std::string& set, int n, std::ostream& out) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (n > kMaxFacetsN) throw SizeCapExceeded("facet enumeration is capped at n = " + std::to_string(kMaxFacetsN));
  const VertexSet vs = vertex_set(set, n);
  std::vector<Facet> facets = enumerate_facets(vs);
  std::sort(facets.begin(), facets.end());
  json body = to_json(vs);
  body["kind"] = "facet_catalog";
  body["input_digest"] = sha256_hex("facets --set " + set + " --n " + std::to_string(n));
  body["facet_count"] = facets.size();
  json fs = json::array();
  for (const Facet& f : facets) fs.push_back(to_json(f));
  body["facets"] = std::move(fs);
  emit(c, "facets", std::move(body), out);
  return kExitSuccess;
}

struct MemberArgs {
  std::string set;
  std::optional<int> n;
  std::string input;
  std::string catalog;
  long max_iterations = GramOptions{}.max_iterations;
};

int cmd_member(const Common& c, const MemberArgs& a, std::ostream& out) {
  const Document doc = read_document(a.input, "behavior");
  const BehaviorMatrix b = behavior_from_json(doc.body);
  const int n = b.n();
  if (a.n && *a.n != n) throw FormatError("--n " + std::to_string(*a.n) + " does not match the input (n = " + std::to_string(n) + ")");
  json body = {{"kind", "membership_certificate"}, {"set", a.set}, {"n", n}, {"input_digest", doc.digest},
               {"behavior", to_json(b)}};

  if (a.set == "bell0") {
    bool half = true;
    for (int k = 1; k <= n; ++k) half = half && std::abs(b(k, 0) - 0.5) <= 1e-9 && std::abs(b(0, k) - 0.5) <= 1e-9;
    if (!half) {
      body["verdict"] = "outside";
      body["reason"] = "marginals differ from 1/2";
      emit(c, "member", std::move(body), out);
      return kExitNegative;
    }
    GramOptions opt;
    opt.max_iterations = a.max_iterations;
    const SignedCorrelationMatrix s = bell_to_tsirelson(b);
    const GramResult g = gram_feasible(s, opt);
    body["correlations"] = to_json(s.matrix());
    body["verdict"] = g.member ? "inside" : "outside";
    body["residual"] = g.residual;
    body["gap"] = g.gap;
    body["iterations"] = g.iterations;
    if (g.member) {
      body["vectors"] = vectors_json(*g.vectors);
      body["reconstruction_residual"] = g.reconstruction_residual;
    }
    emit(c, "member", std::move(body), out);
    return g.member ? kExitSuccess : kExitNegative;
  }

  const int cap = a.set == "c" ? kMaxMemberClassicalN : kMaxMemberQuantumN;
  if (n > cap) throw SizeCapExceeded("membership in " + a.set + "(n) is capped at n = " + std::to_string(cap));
  const VertexSet vs = vertex_set(a.set, n);
  std::vector<Facet> catalog;
  if (!a.catalog.empty()) {
    const Document cat = read_document(a.catalog, "facet_catalog");
    if (cat.body.value("n", -1) != n || cat.body.value("set", "") != a.set)
      throw FormatError("catalog does not match set " + a.set + " with n = " + std::to_string(n));
    catalog = catalog_from_json(cat.body);
    body["catalog_digest"] = cat.digest;
  } else if ((a.set == "c" && n <= 3) || (a.set == "q" && n <= 2)) {
    catalog = enumerate_facets(vs);
  }
  const MembershipCertificate cert = lp_membership(b, vs, catalog);
  body["coordinate_order"] = coordinate_order(n);
  body["verdict"] = cert.verdict == Verdict::inside ? "inside" : "outside";
  if (cert.verdict == Verdict::inside) {
    body["weights"] = weights_json(cert.weights, vs);
    body["residual"] = cert.residual;
  } else {
    body["separating_facet"] = to_json(*cert.separating);
    body["margin"] = cert.margin;
    body["separating_from_catalog"] = cert.separating_from_catalog;
  }
  emit(c, "member", std::move(body), out);
  return cert.verdict == Verdict::inside ? kExitSuccess : kExitNegative;
}

int cmd_violate(const Common& c, const std::string& input, int n, std::ostream& out) {
  const Document doc = read_document(input, "pure_state");
  const PureState w = state_from_json(doc.body);
  const TrajectoryPoint p = gisin_peres_settings(w, n);
  const Facet ch = clauser_horne_facet(n);
  const double margin = evaluate_functional(ch, p.behavior);
  json body = {{"kind", "trajectory_point"}, {"n", n},
               {"input_digest", doc.digest}, {"point", to_json(p)},
               {"ch_facet", to_json(ch)},    {"ch_margin", margin},
               {"violated", margin > 0.0}};
  emit(c, "violate", std::move(body), out);
  return kExitSuccess;
}

struct EntanglementArgs {
  std::string input;
  int n = 2;
  int restarts = EntanglementConfig{}.restarts;
  long max_iterations = EntanglementConfig{}.max_iterations;
  long dim = 0;
};

int cmd_entanglement(const Common& c, const EntanglementArgs& a, std::ostream& out) {
  const Document doc = read_document(a.input, "pure_state");
  const PureState w = state_from_json(doc.body);
  EntanglementConfig cfg;
  cfg.restarts = a.restarts;
  cfg.max_iterations = a.max_iterations;
  cfg.seed = c.seed;
  cfg.dim = a.dim;
  cfg.threads = threads_from_env();
  const Norm norm = parse_norm(c.norm);
  const EntanglementReport r = entanglement_measure(w, a.n, norm, cfg);
  const VertexSet vs = classical_vertices(a.n);
  json body = {{"kind", "entanglement_report"},
               {"n", a.n},
               {"input_digest", doc.digest},
               {"value", r.value},
               {"lower_bound", r.lower_bound},
               {"best_restart", r.best_restart},
               {"restart_values", r.restart_values},
               {"iterations", r.iterations},
               {"config", {{"restarts", cfg.restarts}, {"max_iterations", cfg.max_iterations}, {"dim", r.best.dim}}},
               {"best_point", to_json(r.best)},
               {"nearest_classical", {{"behavior", to_json(r.nearest.point)}, {"weights", weights_json(r.nearest.weights, vs)}}}};
  emit(c, "entanglement", std::move(body), out);
  return kExitSuccess;
}

int cmd_realize(const Common& c, const std::string& input, long max_iterations, std::ostream& out) {
  const Document doc = read_document(input, "correlation_matrix");
  const SignedCorrelationMatrix s = correlation_from_json(doc.body);
  GramOptions opt;
  opt.max_iterations = max_iterations;
  const GramResult g = gram_feasible(s, opt);
  json body = {{"kind", "realization"}, {"n", s.n()},        {"input_digest", doc.digest},
               {"matrix", to_json(s.matrix())}, {"member", g.member}, {"residual", g.residual},
               {"gap", g.gap},          {"iterations", g.iterations}};
  if (!g.member) {
    emit(c, "realize", std::move(body), out);
    return kExitNegative;
  }
  const CliffordRealization r = clifford_realize(*g.vectors);
  const RealMatrix realized = r.correlations();
  body["vectors"] = vectors_json(*g.vectors);
  body["dim"] = r.dim;
  body["configuration_rank"] = r.configuration_rank;
  body["state"] = to_json(r.state);
  body["observables"] = {{"a", matrices_json(r.a)}, {"b", matrices_json(r.b)}};
  body["realized_matrix"] = to_json(realized);
  body["realization_residual"] = (realized - s.matrix()).cwiseAbs().maxCoeff();
  body["behavior"] = to_json(r.behavior());
  emit(c, "realize", std::move(body), out);
  return kExitSuccess;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Classical and quantum ranges of bipartite probability matrices"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "qrange 1.0");

  Common common;
  std::string set;
  int n = 0;
  std::function<int()> action;

  auto* vertices = app.add_subcommand("vertices", "Write the vertex set of c(n) or the closure of q(n)");
  add_common(vertices, common);
  vertices->add_option("--set", set, "c or q")->required()->check(CLI::IsMember({"c", "q"}));
  vertices->add_option("--n", n, "Number of measurements per side")->required();
  vertices->callback([&] { action = [&] { return cmd_vertices(common, set, n, out); }; });

  auto* facets = app.add_subcommand("facets", "Enumerate the facet catalog exactly");
  add_common(facets, common);
  facets->add_option("--set", set, "c or q")->required()->check(CLI::IsMember({"c", "q"}));
  facets->add_option("--n", n, "Number of measurements per side")->required();
  facets->callback([&] { action = [&] { return cmd_facets(common, set, n, out); }; });

  MemberArgs member_args;
  auto* member = app.add_subcommand("member", "Decide membership of a behavior file");
  add_common(member, common);
  member->add_option("--set", member_args.set, "c, q or bell0")->required()->check(CLI::IsMember({"c", "q", "bell0"}));
  member->add_option("--n", member_args.n, "Expected n (checked against the input)");
  member->add_option("--input", member_args.input, "Behavior JSON")->required();
  member->add_option("--catalog", member_args.catalog, "Facet catalog JSON for separating certificates");
  member->add_option("--max-iterations", member_args.max_iterations, "Iteration cap for the bell0 test");
  member->callback([&] { action = [&] { return cmd_member(common, member_args, out); }; });

  std::string input;
  int violate_n = 2;
  auto* violate = app.add_subcommand("violate", "Clauser-Horne violating settings for an entangled state");
  add_common(violate, common);
  violate->add_option("--input", input, "Pure state JSON")->required();
  violate->add_option("--n", violate_n, "Number of measurements per side (>= 2)");
  violate->callback([&] { action = [&] { return cmd_violate(common, input, violate_n, out); }; });

  EntanglementArgs ent_args;
  auto* entanglement = app.add_subcommand("entanglement", "Maximal distance of a state's behaviors from c(n)");
  add_common(entanglement, common);
  entanglement->add_option("--input", ent_args.input, "Pure state JSON")->required();
  entanglement->add_option("--n", ent_args.n, "Number of measurements per side");
  entanglement->add_option("--restarts", ent_args.restarts, "Optimizer restarts");
  entanglement->add_option("--max-iterations", ent_args.max_iterations, "Optimizer iterations per restart");
  entanglement->add_option("--dim", ent_args.dim, "Local dimension (default: max(2, Schmidt rank))");
  entanglement->callback([&] { action = [&] { return cmd_entanglement(common, ent_args, out); }; });

  long realize_iterations = GramOptions{}.max_iterations;
  auto* realize = app.add_subcommand("realize", "Realize a correlation matrix with Clifford observables");
  add_common(realize, common);
  realize->add_option("--input", input, "Correlation matrix JSON")->required();
  realize->add_option("--max-iterations", realize_iterations, "Iteration cap for the completion test");
  realize->callback([&] { action = [&] { return cmd_realize(common, input, realize_iterations, out); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitSuccess : kExitUsage;
  }

  try {
    return action();
  } catch (const SizeCapExceeded& e) {
    err << "error: " << e.what() << "\n";
    return kExitCap;
  } catch (const Undecided& e) {
    err << "undecided: " << e.what() << "\n";
    return kExitUndecided;
  } catch (const Infeasible& e) {
    err << "infeasible: " << e.what() << "\n";
    return kExitNegative;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
}

}  // namespace qrange::cli
