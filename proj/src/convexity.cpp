#include "qrange/convexity.hpp"

#include "qrange/error.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qrange {

namespace {

constexpr double kSpectralMerge = 1e-10;
constexpr double kEffectSpectrumSlack = 1e-9;

void check_family_dims(const ProjectionFamily& fam, Index dim, const char* what) {
  for (const auto& p : fam)
    if (p.dim() != dim) throw std::invalid_argument(what);
}

// Embeds each Schmidt basis column into the block starting at `offset` of a
// space of dimension `total`.
ComplexMatrix embed_rows(const ComplexMatrix& basis, Index offset, Index total) {
  ComplexMatrix out = ComplexMatrix::Zero(total, basis.cols());
  out.middleRows(offset, basis.rows()) = basis;
  return out;
}

struct SpectralTerm {
  double weight;
  ComplexMatrix projection;
};

// Cumulative spectral projections of an effect with their gap weights.
std::vector<SpectralTerm> peel(const ComplexMatrix& a) {
  const Index d = a.rows();
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(0.5 * (a + a.adjoint()));
  const RealVector& values = eig.eigenvalues();  // ascending
  const ComplexMatrix& vectors = eig.eigenvectors();

  struct Cluster {
    double value;
    std::vector<Index> columns;
  };
  std::vector<Cluster> clusters;  // descending
  for (Index k = d - 1; k >= 0; --k) {
    const double v = std::clamp(values(k), 0.0, 1.0);
    if (!clusters.empty() && clusters.back().value - v <= kSpectralMerge) {
      auto& c = clusters.back();
      c.value = (c.value * static_cast<double>(c.columns.size()) + v) / static_cast<double>(c.columns.size() + 1);
      c.columns.push_back(k);
    } else {
      clusters.push_back({v, {k}});
    }
  }
  for (auto& c : clusters) {
    if (std::abs(c.value - 1.0) <= kSpectralMerge) c.value = 1.0;
    if (c.value <= kSpectralMerge) c.value = 0.0;
  }
  std::erase_if(clusters, [](const Cluster& c) { return c.value == 0.0; });

  std::vector<SpectralTerm> out;
  ComplexMatrix cumulative = ComplexMatrix::Zero(d, d);
  for (std::size_t k = 0; k < clusters.size(); ++k) {
    for (Index col : clusters[k].columns) cumulative += vectors.col(col) * vectors.col(col).adjoint();
    const double next = k + 1 < clusters.size() ? clusters[k + 1].value : 0.0;
    const double w = clusters[k].value - next;
    if (w > 0.0) out.push_back({w, 0.5 * (cumulative + cumulative.adjoint())});
  }
  const double top = clusters.empty() ? 0.0 : clusters.front().value;
  if (1.0 - top > 0.0) out.push_back({1.0 - top, ComplexMatrix::Zero(d, d)});
  return out;
}

}  // namespace

QuantumRepresentation::QuantumRepresentation(MixedState state, ProjectionFamily e, ProjectionFamily f)
    : state_(std::move(state)), e_(std::move(e)), f_(std::move(f)) {
  if (e_.empty() || e_.size() != f_.size())
    throw std::invalid_argument("representation: families must be non-empty and of equal size");
  check_family_dims(e_, state_.dim_left(), "representation: left projection dimension mismatch");
  check_family_dims(f_, state_.dim_right(), "representation: right projection dimension mismatch");
}

bool EffectRepresentation::is_effect(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || !all_finite(m)) return false;
  if (max_abs(m - m.adjoint()) > tol::kOperator) return false;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(0.5 * (m + m.adjoint()), Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff() >= -kEffectSpectrumSlack &&
         eig.eigenvalues().maxCoeff() <= 1.0 + kEffectSpectrumSlack;
}

EffectRepresentation::EffectRepresentation(MixedState state, std::vector<ComplexMatrix> a,
                                           std::vector<ComplexMatrix> b)
    : state_(std::move(state)), a_(std::move(a)), b_(std::move(b)) {
  if (a_.empty() || a_.size() != b_.size())
    throw std::invalid_argument("effect representation: families must be non-empty and of equal size");
  for (const auto& m : a_) {
    if (m.rows() != state_.dim_left()) throw std::invalid_argument("effect representation: left dimension mismatch");
    if (!is_effect(m)) throw std::invalid_argument("effect representation: operator spectrum outside [0,1]");
  }
  for (const auto& m : b_) {
    if (m.rows() != state_.dim_right()) throw std::invalid_argument("effect representation: right dimension mismatch");
    if (!is_effect(m)) throw std::invalid_argument("effect representation: operator spectrum outside [0,1]");
  }
}

BehaviorMatrix EffectRepresentation::behavior() const {
  const int m = n();
  const ComplexMatrix il = ComplexMatrix::Identity(state_.dim_left(), state_.dim_left());
  const ComplexMatrix ir = ComplexMatrix::Identity(state_.dim_right(), state_.dim_right());
  RealMatrix q = RealMatrix::Zero(m + 1, m + 1);
  for (const auto& term : state_.terms())
    for (int i = 0; i <= m; ++i)
      for (int j = 0; j <= m; ++j) {
        const ComplexMatrix& ai = i == 0 ? il : a_[static_cast<std::size_t>(i) - 1];
        const ComplexMatrix& bj = j == 0 ? ir : b_[static_cast<std::size_t>(j) - 1];
        q(i, j) += term.weight * expectation(term.state, ai, bj).real();
      }
  q(0, 0) = 1.0;
  return BehaviorMatrix(std::move(q));
}

QuantumRepresentation mix_representations(const QuantumRepresentation& rep_a,
                                          const QuantumRepresentation& rep_b, double lambda) {
  if (rep_a.n() != rep_b.n()) throw std::invalid_argument("mix_representations: n differs");
  if (!(lambda >= 0.0 && lambda <= 1.0)) throw std::invalid_argument("mix_representations: lambda outside [0,1]");

  const Index la = rep_a.state().dim_left(), lb = rep_b.state().dim_left();
  const Index ra = rep_a.state().dim_right(), rb = rep_b.state().dim_right();

  std::vector<MixedState::Term> terms;
  for (const auto& t : rep_a.state().terms()) {
    const double w = lambda * t.weight;
    if (w == 0.0) continue;
    terms.push_back({w, PureState(t.state.schmidt(), embed_rows(t.state.basis_left(), 0, la + lb),
                                  embed_rows(t.state.basis_right(), 0, ra + rb))});
  }
  for (const auto& t : rep_b.state().terms()) {
    const double w = (1.0 - lambda) * t.weight;
    if (w == 0.0) continue;
    terms.push_back({w, PureState(t.state.schmidt(), embed_rows(t.state.basis_left(), la, la + lb),
                                  embed_rows(t.state.basis_right(), ra, ra + rb))});
  }

  ProjectionFamily e, f;
  for (int i = 0; i < rep_a.n(); ++i) {
    const auto k = static_cast<std::size_t>(i);
    e.emplace_back(direct_sum(rep_a.e()[k].matrix(), rep_b.e()[k].matrix()));
    f.emplace_back(direct_sum(rep_a.f()[k].matrix(), rep_b.f()[k].matrix()));
  }
  return QuantumRepresentation(MixedState(std::move(terms)), std::move(e), std::move(f));
}

std::vector<WeightedRepresentation> effect_to_projection_mixture(const EffectRepresentation& rep) {
  if (!rep.state().is_pure())
    throw std::invalid_argument("effect_to_projection_mixture: state must be pure");
  const int n = rep.n();

  struct Partial {
    double weight;
    std::vector<ComplexMatrix> ops;  // A_1..A_n, B_1..B_n
  };
  std::vector<Partial> partials(1);
  partials[0].weight = 1.0;
  partials[0].ops.insert(partials[0].ops.end(), rep.a().begin(), rep.a().end());
  partials[0].ops.insert(partials[0].ops.end(), rep.b().begin(), rep.b().end());

  for (std::size_t k = 0; k < static_cast<std::size_t>(2 * n); ++k) {
    // The spectral data depend only on the original operator.
    const std::vector<SpectralTerm> pieces = peel(partials.front().ops[k]);
    std::vector<Partial> next;
    next.reserve(partials.size() * pieces.size());
    for (const auto& p : partials)
      for (const auto& piece : pieces) {
        Partial q{p.weight * piece.weight, p.ops};
        q.ops[k] = piece.projection;
        next.push_back(std::move(q));
      }
    partials = std::move(next);
  }

  std::vector<WeightedRepresentation> out;
  out.reserve(partials.size());
  for (auto& p : partials) {
    ProjectionFamily e, f;
    for (int i = 0; i < n; ++i) e.emplace_back(p.ops[static_cast<std::size_t>(i)]);
    for (int j = 0; j < n; ++j) f.emplace_back(p.ops[static_cast<std::size_t>(n + j)]);
    out.push_back({p.weight, QuantumRepresentation(rep.state(), std::move(e), std::move(f))});
  }
  return out;
}

QuantumRepresentation average_witness(std::span<const QuantumRepresentation> reps) {
  if (reps.empty()) throw std::invalid_argument("average_witness: no representations");
  const int n = reps.front().n();
  for (const auto& r : reps)
    if (r.n() != n) throw std::invalid_argument("average_witness: n differs between inputs");

  const auto k_count = static_cast<Index>(reps.size());
  Index total_left = 1, total_right = 1;
  for (const auto& r : reps) {
    total_left *= r.state().dim_left() + 1;
    total_right *= r.state().dim_right() + 1;
    if (k_count * total_left > kAverageWitnessCap || k_count * total_right > kAverageWitnessCap)
      throw SizeCapExceeded("average_witness: tensor product exceeds the size cap");
  }

  auto anchor = [](Index dim) {
    ComplexVector w = ComplexVector::Zero(dim + 1);
    w(dim) = 1.0;
    return w;
  };
  auto extend = [](const ComplexMatrix& p) {
    return direct_sum(p, ComplexMatrix::Identity(1, 1));
  };
  // Kronecker product over slots of the column chosen for each slot.
  auto slot_product = [&](std::size_t slot, const ComplexVector& own, bool left) {
    ComplexMatrix acc = ComplexMatrix::Identity(1, 1);
    for (std::size_t s = 0; s < reps.size(); ++s) {
      const Index d = left ? reps[s].state().dim_left() : reps[s].state().dim_right();
      ComplexVector v = s == slot ? ComplexVector(own) : anchor(d);
      acc = kron(acc, v);
    }
    return acc;
  };

  std::vector<MixedState::Term> terms;
  const double scale = 1.0 / static_cast<double>(k_count);
  for (std::size_t r = 0; r < reps.size(); ++r) {
    for (const auto& t : reps[r].state().terms()) {
      const auto m = t.state.basis_left().cols();
      ComplexMatrix left(total_left, m), right(total_right, m);
      for (Index l = 0; l < m; ++l) {
        ComplexVector a = ComplexVector::Zero(t.state.dim_left() + 1);
        a.head(t.state.dim_left()) = t.state.basis_left().col(l);
        ComplexVector b = ComplexVector::Zero(t.state.dim_right() + 1);
        b.head(t.state.dim_right()) = t.state.basis_right().col(l);
        left.col(l) = slot_product(r, a, true);
        right.col(l) = slot_product(r, b, false);
      }
      terms.push_back({scale * t.weight, PureState(t.state.schmidt(), std::move(left), std::move(right))});
    }
  }

  ProjectionFamily e, f;
  for (int i = 0; i < n; ++i) {
    ComplexMatrix ek = ComplexMatrix::Identity(1, 1), fk = ComplexMatrix::Identity(1, 1);
    for (const auto& r : reps) {
      ek = kron(ek, extend(r.e()[static_cast<std::size_t>(i)].matrix()));
      fk = kron(fk, extend(r.f()[static_cast<std::size_t>(i)].matrix()));
    }
    e.emplace_back(std::move(ek));
    f.emplace_back(std::move(fk));
  }
  return QuantumRepresentation(MixedState(std::move(terms)), std::move(e), std::move(f));
}

}  // namespace qrange
