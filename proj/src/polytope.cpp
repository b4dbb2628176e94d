#include "qrange/polytope.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>

namespace qrange {

namespace {

using Row = std::vector<long long>;

class Bitset {
 public:
  explicit Bitset(std::size_t bits = 0) : words_((bits + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return (words_[i / 64] >> (i % 64)) & 1U; }
  static std::size_t count_and(const Bitset& a, const Bitset& b) {
    std::size_t c = 0;
    for (std::size_t k = 0; k < a.words_.size(); ++k) c += static_cast<std::size_t>(std::popcount(a.words_[k] & b.words_[k]));
    return c;
  }
  static Bitset intersect(const Bitset& a, const Bitset& b) {
    Bitset out;
    out.words_.resize(a.words_.size());
    for (std::size_t k = 0; k < a.words_.size(); ++k) out.words_[k] = a.words_[k] & b.words_[k];
    return out;
  }

 private:
  std::vector<std::uint64_t> words_;
};

// Rank by fraction-free (Bareiss) elimination, stopping once `stop_at` is
// reached. Every intermediate entry is a minor of the input, so the
// divisions are exact.
int bareiss_rank_big(std::vector<std::vector<BigInt>> a, int stop_at) {
  const std::size_t rows = a.size();
  if (rows == 0) return 0;
  const std::size_t cols = a.front().size();
  BigInt prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[r], a[p]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) a[i][j] = (a[r][c] * a[i][j] - a[i][c] * a[r][j]) / prev;
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
    if (static_cast<int>(r) >= stop_at) break;
  }
  return static_cast<int>(r);
}

int integer_rank(const std::vector<const Row*>& input, int stop_at) {
  const std::size_t rows = input.size();
  if (rows == 0) return 0;
  const std::size_t cols = input.front()->size();
  std::vector<Row> a;
  a.reserve(rows);
  for (const Row* row : input) a.push_back(*row);

  long long prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[r], a[p]);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        const __int128 v = (static_cast<__int128>(a[r][c]) * a[i][j] - static_cast<__int128>(a[i][c]) * a[r][j]) / prev;
        if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min()) {
          std::vector<std::vector<BigInt>> big;
          for (const Row* row : input) big.emplace_back(row->begin(), row->end());
          return bareiss_rank_big(std::move(big), stop_at);
        }
        a[i][j] = static_cast<long long>(v);
      }
      a[i][c] = 0;
    }
    prev = a[r][c];
    ++r;
    if (static_cast<int>(r) >= stop_at) break;
  }
  return static_cast<int>(r);
}

BigInt vector_gcd(const std::vector<BigInt>& v) {
  BigInt g = 0;
  for (const auto& x : v) {
    if (x != 0) g = g == 0 ? BigInt(abs(x)) : BigInt(boost::multiprecision::gcd(g, x));
    if (g == 1) break;
  }
  return g;
}

void reduce(std::vector<BigInt>& v) {
  const BigInt g = vector_gcd(v);
  if (g > 1)
    for (auto& x : v) x /= g;
}

BigInt dot(const Row& r, const std::vector<BigInt>& y) {
  BigInt s = 0;
  for (std::size_t k = 0; k < r.size(); ++k)
    if (r[k] != 0) s += r[k] * y[k];
  return s;
}

Row lift(const std::vector<int>& v) {
  Row r(v.size() + 1);
  r[0] = 1;
  std::copy(v.begin(), v.end(), r.begin() + 1);
  return r;
}

// Columns of B^{-1}, scaled to primitive integer vectors. B is square and
// non-singular.
std::vector<std::vector<BigInt>> inverse_columns(const std::vector<Row>& b) {
  const std::size_t d = b.size();
  std::vector<std::vector<BigRational>> m(d, std::vector<BigRational>(2 * d));
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = 0; j < d; ++j) m[i][j] = b[i][j];
    m[i][d + i] = 1;
  }
  for (std::size_t c = 0; c < d; ++c) {
    std::size_t p = c;
    while (m[p][c] == 0) ++p;
    std::swap(m[c], m[p]);
    const BigRational piv = m[c][c];
    for (auto& x : m[c]) x /= piv;
    for (std::size_t i = 0; i < d; ++i) {
      if (i == c || m[i][c] == 0) continue;
      const BigRational f = m[i][c];
      for (std::size_t j = 0; j < 2 * d; ++j) m[i][j] -= f * m[c][j];
    }
  }
  std::vector<std::vector<BigInt>> cols(d);
  for (std::size_t j = 0; j < d; ++j) {
    BigInt l = 1;
    for (std::size_t i = 0; i < d; ++i) l = boost::multiprecision::lcm(l, BigInt(denominator(m[i][d + j])));
    cols[j].resize(d);
    for (std::size_t i = 0; i < d; ++i) {
      const BigRational v = m[i][d + j] * l;
      cols[j][i] = numerator(v);
    }
    reduce(cols[j]);
  }
  return cols;
}

struct Ray {
  std::vector<BigInt> y;
  Bitset zeros;
};

}  // namespace

std::strong_ordering operator<=>(const Facet& x, const Facet& y) {
  const std::size_t n = std::min(x.coeffs.size(), y.coeffs.size());
  for (std::size_t k = 0; k < n; ++k) {
    if (x.coeffs[k] < y.coeffs[k]) return std::strong_ordering::less;
    if (y.coeffs[k] < x.coeffs[k]) return std::strong_ordering::greater;
  }
  if (x.coeffs.size() != y.coeffs.size()) return x.coeffs.size() <=> y.coeffs.size();
  if (x.bound < y.bound) return std::strong_ordering::less;
  if (y.bound < x.bound) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

BigInt Facet::slack(std::span<const int> point) const {
  if (point.size() != coeffs.size()) throw std::invalid_argument("facet: point dimension mismatch");
  BigInt s = -bound;
  for (std::size_t k = 0; k < coeffs.size(); ++k)
    if (point[k] != 0) s += coeffs[k] * point[k];
  return s;
}

std::string coordinate_order(int n) {
  std::string out;
  auto add = [&](int i, int j) {
    if (!out.empty()) out += ',';
    out += "p" + std::to_string(i) + std::to_string(j);
  };
  for (int i = 1; i <= n; ++i) add(i, 0);
  for (int j = 1; j <= n; ++j) add(0, j);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) add(i, j);
  return out;
}

int free_index(int n, int i, int j) {
  if (i < 0 || j < 0 || i > n || j > n || (i == 0 && j == 0))
    throw std::invalid_argument("free_index: index out of range");
  if (j == 0) return i - 1;
  if (i == 0) return n + j - 1;
  return 2 * n + (i - 1) * n + (j - 1);
}

VertexSet classical_vertices(int n) {
  if (n < 1 || n > kMaxClassicalN) throw std::invalid_argument("classical_vertices: n must be in 1..8");
  VertexSet vs{PolytopeKind::classical, n, n * n + 2 * n, {}};
  const std::uint32_t count = std::uint32_t{1} << n;
  vs.vertices.reserve(static_cast<std::size_t>(count) * count);
  for (std::uint32_t eps = 0; eps < count; ++eps)
    for (std::uint32_t del = 0; del < count; ++del) {
      std::vector<int> v(static_cast<std::size_t>(vs.dim), 0);
      for (int i = 1; i <= n; ++i) {
        const int e = static_cast<int>((eps >> (i - 1)) & 1U);
        const int d = static_cast<int>((del >> (i - 1)) & 1U);
        v[static_cast<std::size_t>(free_index(n, i, 0))] = e;
        v[static_cast<std::size_t>(free_index(n, 0, i))] = d;
      }
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
          v[static_cast<std::size_t>(free_index(n, i, j))] =
              v[static_cast<std::size_t>(free_index(n, i, 0))] * v[static_cast<std::size_t>(free_index(n, 0, j))];
      vs.vertices.push_back(std::move(v));
    }
  std::sort(vs.vertices.begin(), vs.vertices.end());
  return vs;
}

VertexSet q_closure_vertices(int n) {
  if (n < 1 || n > kMaxQuantumClosureN) throw std::invalid_argument("q_closure_vertices: n must be in 1..4");
  VertexSet vs{PolytopeKind::quantum_closure, n, n * n + 2 * n, {}};
  const std::uint32_t count = std::uint32_t{1} << n;
  for (std::uint32_t eps = 0; eps < count; ++eps)
    for (std::uint32_t del = 0; del < count; ++del) {
      std::vector<int> allowed;  // joint coordinates that may be 1
      std::vector<int> base(static_cast<std::size_t>(vs.dim), 0);
      for (int i = 1; i <= n; ++i) {
        base[static_cast<std::size_t>(free_index(n, i, 0))] = static_cast<int>((eps >> (i - 1)) & 1U);
        base[static_cast<std::size_t>(free_index(n, 0, i))] = static_cast<int>((del >> (i - 1)) & 1U);
      }
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
          if (((eps >> (i - 1)) & 1U) && ((del >> (j - 1)) & 1U)) allowed.push_back(free_index(n, i, j));
      const std::uint64_t subsets = std::uint64_t{1} << allowed.size();
      for (std::uint64_t s = 0; s < subsets; ++s) {
        std::vector<int> v = base;
        for (std::size_t k = 0; k < allowed.size(); ++k)
          if ((s >> k) & 1U) v[static_cast<std::size_t>(allowed[k])] = 1;
        vs.vertices.push_back(std::move(v));
      }
    }
  std::sort(vs.vertices.begin(), vs.vertices.end());
  return vs;
}

Facet canonicalize_facet(std::span<const BigInt> coeffs, const BigInt& bound, Sense sense) {
  if (std::all_of(coeffs.begin(), coeffs.end(), [](const BigInt& c) { return c == 0; }))
    throw std::invalid_argument("canonicalize_facet: zero coefficient vector");
  std::vector<BigInt> all(coeffs.begin(), coeffs.end());
  all.push_back(bound);
  reduce(all);
  if (sense == Sense::greater_equal)
    for (auto& x : all) x = -x;
  Facet f;
  f.bound = all.back();
  all.pop_back();
  f.coeffs = std::move(all);
  return f;
}

Facet canonicalize_facet(std::span<const BigRational> coeffs, const BigRational& bound, Sense sense) {
  BigInt l = denominator(bound);
  for (const auto& c : coeffs) l = boost::multiprecision::lcm(l, BigInt(denominator(c)));
  std::vector<BigInt> ints;
  ints.reserve(coeffs.size());
  for (const auto& c : coeffs) ints.push_back(numerator(BigRational(c * l)));
  const BigInt b = numerator(BigRational(bound * l));
  return canonicalize_facet(std::span<const BigInt>(ints), b, sense);
}

bool is_facet_of(const Facet& facet, const VertexSet& vs) {
  if (static_cast<int>(facet.coeffs.size()) != vs.dim) return false;
  std::vector<Row> tight;
  for (const auto& v : vs.vertices) {
    const BigInt s = facet.slack(v);
    if (s > 0) return false;
    if (s == 0) tight.push_back(lift(v));
  }
  std::vector<const Row*> ptrs;
  for (const auto& r : tight) ptrs.push_back(&r);
  return integer_rank(ptrs, vs.dim) == vs.dim;
}

std::vector<Facet> enumerate_facets(const VertexSet& vs) {
  const std::size_t d = static_cast<std::size_t>(vs.dim) + 1;
  std::vector<std::vector<int>> sorted = vs.vertices;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::vector<Row> lifted;
  lifted.reserve(sorted.size());
  for (const auto& v : sorted) {
    if (v.size() + 1 != d) throw std::invalid_argument("enumerate_facets: vertex dimension mismatch");
    lifted.push_back(lift(v));
  }

  // Greedy basis in lexicographic order; basis rows are processed first.
  std::vector<std::size_t> order;
  std::vector<const Row*> chosen;
  std::vector<bool> in_basis(lifted.size(), false);
  for (std::size_t k = 0; k < lifted.size() && chosen.size() < d; ++k) {
    chosen.push_back(&lifted[k]);
    if (integer_rank(chosen, static_cast<int>(d)) == static_cast<int>(chosen.size())) {
      order.push_back(k);
      in_basis[k] = true;
    } else {
      chosen.pop_back();
    }
  }
  if (order.size() < d) throw std::invalid_argument("enumerate_facets: vertices do not affinely span the space");
  for (std::size_t k = 0; k < lifted.size(); ++k)
    if (!in_basis[k]) order.push_back(k);

  std::vector<const Row*> rows;
  rows.reserve(order.size());
  for (auto k : order) rows.push_back(&lifted[k]);

  std::vector<Row> basis;
  for (std::size_t k = 0; k < d; ++k) basis.push_back(*rows[k]);
  auto initial = inverse_columns(basis);

  std::vector<Ray> rays;
  for (std::size_t j = 0; j < d; ++j) {
    Ray ray{std::move(initial[j]), Bitset(rows.size())};
    for (std::size_t k = 0; k < d; ++k)
      if (k != j) ray.zeros.set(k);
    rays.push_back(std::move(ray));
  }

  const int needed = static_cast<int>(d) - 2;
  for (std::size_t k = d; k < rows.size(); ++k) {
    const Row& row = *rows[k];
    std::vector<BigInt> s(rays.size());
    std::vector<std::size_t> pos, neg;
    for (std::size_t r = 0; r < rays.size(); ++r) {
      s[r] = dot(row, rays[r].y);
      if (s[r] > 0) pos.push_back(r);
      else if (s[r] < 0) neg.push_back(r);
    }
    if (neg.empty()) {
      for (std::size_t r = 0; r < rays.size(); ++r)
        if (s[r] == 0) rays[r].zeros.set(k);
      continue;
    }

    std::vector<Ray> next;
    next.reserve(rays.size());
    for (const auto p : pos)
      for (const auto m : neg) {
        if (Bitset::count_and(rays[p].zeros, rays[m].zeros) < static_cast<std::size_t>(needed)) continue;
        Bitset common = Bitset::intersect(rays[p].zeros, rays[m].zeros);
        std::vector<const Row*> active;
        for (std::size_t q = 0; q < k; ++q)
          if (common.test(q)) active.push_back(rows[q]);
        if (integer_rank(active, needed) < needed) continue;
        std::vector<BigInt> y(d);
        for (std::size_t c = 0; c < d; ++c) y[c] = s[p] * rays[m].y[c] - s[m] * rays[p].y[c];
        reduce(y);
        common.set(k);
        next.push_back({std::move(y), std::move(common)});
      }
    for (std::size_t r = 0; r < rays.size(); ++r) {
      if (s[r] < 0) continue;
      if (s[r] == 0) rays[r].zeros.set(k);
      next.push_back(std::move(rays[r]));
    }
    rays = std::move(next);
  }

  // y . (1, v) >= 0  <=>  (-y_1..) . v <= y_0
  std::vector<Facet> facets;
  facets.reserve(rays.size());
  for (const auto& ray : rays) {
    std::vector<BigInt> a(ray.y.begin() + 1, ray.y.end());
    for (auto& x : a) x = -x;
    facets.push_back(canonicalize_facet(std::span<const BigInt>(a), ray.y[0]));
  }
  std::sort(facets.begin(), facets.end());
  facets.erase(std::unique(facets.begin(), facets.end()), facets.end());
  return facets;
}

std::vector<std::vector<int>> symmetry_group(int n) {
  if (n < 1) throw std::invalid_argument("symmetry_group: n must be positive");
  std::vector<int> pi(static_cast<std::size_t>(n));
  std::iota(pi.begin(), pi.end(), 1);
  std::vector<std::vector<int>> perms_side;
  do perms_side.push_back(pi);
  while (std::next_permutation(pi.begin(), pi.end()));

  const int dim = n * n + 2 * n;
  std::vector<std::vector<int>> group;
  for (const auto& left : perms_side)
    for (const auto& right : perms_side)
      for (int swap = 0; swap < 2; ++swap) {
        std::vector<int> perm(static_cast<std::size_t>(dim));
        for (int i = 0; i <= n; ++i)
          for (int j = 0; j <= n; ++j) {
            if (i == 0 && j == 0) continue;
            int a = i == 0 ? 0 : left[static_cast<std::size_t>(i) - 1];
            int b = j == 0 ? 0 : right[static_cast<std::size_t>(j) - 1];
            if (swap) std::swap(a, b);
            perm[static_cast<std::size_t>(free_index(n, i, j))] = free_index(n, a, b);
          }
        group.push_back(std::move(perm));
      }
  return group;
}

Facet apply_symmetry(const Facet& facet, std::span<const int> perm) {
  if (perm.size() != facet.coeffs.size()) throw std::invalid_argument("apply_symmetry: size mismatch");
  Facet out{std::vector<BigInt>(facet.coeffs.size()), facet.bound};
  for (std::size_t k = 0; k < perm.size(); ++k) out.coeffs[static_cast<std::size_t>(perm[k])] = facet.coeffs[k];
  return out;
}

namespace {

int n_from_dim(std::size_t dim) {
  for (int n = 1; n * n + 2 * n <= static_cast<int>(dim); ++n)
    if (n * n + 2 * n == static_cast<int>(dim)) return n;
  return -1;
}

}  // namespace

std::optional<Facet> find_facet(std::span<const Facet> facets, const Facet& pattern) {
  const int n = n_from_dim(pattern.coeffs.size());
  if (n < 1) return std::nullopt;
  const Facet canon = canonicalize_facet(std::span<const BigInt>(pattern.coeffs), pattern.bound);
  for (const auto& perm : symmetry_group(n)) {
    const Facet image = apply_symmetry(canon, perm);
    const auto it = std::find(facets.begin(), facets.end(), image);
    if (it != facets.end()) return *it;
  }
  return std::nullopt;
}

Facet lift_facet(const Facet& facet, int n_from, int n_to) {
  if (n_from < 1 || n_to < n_from || static_cast<int>(facet.coeffs.size()) != n_from * n_from + 2 * n_from)
    throw std::invalid_argument("lift_facet: incompatible sizes");
  Facet out{std::vector<BigInt>(static_cast<std::size_t>(n_to * n_to + 2 * n_to)), facet.bound};
  for (int i = 0; i <= n_from; ++i)
    for (int j = 0; j <= n_from; ++j) {
      if (i == 0 && j == 0) continue;
      out.coeffs[static_cast<std::size_t>(free_index(n_to, i, j))] =
          facet.coeffs[static_cast<std::size_t>(free_index(n_from, i, j))];
    }
  return out;
}

Facet clauser_horne_facet(int n) {
  if (n < 2) throw std::invalid_argument("clauser_horne_facet: requires n >= 2");
  Facet ch{std::vector<BigInt>(8), 0};
  ch.coeffs[static_cast<std::size_t>(free_index(2, 1, 1))] = 1;
  ch.coeffs[static_cast<std::size_t>(free_index(2, 1, 2))] = 1;
  ch.coeffs[static_cast<std::size_t>(free_index(2, 2, 1))] = 1;
  ch.coeffs[static_cast<std::size_t>(free_index(2, 2, 2))] = -1;
  ch.coeffs[static_cast<std::size_t>(free_index(2, 1, 0))] = -1;
  ch.coeffs[static_cast<std::size_t>(free_index(2, 0, 1))] = -1;
  return lift_facet(ch, 2, n);
}

}  // namespace qrange
