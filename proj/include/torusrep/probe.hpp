#pragma once

// Truncated-window closure under S_n generators, interpolation of polynomial
// families in r, and the evidence runs built on top of them.

#include "torusrep/exact_linalg.hpp"
#include "torusrep/multi_index.hpp"
#include "torusrep/slrep.hpp"
#include "torusrep/tensorrep.hpp"
#include "torusrep/torusfields.hpp"
#include "torusrep/weyl.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

namespace torusrep {

// 64-bit FNV-1a.
class Digest {
 public:
  void update(std::string_view s) {
    for (unsigned char c : s) {
      h_ ^= c;
      h_ *= 0x100000001b3ULL;
    }
  }
  void update(long long v) { update(std::to_string(v) + ";"); }
  std::uint64_t value() const { return h_; }
  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h_));
    return buf;
  }

 private:
  std::uint64_t h_ = 0xcbf29ce484222325ULL;
};

struct Window {
  int B = 2;
  int R = 2;
  int L = 3;
  int margin = 6;

  int ambient() const { return B + margin; }
  void validate() const {
    if (B < 0 || R < 1 || L < 0 || margin < 0) throw std::invalid_argument("Window: negative or empty parameter");
    if (margin < L * R) throw std::invalid_argument("Window: margin violation (margin < L*R)");
  }
  static Window defaults(int n) { return Window{n >= 4 ? 1 : 2, 2, 3, 6}; }
  std::string to_string() const {
    return std::to_string(B) + "," + std::to_string(R) + "," + std::to_string(L) + "," + std::to_string(margin);
  }
  /// "B,R,L,margin"
  static Window parse(std::string_view text) {
    std::vector<int> v;
    std::size_t start = 0;
    while (start <= text.size()) {
      auto comma = text.find(',', start);
      std::string piece(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
      std::size_t used = 0;
      int x = 0;
      try {
        x = std::stoi(piece, &used);
      } catch (const std::exception&) {
        used = 0;
      }
      if (piece.empty() || used != piece.size()) throw std::invalid_argument("Window: cannot parse '" + std::string(text) + "'");
      v.push_back(x);
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    if (v.size() != 4) throw std::invalid_argument("Window: expected B,R,L,margin");
    return Window{v[0], v[1], v[2], v[3]};
  }
  friend bool operator==(const Window&, const Window&) = default;
};

// Subspace of P (x) V spanned by vectors homogeneous in the P-degree, stored degree by degree.
class GradedSpan {
 public:
  explicit GradedSpan(std::size_t fiber_dim = 0) : fiber_(fiber_dim) {}

  bool insert(const MultiIndex& s, const VVector& v) {
    if (v.empty()) return false;
    return parts_[s].insert(v);
  }
  /// Inserts each homogeneous component separately.
  void insert_components(const FVVector& v) {
    for (const auto& [s, w] : split(v)) insert(s, w);
  }
  bool contains(const FVVector& v) const {
    for (const auto& [s, w] : split(v)) {
      auto it = parts_.find(s);
      if (it == parts_.end() || !it->second.contains(w)) return false;
    }
    return true;
  }
  const SpanBasis<int>* part(const MultiIndex& s) const {
    auto it = parts_.find(s);
    return it == parts_.end() ? nullptr : &it->second;
  }
  std::size_t rank_at(const MultiIndex& s) const {
    auto p = part(s);
    return p ? p->rank() : 0;
  }
  bool full_at(const MultiIndex& s) const { return rank_at(s) == fiber_; }
  std::size_t rank() const {
    std::size_t r = 0;
    for (const auto& [s, p] : parts_) r += p.rank();
    return r;
  }
  std::size_t rank_within(int bound) const {
    std::size_t r = 0;
    for (const auto& [s, p] : parts_)
      if (in_box(s, bound)) r += p.rank();
    return r;
  }
  std::size_t fiber_dim() const { return fiber_; }
  const std::map<MultiIndex, SpanBasis<int>>& parts() const { return parts_; }

  /// The same subspace as a row-reduced basis over P (x) V keys.
  SpanBasis<FVKey> to_span(int bound = -1) const {
    SpanBasis<FVKey> out;
    for (const auto& [s, p] : parts_) {
      if (bound >= 0 && !in_box(s, bound)) continue;
      for (const auto& row : p.rows()) out.insert(lift(s, row));
    }
    return out;
  }

  static std::map<MultiIndex, VVector> split(const FVVector& v) {
    std::map<MultiIndex, VVector> out;
    for (const auto& [k, c] : v) out[k.s].add(k.v, c);
    return out;
  }
  static FVVector lift(const MultiIndex& s, const VVector& v) {
    FVVector out;
    for (const auto& [b, c] : v) out.add(FVKey{s, b}, c);
    return out;
  }

 private:
  std::size_t fiber_;
  std::map<MultiIndex, SpanBasis<int>> parts_;
};

enum class Verdict { FillsWindow, ProperInvariant, Inconclusive };

inline std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::FillsWindow: return "FillsWindow";
    case Verdict::ProperInvariant: return "ProperInvariant";
    case Verdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

// One vector added to the closure: either the degree-s component of seed `seed`
// (parent < 0), or gens[gen] applied to the vector recorded at entry `parent`.
struct DerivationEntry {
  int parent = -1;
  int seed = -1;
  int gen = -1;
  MultiIndex s;
  VVector v;
};

struct ClosureResult {
  FVContext context;
  Window window;
  int depth = 0;
  GradedSpan span;
  std::size_t centralRank = 0;
  std::size_t centralDim = 0;
  std::size_t ambientRank = 0;
  Verdict verdict = Verdict::Inconclusive;
  int rounds = 0;
  std::vector<DerivationEntry> log;
  std::string logDigest;

  bool contains(const FVElement& m) const { return span.contains(m.terms()); }
  SpanBasis<FVKey> central_span() const { return span.to_span(window.B); }
};

struct ClosureOptions {
  int workers = 1;
  /// Rounds allowed after the first `depth` rounds while looking for a fixpoint.
  int max_extra_rounds = 48;
};

namespace detail {

struct GenData {
  MultiIndex r;
  RatVec u;
  Rational ulam;
  SparseMatrix ru;
  bool has_matrix = false;
};

inline std::vector<GenData> prepare_generators(const std::vector<VectorField>& gens, const FVContext& ctx) {
  std::vector<GenData> out;
  out.reserve(gens.size());
  for (const auto& g : gens) {
    if (g.rank() != ctx.rank()) throw std::invalid_argument("closure: generator rank mismatch");
    if (!g.is_divergence_free() && !ctx.V().id_scalar())
      throw std::domain_error("closure: field outside S_n needs a module with a declared identity scalar");
    GenData d;
    d.r = g.r;
    d.u = g.u;
    d.ulam = dot(g.u, ctx.twist.lambda);
    d.has_matrix = !g.r.is_zero();
    if (d.has_matrix) d.ru = ctx.V().rank_one_action(g.r, g.u);
    out.push_back(std::move(d));
  }
  return out;
}

inline VVector apply_homogeneous(const GenData& g, const MultiIndex& s, const VVector& v) {
  Rational scal = dot(g.u, s) - g.ulam;
  VVector out = v.scaled(scal);
  if (g.has_matrix) out += g.ru.apply(v);
  return out;
}

template <class F>
void parallel_for(std::size_t count, int workers, F&& body) {
  if (workers <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) body(i);
    return;
  }
  const std::size_t w = std::min<std::size_t>(static_cast<std::size_t>(workers), count);
  std::vector<std::thread> pool;
  pool.reserve(w);
  for (std::size_t t = 0; t < w; ++t)
    pool.emplace_back([&, t] {
      for (std::size_t i = t; i < count; i += w) body(i);
    });
  for (auto& th : pool) th.join();
}

inline void digest_entry(Digest& d, const DerivationEntry& e) {
  d.update(e.parent);
  d.update(e.seed);
  d.update(e.gen);
  d.update(e.s.to_string());
  for (const auto& [b, c] : e.v) d.update(std::to_string(b) + ":" + c.to_string() + ";");
  d.update("|");
}

}  // namespace detail

/// Span of all words of length <= depth in gens applied to the seeds, computed in
/// the ambient window of bound B + margin. Vectors outside the ambient window are
/// discarded. If the central window is not filled, rounds continue (without depth
/// limit) until the ambient span is stable, giving ProperInvariant, or the round cap
/// is hit, giving Inconclusive.
inline ClosureResult closure(const std::vector<FVElement>& seeds, const std::vector<VectorField>& gens,
                             const Window& window, int depth, const ClosureOptions& opt = {}) {
  if (seeds.empty()) throw std::invalid_argument("closure: no seeds");
  if (gens.empty()) throw std::invalid_argument("closure: no generators");
  const FVContext ctx = seeds.front().context();
  for (const auto& s : seeds) seeds.front().require_same(s);
  if (ctx.style != ActionStyle::ShenLarsson) throw std::invalid_argument("closure: first action style required");
  if (depth < 0 || window.B < 0) throw std::invalid_argument("closure: negative depth or window");
  int R = 0;
  for (const auto& g : gens) R = std::max(R, g.r.max_abs());
  if (window.margin < depth * R) throw std::invalid_argument("closure: margin violation (margin < depth*R)");

  const int n = ctx.rank();
  const int A = window.ambient();
  const std::size_t fiber = ctx.V().dim();
  const auto gd = detail::prepare_generators(gens, ctx);

  ClosureResult res;
  res.context = ctx;
  res.window = window;
  res.depth = depth;
  res.span = GradedSpan(fiber);

  std::vector<int> frontier;
  for (std::size_t si = 0; si < seeds.size(); ++si) {
    for (const auto& [s, v] : GradedSpan::split(seeds[si].terms())) {
      if (!in_box(s, A)) throw std::invalid_argument("closure: seed outside the ambient window");
      if (res.span.insert(s, v)) {
        frontier.push_back(static_cast<int>(res.log.size()));
        res.log.push_back(DerivationEntry{-1, static_cast<int>(si), -1, s, v});
      }
    }
  }

  constexpr std::size_t kBatch = 256;
  const std::size_t G = gd.size();
  auto run_round = [&](const std::vector<int>& front, int prune_bound) {
    std::vector<int> next;
    std::vector<std::optional<VVector>> slots;
    for (std::size_t start = 0; start < front.size(); start += kBatch) {
      const std::size_t len = std::min(kBatch, front.size() - start);
      slots.assign(len * G, std::nullopt);
      detail::parallel_for(len, opt.workers, [&](std::size_t pos) {
        const DerivationEntry& e = res.log[static_cast<std::size_t>(front[start + pos])];
        for (std::size_t g = 0; g < G; ++g) {
          const MultiIndex t = e.s + gd[g].r;
          if (!in_box(t, prune_bound) || res.span.full_at(t)) continue;
          VVector img = detail::apply_homogeneous(gd[g], e.s, e.v);
          if (!img.empty()) slots[pos * G + g] = std::move(img);
        }
      });
      for (std::size_t pos = 0; pos < len; ++pos) {
        const int parent = front[start + pos];
        for (std::size_t g = 0; g < G; ++g) {
          auto& slot = slots[pos * G + g];
          if (!slot) continue;
          const MultiIndex t = res.log[static_cast<std::size_t>(parent)].s + gd[g].r;
          if (res.span.insert(t, *slot)) {
            next.push_back(static_cast<int>(res.log.size()));
            res.log.push_back(DerivationEntry{parent, res.log[static_cast<std::size_t>(parent)].seed,
                                              static_cast<int>(g), t, std::move(*slot)});
          }
        }
      }
    }
    return next;
  };

  for (int round = 1; round <= depth && !frontier.empty(); ++round) {
    frontier = run_round(frontier, std::min(A, window.B + (depth - round) * R));
    ++res.rounds;
  }

  std::size_t central_points = 1;
  for (int i = 0; i < n; ++i) central_points *= static_cast<std::size_t>(2 * window.B + 1);
  res.centralDim = central_points * fiber;
  res.centralRank = res.span.rank_within(window.B);

  if (res.centralRank == res.centralDim) {
    res.verdict = Verdict::FillsWindow;
  } else {
    // Everything recorded so far has to be propagated once without pruning.
    std::vector<int> all(res.log.size());
    for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
    frontier = std::move(all);
    int extra = 0;
    while (!frontier.empty() && extra < opt.max_extra_rounds) {
      frontier = run_round(frontier, A);
      ++extra;
      ++res.rounds;
    }
    res.centralRank = res.span.rank_within(window.B);
    if (res.centralRank == res.centralDim)
      res.verdict = Verdict::FillsWindow;
    else
      res.verdict = frontier.empty() ? Verdict::ProperInvariant : Verdict::Inconclusive;
  }
  res.ambientRank = res.span.rank();

  Digest d;
  for (const auto& e : res.log) detail::digest_entry(d, e);
  res.logDigest = d.hex();
  return res;
}

/// Re-derives every logged vector through act_shen and the seeds' homogeneous parts.
inline bool replay_log(const ClosureResult& res, const std::vector<FVElement>& seeds,
                       const std::vector<VectorField>& gens) {
  for (const auto& e : res.log) {
    FVElement expect = FVElement(res.context, GradedSpan::lift(e.s, e.v));
    if (e.parent < 0) {
      auto parts = GradedSpan::split(seeds.at(static_cast<std::size_t>(e.seed)).terms());
      auto it = parts.find(e.s);
      if (it == parts.end() || !(it->second == e.v)) return false;
      continue;
    }
    const DerivationEntry& p = res.log.at(static_cast<std::size_t>(e.parent));
    FVElement src(res.context, GradedSpan::lift(p.s, p.v));
    if (!(act_shen(gens.at(static_cast<std::size_t>(e.gen)), src) == expect)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Random seeds

/// Uniform integer in [lo, hi] by modulo reduction (portable across standard libraries).
inline int uniform_int(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(rng() % static_cast<std::uint64_t>(hi - lo + 1));
}

inline Rational random_coefficient(std::mt19937_64& rng) {
  int c = uniform_int(rng, 1, 6);
  return Rational(c <= 3 ? c - 4 : c - 3);
}

/// Random nonzero vector with 1..4 support keys in the window |s_i| <= bound.
inline FVElement random_window_vector(const FVContext& ctx, int bound, std::mt19937_64& rng) {
  const auto pts = box(ctx.rank(), bound);
  const int dim = static_cast<int>(ctx.V().dim());
  while (true) {
    FVElement m(ctx);
    const int support = uniform_int(rng, 1, 4);
    for (int t = 0; t < support; ++t) {
      const auto& s = pts[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(pts.size()) - 1))];
      m.add(s, uniform_int(rng, 0, dim - 1), random_coefficient(rng));
    }
    if (!m.is_zero()) return m;
  }
}

/// Random nonzero combination of 1..4 window generators x^s ⊠ w of L_n(P,k).
inline FVElement random_l_vector(int k, const TwistParam& twist, int bound, std::mt19937_64& rng) {
  auto gens = l_generators(k, twist, bound);
  if (gens.empty()) throw std::invalid_argument("random_l_vector: empty window part");
  while (true) {
    FVElement m(gens.front().context());
    const int support = uniform_int(rng, 1, 4);
    for (int t = 0; t < support; ++t)
      m.axpy(random_coefficient(rng), gens[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(gens.size()) - 1))]);
    if (!m.is_zero()) return m;
  }
}

// ---------------------------------------------------------------------------
// Graded spans of L_n(P,k), h F and ker d_k

inline GradedSpan l_graded(int k, const TwistParam& twist, int bound) {
  GradedSpan g(exterior_module(twist.rank(), k)->dim());
  for (const auto& v : l_generators(k, twist, bound)) g.insert_components(v.terms());
  return g;
}

/// Kernel of d_k on the window |s_i| <= bound, degree by degree.
inline GradedSpan kernel_d_graded(int k, const TwistParam& twist, int bound) {
  auto ctx = exterior_context(twist, k);
  GradedSpan g(ctx.V().dim());
  for (const auto& s : box(twist.rank(), bound)) {
    std::vector<VVector> dom;
    std::vector<FVVector> img;
    for (std::size_t b = 0; b < ctx.V().dim(); ++b) {
      dom.push_back(VVector::unit(static_cast<int>(b)));
      img.push_back(d_map(k, FVElement::term(ctx, s, static_cast<int>(b))).terms());
    }
    for (const auto& v : kernel_basis(dom, img)) g.insert(s, v);
  }
  return g;
}

/// {y in window : d_l y in L_n(P,k) for every l}, degree by degree.
inline GradedSpan partial_criterion_graded(int k, const TwistParam& twist, int bound) {
  auto ctx = exterior_context(twist, k);
  const int n = twist.rank();
  GradedSpan L = l_graded(k, twist, bound);
  GradedSpan g(ctx.V().dim());
  using ImageKey = std::pair<int, FVKey>;
  for (const auto& s : box(n, bound)) {
    std::vector<VVector> dom;
    std::vector<SparseVec<ImageKey>> img;
    for (std::size_t b = 0; b < ctx.V().dim(); ++b) {
      const auto basis = FVElement::term(ctx, s, static_cast<int>(b));
      SparseVec<ImageKey> out;
      for (int l = 1; l <= n; ++l) {
        FVVector dy = act_shen(VectorField::euler(n, l), basis).terms();
        // residue of d_l y modulo L, computed degree by degree
        for (const auto& [t, w] : GradedSpan::split(dy)) {
          const SpanBasis<int>* part = L.part(t);
          VVector res = part ? part->reduce(w) : w;
          for (const auto& [bb, c] : res) out.add(ImageKey{l, FVKey{t, bb}}, c);
        }
      }
      dom.push_back(VVector::unit(static_cast<int>(b)));
      img.push_back(std::move(out));
    }
    for (const auto& v : kernel_basis(dom, img)) g.insert(s, v);
  }
  return g;
}

inline bool same_graded(const GradedSpan& a, const GradedSpan& b, int bound) {
  if (a.rank_within(bound) != b.rank_within(bound)) return false;
  for (const auto& [s, p] : a.parts()) {
    if (!in_box(s, bound)) continue;
    const SpanBasis<int>* q = b.part(s);
    for (const auto& row : p.rows())
      if (!q || !q->contains(row)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Interpolation of polynomial families r -> P (x) V

struct PolyFamily {
  int n = 0;
  int degree = 0;
  std::map<MultiIndex, FVElement> samples;
};

/// Evaluates f on the full grid nodes[0] x ... x nodes[n-1].
inline PolyFamily sample_family(int n, int degree, const std::vector<std::vector<int>>& nodes,
                                const std::function<FVElement(const MultiIndex&)>& f) {
  if (static_cast<int>(nodes.size()) != n) throw std::invalid_argument("sample_family: need one node list per coordinate");
  for (const auto& xs : nodes) {
    auto sorted = xs;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
      throw std::invalid_argument("sample_family: repeated sample point");
    if (static_cast<int>(xs.size()) < degree + 1) throw std::invalid_argument("sample_family: insufficient sample points");
  }
  PolyFamily fam;
  fam.n = n;
  fam.degree = degree;
  MultiIndex idx(n);
  std::vector<std::size_t> pos(static_cast<std::size_t>(n), 0);
  while (true) {
    for (int i = 0; i < n; ++i) idx[i] = nodes[static_cast<std::size_t>(i)][pos[static_cast<std::size_t>(i)]];
    fam.samples.emplace(idx, f(idx));
    int i = n - 1;
    while (i >= 0 && pos[static_cast<std::size_t>(i)] + 1 == nodes[static_cast<std::size_t>(i)].size()) {
      pos[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    ++pos[static_cast<std::size_t>(i)];
  }
  return fam;
}

/// Default grid: degree + 1 consecutive integers starting at -2 in every coordinate.
inline PolyFamily sample_family(int n, int degree, const std::function<FVElement(const MultiIndex&)>& f) {
  std::vector<int> xs;
  for (int a = 0; a <= degree; ++a) xs.push_back(a - 2);
  return sample_family(n, degree, std::vector<std::vector<int>>(static_cast<std::size_t>(n), xs), f);
}

namespace detail {

/// Coefficients (low to high) of the Lagrange basis polynomial for nodes[a].
inline std::vector<Rational> lagrange_basis(const std::vector<int>& nodes, std::size_t a) {
  std::vector<Rational> poly{Rational(1)};
  Rational denom(1);
  for (std::size_t b = 0; b < nodes.size(); ++b) {
    if (b == a) continue;
    std::vector<Rational> next(poly.size() + 1);
    for (std::size_t d = 0; d < poly.size(); ++d) {
      next[d + 1] += poly[d];
      next[d] -= poly[d] * Rational(nodes[b]);
    }
    poly = std::move(next);
    denom *= Rational(nodes[a] - nodes[b]);
  }
  for (auto& c : poly) c /= denom;
  return poly;
}

}  // namespace detail

/// Coefficient of r^exponent in the interpolating polynomial of the family.
inline FVElement coeff_extract(const PolyFamily& fam, const MultiIndex& exponent) {
  if (fam.samples.empty()) throw std::invalid_argument("coeff_extract: no samples");
  const int n = fam.n;
  if (exponent.rank() != n) throw std::invalid_argument("coeff_extract: rank mismatch");
  std::vector<std::vector<int>> nodes(static_cast<std::size_t>(n));
  for (const auto& [r, v] : fam.samples)
    for (int i = 0; i < n; ++i) nodes[static_cast<std::size_t>(i)].push_back(r[i]);
  std::size_t grid = 1;
  for (auto& xs : nodes) {
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    if (static_cast<int>(xs.size()) < fam.degree + 1) throw std::invalid_argument("coeff_extract: insufficient sample points");
    grid *= xs.size();
  }
  if (grid != fam.samples.size()) throw std::invalid_argument("coeff_extract: samples do not form a full grid");
  for (int i = 0; i < n; ++i)
    if (exponent[i] < 0) throw std::invalid_argument("coeff_extract: negative exponent");
  // weight[i][a] = coefficient of r_i^{e_i} in the Lagrange basis polynomial of node a
  std::vector<std::map<int, Rational>> weight(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const auto& xs = nodes[static_cast<std::size_t>(i)];
    for (std::size_t a = 0; a < xs.size(); ++a) {
      auto poly = detail::lagrange_basis(xs, a);
      const auto e = static_cast<std::size_t>(exponent[i]);
      weight[static_cast<std::size_t>(i)][xs[a]] = e < poly.size() ? poly[e] : Rational();
    }
  }
  FVElement out(fam.samples.begin()->second.context());
  for (const auto& [r, v] : fam.samples) {
    Rational w(1);
    for (int i = 0; i < n && !w.is_zero(); ++i) w *= weight[static_cast<std::size_t>(i)].at(r[i]);
    if (!w.is_zero()) out.axpy(w, v);
  }
  return out;
}

/// Every coefficient of total degree exactly d, keyed by exponent.
inline std::map<MultiIndex, FVElement> coefficients_of_degree(const PolyFamily& fam, int d) {
  std::map<MultiIndex, FVElement> out;
  for (const auto& e : box(fam.n, d)) {
    bool ok = e.total() == d;
    for (int i = 0; i < fam.n && ok; ++i) ok = e[i] >= 0;
    if (!ok) continue;
    auto c = coeff_extract(fam, e);
    if (!c.is_zero()) out.emplace(e, std::move(c));
  }
  return out;
}

/// r -> D_{j,s-r} D_{i,r} m
inline std::function<FVElement(const MultiIndex&)> ddpw_family(int i, int j, const MultiIndex& s, const FVElement& m) {
  return [=](const MultiIndex& r) {
    auto first = act_shen(AdjacentGenerator{i, r}.field(), m);
    return act_shen(AdjacentGenerator{j, s - r}.field(), first);
  };
}

/// r -> x^s p (x) (sum_l' E_{l',j,s-r})(sum_l E_{l,i,r}) w, the double-matrix part of ddpw_family.
inline std::function<FVElement(const MultiIndex&)> double_matrix_family(int i, int j, const MultiIndex& s,
                                                                       const FVElement& m) {
  return [=](const MultiIndex& r) {
    const FinModule& V = m.context().V();
    auto a = AdjacentGenerator{i, r}.field();
    auto b = AdjacentGenerator{j, s - r}.field();
    SparseMatrix ma = V.rank_one_action(a.r, a.u);
    SparseMatrix mb = V.rank_one_action(b.r, b.u);
    FVVector out;
    for (const auto& [k, c] : m.terms())
      for (const auto& [bb, cb] : mb.apply(ma.cols[static_cast<std::size_t>(k.v)])) out.add(FVKey{k.s + s, bb}, c * cb);
    return FVElement(m.context(), std::move(out));
  };
}

/// Right-hand side of the r_i^2 coefficient identity (j = i+1):
/// s_{i+1} g_{i,s}(m) - s_{i+1} sum_l d_l(x^s p) (x) E_{l,i+2}E_{i,i+1} w.
inline FVElement ri2_expected(int i, const MultiIndex& s, const FVElement& m) {
  const int n = m.context().rank();
  const FinModule& V = m.context().V();
  const TwistParam& tw = m.context().twist;
  FVElement corr(m.context());
  for (const auto& [k, c] : m.terms()) {
    const MultiIndex t = k.s + s;
    const VVector e12 = V.action(i, i + 1).apply(VVector::unit(k.v));
    for (int l = 1; l <= n; ++l) {
      Rational e = tw.eigen(t, l - 1);
      if (e.is_zero()) continue;
      for (const auto& [b, cb] : V.action(l, i + 2).apply(e12)) corr.add(t, b, c * e * cb);
    }
  }
  const Rational si1(s[i]);
  return si1 * (g_map(i, s, m) - corr);
}

// ---------------------------------------------------------------------------
// Evidence reports

using CounterValue = std::variant<long long, std::string>;

// Outcome of a group of checks: counters, failure messages and a digest of everything logged.
struct CheckReport {
  std::map<std::string, CounterValue> counters;
  std::vector<std::string> failures;
  std::set<std::string> executed;
  bool usedEvidence = false;
  Digest digest;

  void bump(const std::string& name, long long by = 1) {
    auto& v = counters[name];
    if (auto p = std::get_if<long long>(&v)) *p += by;
    else v = by;
  }
  void set(const std::string& name, CounterValue v) { counters[name] = std::move(v); }
  void set_max(const std::string& name, long long v) {
    auto it = counters.find(name);
    if (it == counters.end() || std::get<long long>(it->second) < v) counters[name] = v;
  }
  /// Records an exact check; returns its outcome.
  bool check(const std::string& name, bool ok, const std::string& detail = {}) {
    bump("checks");
    executed.insert(name);
    digest.update(name + (ok ? ":ok" : ":FAIL"));
    if (!ok) failures.push_back(detail.empty() ? name : name + ": " + detail);
    return ok;
  }
  bool ok() const { return failures.empty(); }
  void absorb(const ClosureResult& r) {
    usedEvidence = true;
    bump("closures");
    set_max("maxRank", static_cast<long long>(r.ambientRank));
    set_max("maxLogLength", static_cast<long long>(r.log.size()));
    digest.update(r.logDigest);
    digest.update(to_string(r.verdict));
  }
};

inline std::vector<FVElement> weight_components(const FVElement& m) {
  std::vector<FVElement> out;
  for (auto& [w, part] : weight_decompose(m)) out.push_back(std::move(part));
  return out;
}

/// Closures from `trials` random seeds. Any ProperInvariant verdict for a
/// nonminuscule module is recorded as a failure.
inline CheckReport generation_evidence(const FVContext& ctx, int trials, const Window& window, std::mt19937_64& rng,
                                       const ClosureOptions& opt = {}) {
  window.validate();
  CheckReport rep;
  const auto gens = sn_generators(ctx.rank(), window.R);
  const bool minuscule = ctx.V().is_minuscule();
  for (int t = 0; t < trials; ++t) {
    FVElement seed = random_window_vector(ctx, window.B, rng);
    auto res = closure({seed}, gens, window, window.L, opt);
    rep.absorb(res);
    rep.bump("verdict" + to_string(res.verdict));
    rep.set("centralDim", static_cast<long long>(res.centralDim));
    if (!minuscule)
      rep.check("nonminuscule closure fills the window", res.verdict == Verdict::FillsWindow,
                "trial " + std::to_string(t) + " " + to_string(res.verdict));
  }
  return rep;
}

/// Exact and evidence checks on P (x) Lambda^0 and L_n(P,1).
inline CheckReport lattice_delta0(const TwistParam& twist, const Window& window, int trials, std::mt19937_64& rng,
                                  const ClosureOptions& opt = {}) {
  window.validate();
  CheckReport rep;
  const int n = twist.rank();
  const auto ctx = exterior_context(twist, 0);
  const auto gens = sn_generators(n, window.R);
  const int B = window.B;

  // S_n F is inside h F, and S_n L(P,1) is inside h L(P,1).
  GradedSpan hF(1);
  for (const auto& s : box(n, B + window.R))
    for (int i = 0; i < n; ++i) hF.insert(s, VVector{{0, twist.eigen(s, i)}});
  GradedSpan hL(static_cast<std::size_t>(n));
  for (const auto& s : box(n, B + window.R))
    for (int i = 0; i < n; ++i) {
      auto p = monomial(s, twist.eigen(s, i));
      hL.insert_components(boxtimes(p, VVector::unit(0), twist, 1).terms());
    }
  bool inc46 = true, inc410 = true;
  for (const auto& g : gens)
    for (const auto& s : box(n, B)) {
      auto m = FVElement::term(ctx, s, 0);
      inc46 = inc46 && hF.contains(act_shen(g, m).terms());
      auto l = d_map(0, m);
      inc410 = inc410 && hL.contains(act_shen(g, l).terms());
    }
  rep.check("S_n F(P,delta_0) inside hF", inc46);
  rep.check("S_n L(P,1) inside hL(P,1)", inc410);

  const std::size_t windowDim = box(n, B).size();
  const std::size_t hfRank = hF.rank_within(B);
  rep.set("windowDim", static_cast<long long>(windowDim));
  rep.set("hFRank", static_cast<long long>(hfRank));
  const bool integral = twist.is_integral();
  const bool lambdaInside = integral && in_box(twist.as_multi_index(), B);
  if (lambdaInside) {
    const MultiIndex lam = twist.as_multi_index();
    rep.check("hF has codimension 1 in the window", hfRank + 1 == windowDim);
    rep.check("fixed line lies outside hF", !hF.contains(FVElement::term(ctx, lam, 0).terms()));
    bool fixed = true;
    for (const auto& g : gens) fixed = fixed && act_shen(g, FVElement::term(ctx, lam, 0)).is_zero();
    rep.check("fixed line is killed by S_n", fixed);
    auto res = closure({FVElement::term(ctx, lam, 0)}, gens, window, window.L, opt);
    rep.absorb(res);
    rep.check("closure of the fixed line is a proper invariant line",
              res.verdict == Verdict::ProperInvariant && res.centralRank == 1);
  } else {
    rep.check("hF fills the window", hfRank == windowDim);
    long long generated = 0;
    for (int t = 0; t < trials; ++t) {
      auto res = closure({random_window_vector(ctx, B, rng)}, gens, window, window.L, opt);
      rep.absorb(res);
      if (res.verdict == Verdict::FillsWindow) ++generated;
      rep.check("random seed does not span a proper invariant subspace", res.verdict != Verdict::ProperInvariant,
                "trial " + std::to_string(t));
    }
    rep.set("seedsGenerating", generated);
    rep.set("seeds", static_cast<long long>(trials));
    rep.check("every random seed generates the window", generated == trials);
  }
  return rep;
}

/// Simplicity evidence for L_n(P,k) and maximality evidence for ker d_k.
/// For k = 1 compares the closure of L_n(P,1) vectors with h L_n(P,1) instead.
inline CheckReport maximality_evidence(int k, const TwistParam& twist, const Window& window, int trials,
                                       std::mt19937_64& rng, const ClosureOptions& opt = {}) {
  window.validate();
  const int n = twist.rank();
  if (n < 3 || k < 1 || k > n - 1) throw std::invalid_argument("maximality_evidence: need n >= 3, 1 <= k <= n-1");
  CheckReport rep;
  const auto gens = sn_generators(n, window.R);
  const int B = window.B;
  GradedSpan L = l_graded(k, twist, B);
  rep.set("lRank", static_cast<long long>(L.rank_within(B)));

  long long reached = 0;
  for (int t = 0; t < trials; ++t) {
    FVElement y = random_l_vector(k, twist, B, rng);
    auto res = closure(weight_components(y), gens, window, window.L, opt);
    rep.absorb(res);
    // The closure stays in L (exact) and should reach all of L's window part (evidence).
    bool inside = true;
    for (const auto& [s, p] : res.span.parts())
      if (in_box(s, B))
        for (const auto& row : p.rows()) inside = inside && L.contains(GradedSpan::lift(s, row));
    rep.check("closure of an L vector stays inside L", inside, "trial " + std::to_string(t));
    if (res.centralRank == L.rank_within(B) && inside) ++reached;
  }
  rep.set("lSeedsReachingL", reached);
  rep.check("closure of every L vector reaches the window part of L", reached == trials);

  if (k == 1) {
    // h L(P,1) versus L(P,1) in the window: the ranks agree, and equal the number of
    // monomials x^s with d x^s != 0.
    GradedSpan hL(static_cast<std::size_t>(n));
    std::size_t nonfixed = 0;
    for (const auto& s : box(n, B)) {
      bool killed = true;
      for (int i = 0; i < n; ++i) {
        auto p = monomial(s, twist.eigen(s, i));
        hL.insert_components(boxtimes(p, VVector::unit(0), twist, 1).terms());
        killed = killed && twist.eigen(s, i).is_zero();
      }
      if (!killed) ++nonfixed;
    }
    rep.check("rank hL(P,1) equals rank L(P,1)", hL.rank_within(B) == L.rank_within(B));
    rep.check("rank L(P,1) equals the number of non-fixed monomials", L.rank_within(B) == nonfixed);
    return rep;
  }

  // y outside ker d_k together with ker d_k fills the window.
  GradedSpan K = kernel_d_graded(k, twist, B);
  auto ctx = exterior_context(twist, k);
  std::vector<FVElement> kseeds;
  for (const auto& [s, p] : K.parts())
    for (const auto& row : p.rows()) kseeds.emplace_back(ctx, GradedSpan::lift(s, row));
  long long filled = 0;
  for (int t = 0; t < trials; ++t) {
    FVElement y(ctx);
    do y = random_window_vector(ctx, B, rng);
    while (ltilde_member(k, y));
    auto seeds = kseeds;
    for (auto& c : weight_components(y)) seeds.push_back(std::move(c));
    auto res = closure(seeds, gens, window, window.L, opt);
    rep.absorb(res);
    if (res.verdict == Verdict::FillsWindow) ++filled;
  }
  rep.set("outsideSeedsFilling", filled);
  rep.check("ker d_k plus any outside vector fills the window", filled == trials);
  return rep;
}

struct IsoResult {
  bool equal = true;
  std::string reason;  // "eigenvalue-lattice", "character", or empty
};

/// Compares lambda modulo Z^n and the character of V.
inline IsoResult iso_evidence(const TwistParam& l1, const FinModule& V1, const TwistParam& l2, const FinModule& V2) {
  if (l1.rank() != l2.rank() || V1.rank() != V2.rank()) return IsoResult{false, "rank"};
  for (int i = 0; i < l1.rank(); ++i)
    if (!(l1[i] - l2[i]).is_integer()) return IsoResult{false, "eigenvalue-lattice"};
  if (character(V1) != character(V2)) return IsoResult{false, "character"};
  return IsoResult{true, ""};
}

}  // namespace torusrep
