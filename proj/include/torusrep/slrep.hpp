#pragma once

// Finite-dimensional gl_n / sl_n modules with explicit bases: trivial, natural,
// exterior powers, symmetric powers and the adjoint module.

#include "torusrep/exact_linalg.hpp"
#include "torusrep/multi_index.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

namespace torusrep {

/// Basis keys are integer tuples ordered lexicographically.
using BasisKey = std::vector<int>;

/// Vectors of a FinModule, indexed by basis position (the basis is sorted by key).
using VVector = SparseVec<int>;

// E_ij, 1-based.
struct MatrixUnit {
  int i = 1;
  int j = 1;
};

// Dense n x n rational matrix.
class GlMatrix {
 public:
  explicit GlMatrix(int n) : n_(n), a_(static_cast<std::size_t>(n * n)) {}
  static GlMatrix unit(int n, int i, int j) {
    GlMatrix m(n);
    m(i, j) = 1;
    return m;
  }
  int rank() const { return n_; }
  /// 1-based entry access.
  Rational& operator()(int i, int j) { return a_[static_cast<std::size_t>((i - 1) * n_ + (j - 1))]; }
  const Rational& operator()(int i, int j) const { return a_[static_cast<std::size_t>((i - 1) * n_ + (j - 1))]; }

  Rational trace() const {
    Rational t;
    for (int i = 1; i <= n_; ++i) t += (*this)(i, i);
    return t;
  }
  bool is_traceless() const { return trace().is_zero(); }

  RatVec apply(const RatVec& v) const {
    RatVec out(static_cast<std::size_t>(n_));
    for (int i = 1; i <= n_; ++i)
      for (int j = 1; j <= n_; ++j) out[static_cast<std::size_t>(i - 1)] += (*this)(i, j) * v[static_cast<std::size_t>(j - 1)];
    return out;
  }
  friend GlMatrix operator*(const GlMatrix& a, const GlMatrix& b) {
    GlMatrix c(a.n_);
    for (int i = 1; i <= a.n_; ++i)
      for (int k = 1; k <= a.n_; ++k) {
        if (a(i, k).is_zero()) continue;
        for (int j = 1; j <= a.n_; ++j) c(i, j) += a(i, k) * b(k, j);
      }
    return c;
  }
  friend bool operator==(const GlMatrix&, const GlMatrix&) = default;

 private:
  int n_;
  std::vector<Rational> a_;
};

/// h_i = E_ii - E_{i+1,i+1}
inline GlMatrix cartan_h(int n, int i) {
  GlMatrix m(n);
  m(i, i) = 1;
  m(i + 1, i + 1) = -1;
  return m;
}

/// The matrix r u^T, acting by (r u^T) v = (u|v) r.
inline GlMatrix rank_one(const MultiIndex& r, const RatVec& u) {
  const int n = r.rank();
  if (static_cast<int>(u.size()) != n) throw std::invalid_argument("rank_one: length mismatch");
  GlMatrix m(n);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) m(i, j) = Rational(r[i - 1]) * u[static_cast<std::size_t>(j - 1)];
  return m;
}

// Sparse square matrix stored by columns: column b is the image of basis vector b.
struct SparseMatrix {
  std::vector<VVector> cols;

  std::size_t dim() const { return cols.size(); }
  VVector apply(const VVector& v) const {
    VVector out;
    for (const auto& [b, c] : v) out.axpy(c, cols[static_cast<std::size_t>(b)]);
    return out;
  }
  bool is_zero() const {
    return std::all_of(cols.begin(), cols.end(), [](const VVector& c) { return c.empty(); });
  }
  static SparseMatrix zero(std::size_t d) { return SparseMatrix{std::vector<VVector>(d)}; }
  static SparseMatrix identity(std::size_t d) {
    SparseMatrix m = zero(d);
    for (std::size_t b = 0; b < d; ++b) m.cols[b] = VVector::unit(static_cast<int>(b));
    return m;
  }
  /// this * other
  SparseMatrix compose(const SparseMatrix& other) const {
    SparseMatrix m;
    m.cols.reserve(other.cols.size());
    for (const auto& c : other.cols) m.cols.push_back(apply(c));
    return m;
  }
  void axpy(const Rational& c, const SparseMatrix& other) {
    for (std::size_t b = 0; b < cols.size(); ++b) cols[b].axpy(c, other.cols[b]);
  }
  friend bool operator==(const SparseMatrix&, const SparseMatrix&) = default;
};

enum class ModuleKind { Trivial, Natural, Exterior, Symmetric, Adjoint };

// A finite-dimensional gl_n-module with explicit E_ij action matrices.
class FinModule {
 public:
  static FinModule trivial(int n) { return build(ModuleKind::Trivial, n, 0); }
  static FinModule natural(int n) { return build(ModuleKind::Natural, n, 1); }
  static FinModule exterior(int n, int k) {
    if (k < 0 || k > n) throw std::invalid_argument("exterior: k out of range");
    return build(ModuleKind::Exterior, n, k);
  }
  static FinModule symmetric(int n, int m) {
    if (m < 0) throw std::invalid_argument("symmetric: negative degree");
    return build(ModuleKind::Symmetric, n, m);
  }
  static FinModule adjoint(int n) { return build(ModuleKind::Adjoint, n, 0); }

  /// Parses `trivial`, `natural`, `ext:k`, `sym:m`, `adjoint`.
  static FinModule parse(const std::string& spec, int n) {
    if (spec == "trivial") return trivial(n);
    if (spec == "natural") return natural(n);
    if (spec == "adjoint") return adjoint(n);
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
      std::string head = spec.substr(0, colon);
      int p = 0;
      try {
        std::size_t used = 0;
        p = std::stoi(spec.substr(colon + 1), &used);
        if (used != spec.size() - colon - 1) throw std::invalid_argument("trailing");
      } catch (const std::exception&) {
        throw std::invalid_argument("module: bad parameter in '" + spec + "'");
      }
      if (head == "ext") return exterior(n, p);
      if (head == "sym") return symmetric(n, p);
    }
    throw std::invalid_argument("module: unknown kind '" + spec + "'");
  }

  /// The same action with no declared scalar for the identity (an sl_n-module only).
  FinModule as_sl_module() const {
    FinModule m = *this;
    m.id_scalar_.reset();
    return m;
  }

  ModuleKind kind() const { return kind_; }
  int rank() const { return n_; }
  int param() const { return param_; }
  std::size_t dim() const { return basis_.size(); }
  const std::vector<BasisKey>& basis() const { return basis_; }
  const BasisKey& key(int b) const { return basis_[static_cast<std::size_t>(b)]; }
  int index_of(const BasisKey& k) const {
    auto it = std::lower_bound(basis_.begin(), basis_.end(), k);
    if (it == basis_.end() || *it != k) throw std::invalid_argument("FinModule: key not in basis");
    return static_cast<int>(it - basis_.begin());
  }
  const std::optional<Rational>& id_scalar() const { return id_scalar_; }

  /// Matrix of E_ij (1-based).
  const SparseMatrix& action(int i, int j) const {
    return act_[static_cast<std::size_t>((i - 1) * n_ + (j - 1))];
  }
  /// gl_n weight (E_ii eigenvalues) of basis vector b.
  const std::vector<int>& weight(int b) const { return weights_[static_cast<std::size_t>(b)]; }

  /// Action matrix of an arbitrary gl_n element.
  SparseMatrix action_of(const GlMatrix& x) const {
    SparseMatrix m = SparseMatrix::zero(dim());
    for (int i = 1; i <= n_; ++i)
      for (int j = 1; j <= n_; ++j)
        if (!x(i, j).is_zero()) m.axpy(x(i, j), action(i, j));
    return m;
  }

  /// Action matrix of r u^T without forming the dense matrix.
  SparseMatrix rank_one_action(const MultiIndex& r, const RatVec& u) const {
    SparseMatrix m = SparseMatrix::zero(dim());
    for (int i = 1; i <= n_; ++i) {
      if (r[i - 1] == 0) continue;
      for (int j = 1; j <= n_; ++j) {
        const Rational& uj = u[static_cast<std::size_t>(j - 1)];
        if (uj.is_zero()) continue;
        m.axpy(Rational(r[i - 1]) * uj, action(i, j));
      }
    }
    return m;
  }

  bool is_exterior(int k) const {
    return (kind_ == ModuleKind::Exterior && param_ == k) || (kind_ == ModuleKind::Natural && k == 1) ||
           (kind_ == ModuleKind::Trivial && k == 0);
  }
  /// Exterior power index when the module is a fundamental module V(delta_k), k <= n-1.
  std::optional<int> exterior_level() const {
    for (int k = 0; k < n_; ++k)
      if (is_exterior(k)) return k;
    return std::nullopt;
  }
  bool is_minuscule() const { return exterior_level().has_value(); }

  /// `natural`, `ext:2`, ...
  std::string name() const {
    switch (kind_) {
      case ModuleKind::Trivial: return "trivial";
      case ModuleKind::Natural: return "natural";
      case ModuleKind::Exterior: return "ext:" + std::to_string(param_);
      case ModuleKind::Symmetric: return "sym:" + std::to_string(param_);
      case ModuleKind::Adjoint: return "adjoint";
    }
    return "?";
  }
  std::string key_string(int b) const {
    std::string s = "[";
    const auto& k = key(b);
    for (std::size_t i = 0; i < k.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(k[i]);
    }
    return s + "]";
  }

  friend bool operator==(const FinModule& a, const FinModule& b) {
    return a.kind_ == b.kind_ && a.n_ == b.n_ && a.param_ == b.param_ && a.id_scalar_ == b.id_scalar_;
  }

 private:
  static FinModule build(ModuleKind kind, int n, int param) {
    if (n < 2 || n > kMaxRank) throw std::invalid_argument("FinModule: rank out of range");
    FinModule m;
    m.kind_ = kind;
    m.n_ = n;
    m.param_ = param;
    switch (kind) {
      case ModuleKind::Trivial: m.basis_ = {BasisKey{}}; m.id_scalar_ = Rational(0); break;
      case ModuleKind::Natural:
        for (int i = 1; i <= n; ++i) m.basis_.push_back({i});
        m.id_scalar_ = Rational(1);
        break;
      case ModuleKind::Exterior: m.basis_ = subsets(n, param); m.id_scalar_ = Rational(param); break;
      case ModuleKind::Symmetric: m.basis_ = compositions(n, param); m.id_scalar_ = Rational(param); break;
      case ModuleKind::Adjoint:
        for (int i = 1; i <= n; ++i)
          for (int j = 1; j <= n; ++j)
            if (i != j || i < n) m.basis_.push_back({i, j});
        m.id_scalar_ = Rational(0);
        break;
    }
    std::sort(m.basis_.begin(), m.basis_.end());
    const std::size_t d = m.basis_.size();
    m.act_.assign(static_cast<std::size_t>(n * n), SparseMatrix::zero(d));
    m.weights_.assign(d, std::vector<int>(static_cast<std::size_t>(n), 0));
    for (std::size_t b = 0; b < d; ++b) {
      m.weights_[b] = m.compute_weight(m.basis_[b]);
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j) m.act_[static_cast<std::size_t>((i - 1) * n + (j - 1))].cols[b] = m.apply_unit(i, j, m.basis_[b]);
    }
    return m;
  }

  static std::vector<BasisKey> subsets(int n, int k) {
    std::vector<BasisKey> out;
    BasisKey cur;
    auto rec = [&](auto&& self, int start) -> void {
      if (static_cast<int>(cur.size()) == k) {
        out.push_back(cur);
        return;
      }
      for (int i = start; i <= n; ++i) {
        cur.push_back(i);
        self(self, i + 1);
        cur.pop_back();
      }
    };
    rec(rec, 1);
    return out;
  }

  static std::vector<BasisKey> compositions(int n, int m) {
    std::vector<BasisKey> out;
    BasisKey cur(static_cast<std::size_t>(n), 0);
    auto rec = [&](auto&& self, int pos, int left) -> void {
      if (pos == n - 1) {
        cur[static_cast<std::size_t>(pos)] = left;
        out.push_back(cur);
        return;
      }
      for (int a = 0; a <= left; ++a) {
        cur[static_cast<std::size_t>(pos)] = a;
        self(self, pos + 1, left - a);
      }
    };
    rec(rec, 0, m);
    return out;
  }

  std::vector<int> compute_weight(const BasisKey& k) const {
    std::vector<int> w(static_cast<std::size_t>(n_), 0);
    switch (kind_) {
      case ModuleKind::Trivial: break;
      case ModuleKind::Natural:
      case ModuleKind::Exterior:
        for (int i : k) w[static_cast<std::size_t>(i - 1)] = 1;
        break;
      case ModuleKind::Symmetric: w = k; break;
      case ModuleKind::Adjoint:
        if (k[0] != k[1]) {
          w[static_cast<std::size_t>(k[0] - 1)] += 1;
          w[static_cast<std::size_t>(k[1] - 1)] -= 1;
        }
        break;
    }
    return w;
  }

  // Image of basis key under E_ij, expressed over basis indices.
  VVector apply_unit(int i, int j, const BasisKey& k) const {
    VVector out;
    switch (kind_) {
      case ModuleKind::Trivial: break;
      case ModuleKind::Natural:
        if (k[0] == j) out.add(index_of({i}), Rational(1));
        break;
      case ModuleKind::Exterior: {
        // derivation rule: replace e_j by e_i in the wedge, then re-sort
        auto pos = std::find(k.begin(), k.end(), j);
        if (pos == k.end()) break;
        if (i == j) {
          out.add(index_of(k), Rational(1));
          break;
        }
        if (std::find(k.begin(), k.end(), i) != k.end()) break;
        BasisKey w = k;
        w[static_cast<std::size_t>(pos - k.begin())] = i;
        int sign = sort_with_sign(w);
        out.add(index_of(w), Rational(sign));
        break;
      }
      case ModuleKind::Symmetric: {
        int aj = k[static_cast<std::size_t>(j - 1)];
        if (aj == 0) break;
        BasisKey w = k;
        w[static_cast<std::size_t>(j - 1)] -= 1;
        w[static_cast<std::size_t>(i - 1)] += 1;
        out.add(index_of(w), Rational(aj));
        break;
      }
      case ModuleKind::Adjoint: {
        // [E_ij, X] with X the basis element named by k, re-expanded in the basis
        GlMatrix x = adjoint_element(k);
        GlMatrix e = GlMatrix::unit(n_, i, j);
        GlMatrix c = e * x;
        GlMatrix xe = x * e;
        for (int a = 1; a <= n_; ++a)
          for (int b = 1; b <= n_; ++b) c(a, b) -= xe(a, b);
        out = adjoint_coordinates(c);
        break;
      }
    }
    return out;
  }

  GlMatrix adjoint_element(const BasisKey& k) const {
    if (k[0] != k[1]) return GlMatrix::unit(n_, k[0], k[1]);
    return cartan_h(n_, k[0]);
  }

  // Coordinates of a traceless matrix in the basis {E_ab (a != b), h_c}.
  VVector adjoint_coordinates(const GlMatrix& x) const {
    VVector out;
    Rational cumulative;
    for (int a = 1; a <= n_; ++a)
      for (int b = 1; b <= n_; ++b)
        if (a != b && !x(a, b).is_zero()) out.add(index_of({a, b}), x(a, b));
    for (int c = 1; c < n_; ++c) {
      cumulative += x(c, c);
      out.add(index_of({c, c}), cumulative);
    }
    return out;
  }

  static int sort_with_sign(BasisKey& w) {
    int sign = 1;
    for (std::size_t a = 0; a < w.size(); ++a)
      for (std::size_t b = a + 1; b < w.size(); ++b)
        if (w[a] > w[b]) {
          std::swap(w[a], w[b]);
          sign = -sign;
        }
    return sign;
  }

  ModuleKind kind_ = ModuleKind::Trivial;
  int n_ = 0;
  int param_ = 0;
  std::vector<BasisKey> basis_;
  std::vector<SparseMatrix> act_;
  std::vector<std::vector<int>> weights_;
  std::optional<Rational> id_scalar_;
};

/// Shared, cached module instances.
inline std::shared_ptr<const FinModule> shared_module(const FinModule& m) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, int, bool, std::string>, std::shared_ptr<const FinModule>> cache;
  auto key = std::make_tuple(static_cast<int>(m.kind()), m.rank(), m.param(), m.id_scalar().has_value(),
                             m.id_scalar() ? m.id_scalar()->to_string() : std::string());
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto p = std::make_shared<const FinModule>(m);
  cache.emplace(key, p);
  return p;
}

inline std::shared_ptr<const FinModule> exterior_module(int n, int k) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const FinModule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{n, k}];
  if (!slot) slot = std::make_shared<const FinModule>(FinModule::exterior(n, k));
  return slot;
}

inline VVector e_act(const MatrixUnit& unit, const VVector& v, const FinModule& module) {
  if (unit.i < 1 || unit.j < 1 || unit.i > module.rank() || unit.j > module.rank())
    throw std::invalid_argument("e_act: index out of range");
  return module.action(unit.i, unit.j).apply(v);
}

/// e_i wedge w for w in the exterior power of degree k (sorted-subset keys).
inline VVector wedge(int i, const VVector& w, const FinModule& from, const FinModule& to) {
  auto k = from.exterior_level();
  if (!from.is_exterior(from.kind() == ModuleKind::Exterior ? from.param() : (k ? *k : -1)) ||
      !to.is_exterior(static_cast<int>(from.basis().front().size()) + 1))
    throw std::invalid_argument("wedge: modules are not consecutive exterior powers");
  VVector out;
  for (const auto& [b, c] : w) {
    const BasisKey& key = from.key(b);
    if (std::find(key.begin(), key.end(), i) != key.end()) continue;
    int below = static_cast<int>(std::count_if(key.begin(), key.end(), [i](int x) { return x < i; }));
    BasisKey nk = key;
    nk.insert(nk.begin() + below, i);
    out.add(to.index_of(nk), below % 2 == 0 ? c : -c);
  }
  return out;
}

inline std::vector<int> weight_of(const BasisKey& key, const FinModule& module) {
  return module.weight(module.index_of(key));
}

/// True iff every E_ij with i != j acts nilpotently (its dim-th power vanishes).
inline bool nilpotency_check(const FinModule& module) {
  for (int i = 1; i <= module.rank(); ++i)
    for (int j = 1; j <= module.rank(); ++j) {
      if (i == j) continue;
      const SparseMatrix& a = module.action(i, j);
      SparseMatrix p = SparseMatrix::identity(module.dim());
      for (std::size_t t = 0; t < module.dim(); ++t) p = a.compose(p);
      if (!p.is_zero()) return false;
    }
  return true;
}

/// Multiset of gl_n weights, sorted.
inline std::vector<std::vector<int>> character(const FinModule& module) {
  std::vector<std::vector<int>> ch;
  for (std::size_t b = 0; b < module.dim(); ++b) ch.push_back(module.weight(static_cast<int>(b)));
  std::sort(ch.begin(), ch.end());
  return ch;
}

inline std::string to_string(const VVector& v, const FinModule& module) {
  if (v.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [b, c] : v) {
    if (!first) out += " + ";
    first = false;
    out += c.to_string() + "·" + module.key_string(b);
  }
  return out;
}

}  // namespace torusrep
