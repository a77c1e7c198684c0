#pragma once

// Tensor modules P (x) V with P = A_n^lambda: the action (2.1)-style action of
// W_n / S_n, the second action through x^{r-e_j} d_j, the de Rham maps d_k and
// pi_k, the twist isomorphism phi, the submodules L_n(P,k) and the operators g_{i,s}.

#include "torusrep/exact_linalg.hpp"
#include "torusrep/multi_index.hpp"
#include "torusrep/slrep.hpp"
#include "torusrep/torusfields.hpp"
#include "torusrep/weyl.hpp"

#include <compare>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

namespace torusrep {

enum class ActionStyle { ShenLarsson, LLZ };

inline std::string to_string(ActionStyle s) { return s == ActionStyle::ShenLarsson ? "shen" : "llz"; }

// Basis vector x^s (x) v_b of P (x) V.
struct FVKey {
  MultiIndex s;
  int v = 0;
  friend auto operator<=>(const FVKey&, const FVKey&) = default;
  friend bool operator==(const FVKey&, const FVKey&) = default;
};

using FVVector = SparseVec<FVKey>;

struct FVContext {
  TwistParam twist;
  std::shared_ptr<const FinModule> module;
  ActionStyle style = ActionStyle::ShenLarsson;

  FVContext() = default;
  FVContext(TwistParam t, std::shared_ptr<const FinModule> m, ActionStyle st = ActionStyle::ShenLarsson)
      : twist(std::move(t)), module(std::move(m)), style(st) {
    if (!module) throw std::invalid_argument("FVContext: null module");
    if (twist.rank() != module->rank()) throw std::invalid_argument("FVContext: rank mismatch");
  }
  FVContext(TwistParam t, const FinModule& m, ActionStyle st = ActionStyle::ShenLarsson)
      : FVContext(std::move(t), shared_module(m), st) {}

  int rank() const { return twist.rank(); }
  const FinModule& V() const { return *module; }
  FVContext with_module(std::shared_ptr<const FinModule> m) const { return FVContext(twist, std::move(m), style); }
  FVContext with_style(ActionStyle st) const { return FVContext(twist, module, st); }
  FVContext with_twist(TwistParam t) const { return FVContext(std::move(t), module, style); }

  friend bool operator==(const FVContext& a, const FVContext& b) {
    return a.style == b.style && a.twist == b.twist && (a.module == b.module || *a.module == *b.module);
  }
};

class FVElement {
 public:
  FVElement() = default;
  explicit FVElement(FVContext ctx) : ctx_(std::move(ctx)) {}
  FVElement(FVContext ctx, FVVector terms) : ctx_(std::move(ctx)), terms_(std::move(terms)) {}

  static FVElement term(const FVContext& ctx, const MultiIndex& s, int b, const Rational& c = Rational(1)) {
    FVElement e(ctx);
    e.add(s, b, c);
    return e;
  }
  /// p (x) w
  static FVElement tensor(const FVContext& ctx, const LaurentPoly& p, const VVector& w) {
    FVElement e(ctx);
    for (const auto& [s, cp] : p)
      for (const auto& [b, cw] : w) e.add(s, b, cp * cw);
    return e;
  }

  const FVContext& context() const { return ctx_; }
  const FVVector& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add(const MultiIndex& s, int b, const Rational& c) {
    if (b < 0 || static_cast<std::size_t>(b) >= ctx_.V().dim()) throw std::invalid_argument("FVElement: key outside module");
    if (s.rank() != ctx_.rank()) throw std::invalid_argument("FVElement: rank mismatch");
    terms_.add(FVKey{s, b}, c);
  }
  void axpy(const Rational& c, const FVElement& o) {
    require_same(o);
    terms_.axpy(c, o.terms_);
  }

  FVElement& operator+=(const FVElement& o) {
    axpy(Rational(1), o);
    return *this;
  }
  FVElement& operator-=(const FVElement& o) {
    axpy(Rational(-1), o);
    return *this;
  }
  friend FVElement operator+(FVElement a, const FVElement& b) { return a += b; }
  friend FVElement operator-(FVElement a, const FVElement& b) { return a -= b; }
  friend FVElement operator*(const Rational& c, const FVElement& m) { return FVElement(m.ctx_, m.terms_.scaled(c)); }

  friend bool operator==(const FVElement& a, const FVElement& b) { return a.ctx_ == b.ctx_ && a.terms_ == b.terms_; }

  void require_same(const FVElement& o) const {
    if (!(ctx_ == o.ctx_)) throw std::invalid_argument("FVElement: mixing different module contexts");
  }

 private:
  FVContext ctx_;
  FVVector terms_;
};

/// Sorted "c · x^(s) ⊗ [key]" terms joined by " + "; "0" when empty.
inline std::string to_string(const FVElement& m) {
  if (m.is_zero()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [k, c] : m.terms()) {
    if (!first) out += " + ";
    first = false;
    out += c.to_string() + " · x^" + k.s.to_string() + " ⊗ " + m.context().V().key_string(k.v);
  }
  return out;
}

/// All x^s (x) v_b with |s_i| <= bound.
inline std::vector<FVElement> window_basis(const FVContext& ctx, int bound) {
  std::vector<FVElement> out;
  for (const auto& s : box(ctx.rank(), bound))
    for (std::size_t b = 0; b < ctx.V().dim(); ++b) out.push_back(FVElement::term(ctx, s, static_cast<int>(b)));
  return out;
}

namespace detail {

inline void require_style(const FVElement& m, ActionStyle st, const char* what) {
  if (m.context().style != st) throw std::invalid_argument(std::string(what) + ": wrong action style");
}

inline void require_rank(const FVElement& m, int n, const char* what) {
  if (m.context().rank() != n) throw std::invalid_argument(std::string(what) + ": rank mismatch");
}

/// Raw form of act_shen over precomputed r u^T action.
inline FVVector shen_apply(const FVVector& m, const RatVec& u, const MultiIndex& r, const SparseMatrix& ru,
                           const TwistParam& twist) {
  FVVector out;
  const bool has_matrix = !r.is_zero();
  for (const auto& [k, c] : m) {
    const MultiIndex t = k.s + r;
    Rational scal;
    for (int i = 0; i < twist.rank(); ++i) {
      const Rational& ui = u[static_cast<std::size_t>(i)];
      if (!ui.is_zero()) scal += ui * twist.eigen(k.s, i);
    }
    out.add(FVKey{t, k.v}, c * scal);
    if (has_matrix)
      for (const auto& [b, cb] : ru.cols[static_cast<std::size_t>(k.v)]) out.add(FVKey{t, b}, c * cb);
  }
  return out;
}

}  // namespace detail

/// D(u,r)(x^s (x) v) = (u|s - lambda) x^{s+r} (x) v + x^{s+r} (x) (r u^T) v
inline FVElement act_shen(const VectorField& X, const FVElement& m) {
  detail::require_style(m, ActionStyle::ShenLarsson, "act_shen");
  detail::require_rank(m, X.rank(), "act_shen");
  const FinModule& V = m.context().V();
  if (!X.is_divergence_free() && !V.id_scalar())
    throw std::domain_error("act_shen: field outside S_n needs a module with a declared identity scalar");
  SparseMatrix ru = V.rank_one_action(X.r, X.u);
  return FVElement(m.context(), detail::shen_apply(m.terms(), X.u, X.r, ru, m.context().twist));
}

inline FVElement act_shen(const FieldSum& X, const FVElement& m) {
  FVElement out(m.context());
  for (const auto& f : X.fields()) out += act_shen(f, m);
  return out;
}

/// x^s m
inline FVElement act_laurent(const MultiIndex& s, const FVElement& m) {
  detail::require_rank(m, s.rank(), "act_laurent");
  FVVector out;
  for (const auto& [k, c] : m.terms()) out.add(FVKey{k.s + s, k.v}, c);
  return FVElement(m.context(), std::move(out));
}

/// (x^{r-e_j} d_j)(p (x) w) = (x^{r-e_j} d_j p) (x) w + sum_i r_i x^{r-e_i} p (x) E_ij w
inline FVElement act_llz(int j, const MultiIndex& r, const FVElement& m) {
  detail::require_style(m, ActionStyle::LLZ, "act_llz");
  detail::require_rank(m, r.rank(), "act_llz");
  const int n = r.rank();
  if (j < 1 || j > n) throw std::invalid_argument("act_llz: index out of range");
  const FinModule& V = m.context().V();
  const TwistParam& twist = m.context().twist;
  FVVector out;
  const MultiIndex shift_j = r - MultiIndex::unit(n, j);
  for (const auto& [k, c] : m.terms()) {
    out.add(FVKey{k.s + shift_j, k.v}, c * twist.eigen(k.s, j - 1));
    for (int i = 1; i <= n; ++i) {
      if (r[i - 1] == 0) continue;
      const MultiIndex t = k.s + r - MultiIndex::unit(n, i);
      for (const auto& [b, cb] : V.action(i, j).cols[static_cast<std::size_t>(k.v)])
        out.add(FVKey{t, b}, c * Rational(r[i - 1]) * cb);
    }
  }
  return FVElement(m.context(), std::move(out));
}

/// D(u,a) = sum_j u_j x^{(a+e_j)-e_j} d_j in the second action.
inline FVElement act_llz(const VectorField& X, const FVElement& m) {
  FVElement out(m.context());
  for (int j = 1; j <= X.rank(); ++j) {
    const Rational& uj = X.u[static_cast<std::size_t>(j - 1)];
    if (!uj.is_zero()) out.axpy(uj, act_llz(j, X.r + MultiIndex::unit(X.rank(), j), m));
  }
  return out;
}

/// Dispatches on the element's action style.
inline FVElement act(const VectorField& X, const FVElement& m) {
  return m.context().style == ActionStyle::ShenLarsson ? act_shen(X, m) : act_llz(X, m);
}

namespace detail {

inline int exterior_level_of(const FVElement& m, int k, const char* what) {
  const FinModule& V = m.context().V();
  const int n = m.context().rank();
  if (k < 0 || k > n - 1) throw std::invalid_argument(std::string(what) + ": level out of range");
  if (!V.is_exterior(k)) throw std::invalid_argument(std::string(what) + ": module is not the matching exterior power");
  return k;
}

// sum_i c_i(s) x^{s + shift_i} (x) e_i ^ w
template <class Coef, class Shift>
FVElement wedge_map(int k, const FVElement& m, Coef coef, Shift shift, const char* what) {
  exterior_level_of(m, k, what);
  const int n = m.context().rank();
  auto target = exterior_module(n, k + 1);
  FVElement out(m.context().with_module(target));
  const FinModule& from = m.context().V();
  for (const auto& [key, c] : m.terms()) {
    const BasisKey& w = from.key(key.v);
    for (int i = 1; i <= n; ++i) {
      if (std::find(w.begin(), w.end(), i) != w.end()) continue;
      Rational e = coef(key.s, i);
      if (e.is_zero()) continue;
      int below = static_cast<int>(std::count_if(w.begin(), w.end(), [i](int x) { return x < i; }));
      BasisKey nk = w;
      nk.insert(nk.begin() + below, i);
      out.add(key.s + shift(i), target->index_of(nk), below % 2 == 0 ? c * e : -(c * e));
    }
  }
  return out;
}

}  // namespace detail

/// d_k(p (x) w) = sum_i d_i p (x) e_i ^ w
inline FVElement d_map(int k, const FVElement& m) {
  const TwistParam& tw = m.context().twist;
  const int n = m.context().rank();
  return detail::wedge_map(
      k, m, [&](const MultiIndex& s, int i) { return tw.eigen(s, i - 1); }, [n](int) { return MultiIndex(n); },
      "d_map");
}

/// pi_k(p (x) w) = sum_i x^{-e_i} d_i p (x) e_i ^ w
inline FVElement pi_map(int k, const FVElement& m) {
  detail::require_style(m, ActionStyle::LLZ, "pi_map");
  const TwistParam& tw = m.context().twist;
  const int n = m.context().rank();
  return detail::wedge_map(
      k, m, [&](const MultiIndex& s, int i) { return tw.eigen(s, i - 1); },
      [n](int i) { return -MultiIndex::unit(n, i); }, "pi_map");
}

namespace detail {

inline MultiIndex weight_shift(const FinModule& V, int b, const TwistParam& lambdaV) {
  const auto& wt = V.weight(b);
  MultiIndex mu(V.rank());
  for (int i = 0; i < V.rank(); ++i) {
    Rational d = Rational(wt[static_cast<std::size_t>(i)]) - lambdaV[i];
    if (!d.is_integer()) throw std::invalid_argument("phi_map: weights are not lambda + integral");
    mu[i] = static_cast<int>(std::stol(d.to_string()));
  }
  return mu;
}

inline TwistParam add_twists(const TwistParam& a, const TwistParam& b) {
  RatVec l(a.lambda.size());
  for (std::size_t i = 0; i < l.size(); ++i) l[i] = a.lambda[i] + b.lambda[i];
  return TwistParam(std::move(l));
}

}  // namespace detail

/// phi(p (x) v_mu) = x^{-mu} p (x) v_mu, where v_mu has gl-weight lambdaV + mu.
/// Maps the first action on P (x) V to the second action on P^{lambdaV} (x) V.
inline FVElement phi_map(const FVElement& m, const TwistParam& lambdaV) {
  detail::require_style(m, ActionStyle::ShenLarsson, "phi_map");
  detail::require_rank(m, lambdaV.rank(), "phi_map");
  const FinModule& V = m.context().V();
  FVContext target(detail::add_twists(m.context().twist, lambdaV), m.context().module, ActionStyle::LLZ);
  FVVector out;
  for (const auto& [k, c] : m.terms()) out.add(FVKey{k.s - detail::weight_shift(V, k.v, lambdaV), k.v}, c);
  return FVElement(std::move(target), std::move(out));
}

inline FVElement phi_map(const FVElement& m) { return phi_map(m, TwistParam::zero(m.context().rank())); }

inline FVElement phi_inverse(const FVElement& m, const TwistParam& lambdaV) {
  detail::require_style(m, ActionStyle::LLZ, "phi_inverse");
  const FinModule& V = m.context().V();
  RatVec l(lambdaV.lambda.size());
  for (std::size_t i = 0; i < l.size(); ++i) l[i] = m.context().twist.lambda[i] - lambdaV.lambda[i];
  FVContext target(TwistParam(std::move(l)), m.context().module, ActionStyle::ShenLarsson);
  FVVector out;
  for (const auto& [k, c] : m.terms()) out.add(FVKey{k.s + detail::weight_shift(V, k.v, lambdaV), k.v}, c);
  return FVElement(std::move(target), std::move(out));
}

inline FVElement phi_inverse(const FVElement& m) { return phi_inverse(m, TwistParam::zero(m.context().rank())); }

/// Context for P (x) Lambda^k with the first action.
inline FVContext exterior_context(const TwistParam& twist, int k, ActionStyle st = ActionStyle::ShenLarsson) {
  return FVContext(twist, exterior_module(twist.rank(), k), st);
}

/// p ⊠ w = d_{k-1}(p (x) w) for w in Lambda^{k-1}.
inline FVElement boxtimes(const LaurentPoly& p, const VVector& w, const TwistParam& twist, int k) {
  const int n = twist.rank();
  if (k < 1 || k > n) throw std::invalid_argument("boxtimes: level out of range");
  return d_map(k - 1, FVElement::tensor(exterior_context(twist, k - 1), p, w));
}

/// Span of x^s ⊠ w over |s_i| <= bound and a basis of Lambda^{k-1}; empty for k = 0.
inline SpanBasis<FVKey> l_span(int k, const TwistParam& twist, int bound) {
  SpanBasis<FVKey> span;
  const int n = twist.rank();
  if (k < 0 || k > n) throw std::invalid_argument("l_span: level out of range");
  if (k == 0) return span;
  auto ctx = exterior_context(twist, k - 1);
  for (const auto& s : box(n, bound))
    for (std::size_t b = 0; b < ctx.V().dim(); ++b)
      span.insert(d_map(k - 1, FVElement::term(ctx, s, static_cast<int>(b))).terms());
  return span;
}

/// Generators x^s ⊠ w of L_n(P,k) in the window, before reduction.
inline std::vector<FVElement> l_generators(int k, const TwistParam& twist, int bound) {
  std::vector<FVElement> out;
  if (k == 0) return out;
  auto ctx = exterior_context(twist, k - 1);
  for (const auto& s : box(twist.rank(), bound))
    for (std::size_t b = 0; b < ctx.V().dim(); ++b) {
      auto g = d_map(k - 1, FVElement::term(ctx, s, static_cast<int>(b)));
      if (!g.is_zero()) out.push_back(std::move(g));
    }
  return out;
}

/// m lies in the kernel of d_k.
inline bool ltilde_member(int k, const FVElement& m) { return d_map(k, m).is_zero(); }

/// g_{i,s}(p (x) w) = x^s d_{i+1}p (x) E_{i,i+2}w - x^s d_{i+2}p (x) E_{i,i+1}w
///                    + sum_l x^s d_l p (x) E_{l,i+2}E_{i,i+1}w
inline FVElement g_map(int i, const MultiIndex& s, const FVElement& m) {
  const int n = m.context().rank();
  detail::require_rank(m, s.rank(), "g_map");
  if (n < 3 || i < 1 || i + 2 > n) throw std::invalid_argument("g_map: need 1 <= i <= n-2");
  const FinModule& V = m.context().V();
  bool ok = false;
  for (int k = 1; k <= n; ++k) ok = ok || V.is_exterior(k);
  if (!ok) throw std::invalid_argument("g_map: module must be an exterior power of degree >= 1");
  const TwistParam& tw = m.context().twist;
  FVVector out;
  auto emit = [&](const MultiIndex& t, const VVector& w, const Rational& c) {
    for (const auto& [b, cb] : w) out.add(FVKey{t, b}, c * cb);
  };
  for (const auto& [k, c] : m.terms()) {
    const MultiIndex t = k.s + s;
    const VVector w = VVector::unit(k.v);
    emit(t, V.action(i, i + 2).apply(w), c * tw.eigen(k.s, i));
    const VVector e12 = V.action(i, i + 1).apply(w);
    emit(t, e12, -(c * tw.eigen(k.s, i + 1)));
    for (int l = 1; l <= n; ++l) {
      Rational e = tw.eigen(k.s, l - 1);
      if (e.is_zero()) continue;
      emit(t, V.action(l, i + 2).apply(e12), c * e);
    }
  }
  return FVElement(m.context(), std::move(out));
}

/// Simultaneous eigenvalues of D(e_i, 0) on a basis vector.
inline RatVec cartan_eigenvalues(const FVContext& ctx, const FVKey& k) {
  RatVec w = ctx.twist.weight(k.s);
  if (ctx.style == ActionStyle::LLZ) {
    const auto& wt = ctx.V().weight(k.v);
    for (std::size_t i = 0; i < w.size(); ++i) w[i] += Rational(wt[i]);
  }
  return w;
}

/// Splits m into simultaneous eigenvectors of the d_i.
inline std::map<RatVec, FVElement> weight_decompose(const FVElement& m) {
  std::map<RatVec, FVElement> out;
  for (const auto& [k, c] : m.terms()) {
    auto [it, inserted] = out.try_emplace(cartan_eigenvalues(m.context(), k), m.context());
    it->second.add(k.s, k.v, c);
  }
  return out;
}

/// h F = span of d_i(x^s (x) v) in the window (first action, where d_i acts diagonally).
inline SpanBasis<FVKey> hF_span(const FVContext& ctx, int bound) {
  SpanBasis<FVKey> span;
  for (const auto& s : box(ctx.rank(), bound))
    for (std::size_t b = 0; b < ctx.V().dim(); ++b)
      for (int i = 1; i <= ctx.rank(); ++i)
        span.insert(act_shen(VectorField::euler(ctx.rank(), i), FVElement::term(ctx, s, static_cast<int>(b))).terms());
  return span;
}

}  // namespace torusrep
