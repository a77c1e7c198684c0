#pragma once

// Laurent polynomials A_n, the Weyl algebra K_n in normal order x^r d^a (with
// d_i = x_i d/dx_i the Euler operators), and the twisted weight modules A_n^lambda.

#include "torusrep/exact_linalg.hpp"
#include "torusrep/multi_index.hpp"

#include <cctype>
#include <compare>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace torusrep {

using LaurentPoly = SparseVec<MultiIndex>;

inline LaurentPoly monomial(const MultiIndex& s, const Rational& c = Rational(1)) {
  LaurentPoly p;
  p.add(s, c);
  return p;
}

/// x^r * p
inline LaurentPoly shift(const LaurentPoly& p, const MultiIndex& r) {
  LaurentPoly out;
  for (const auto& [s, c] : p) out.add(s + r, c);
  return out;
}

// The twist lambda; d_j acts on A_n^lambda as d_j - lambda_j.
struct TwistParam {
  RatVec lambda;

  TwistParam() = default;
  explicit TwistParam(RatVec l) : lambda(std::move(l)) {}
  static TwistParam zero(int n) { return TwistParam(RatVec(static_cast<std::size_t>(n))); }

  int rank() const { return static_cast<int>(lambda.size()); }
  const Rational& operator[](int i) const { return lambda[static_cast<std::size_t>(i)]; }

  bool is_integral() const {
    for (const auto& x : lambda)
      if (!x.is_integer()) return false;
    return true;
  }
  /// The exponent s with x^s killed by every d_i; only meaningful when integral.
  MultiIndex as_multi_index() const {
    MultiIndex m(rank());
    for (int i = 0; i < rank(); ++i) {
      if (!lambda[static_cast<std::size_t>(i)].is_integer())
        throw std::invalid_argument("TwistParam: not integral");
      m[i] = static_cast<int>(std::stol(lambda[static_cast<std::size_t>(i)].to_string()));
    }
    return m;
  }
  /// d_i eigenvalue of x^s: s_i - lambda_i.
  Rational eigen(const MultiIndex& s, int i) const {
    return Rational(s[i]) - lambda[static_cast<std::size_t>(i)];
  }
  /// The full eigenvalue tuple s - lambda.
  RatVec weight(const MultiIndex& s) const {
    RatVec w(lambda.size());
    for (int i = 0; i < rank(); ++i) w[static_cast<std::size_t>(i)] = eigen(s, i);
    return w;
  }

  friend bool operator==(const TwistParam&, const TwistParam&) = default;

  static TwistParam parse(std::string_view csv) {
    RatVec l;
    std::size_t start = 0;
    while (start <= csv.size()) {
      auto comma = csv.find(',', start);
      auto piece = csv.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
      l.push_back(Rational::parse(piece));
      if (comma == std::string_view::npos) break;
      start = comma + 1;
    }
    return TwistParam(std::move(l));
  }
  std::string to_string() const {
    std::string s;
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      if (i) s += ",";
      s += lambda[i].to_string();
    }
    return s;
  }
};

// Normal-ordered monomial x^r d^a of the Weyl algebra.
struct WeylKey {
  MultiIndex r;
  MultiIndex a;  // nonnegative
  friend auto operator<=>(const WeylKey&, const WeylKey&) = default;
  friend bool operator==(const WeylKey&, const WeylKey&) = default;
};

using WeylElement = SparseVec<WeylKey>;

inline WeylElement weyl_monomial(const MultiIndex& r, const MultiIndex& a, const Rational& c = Rational(1)) {
  for (int i = 0; i < a.rank(); ++i)
    if (a[i] < 0) throw std::invalid_argument("weyl_monomial: negative derivative degree");
  WeylElement w;
  w.add(WeylKey{r, a}, c);
  return w;
}

/// x^r as an element of K_n.
inline WeylElement weyl_x(const MultiIndex& r) { return weyl_monomial(r, MultiIndex(r.rank())); }

/// The Euler operator d_i (1-based).
inline WeylElement weyl_d(int n, int i) { return weyl_monomial(MultiIndex(n), MultiIndex::unit(n, i)); }

/// D(u, r) = x^r sum_i u_i d_i, as an element of K_n.
inline WeylElement weyl_field(const RatVec& u, const MultiIndex& r) {
  WeylElement w;
  for (int i = 0; i < r.rank(); ++i) w.add(WeylKey{r, MultiIndex::unit(r.rank(), i + 1)}, u[static_cast<std::size_t>(i)]);
  return w;
}

namespace detail {

inline Rational binomial(int n, int k) {
  Rational b(1);
  for (int i = 1; i <= k; ++i) b = b * Rational(n - k + i) / Rational(i);
  return b;
}

inline Rational ipow(const Rational& x, int e) {
  Rational p(1);
  for (int i = 0; i < e; ++i) p *= x;
  return p;
}

}  // namespace detail

/// Product in K_n, normal ordered via d_i x^s = x^s (d_i + s_i).
inline WeylElement weyl_product(const WeylElement& lhs, const WeylElement& rhs) {
  WeylElement out;
  for (const auto& [ka, ca] : lhs) {
    const int n = ka.a.rank();
    for (const auto& [kb, cb] : rhs) {
      if (kb.r.rank() != n) throw std::invalid_argument("weyl_product: rank mismatch");
      // d^a x^s = x^s prod_i (d_i + s_i)^{a_i} = x^s sum_{c<=a} prod_i C(a_i,c_i) s_i^{a_i-c_i} d^c
      MultiIndex c(n);
      while (true) {
        Rational coeff = ca * cb;
        for (int i = 0; i < n && !coeff.is_zero(); ++i)
          coeff *= detail::binomial(ka.a[i], c[i]) * detail::ipow(Rational(kb.r[i]), ka.a[i] - c[i]);
        if (!coeff.is_zero()) out.add(WeylKey{ka.r + kb.r, c + kb.a}, coeff);
        int i = n - 1;
        while (i >= 0 && c[i] == ka.a[i]) {
          c[i] = 0;
          --i;
        }
        if (i < 0) break;
        ++c[i];
      }
    }
  }
  return out;
}

/// y o_lambda p: acts through the twisted automorphism d_j -> d_j - lambda_j.
inline LaurentPoly act_P(const WeylElement& y, const LaurentPoly& p, const TwistParam& twist) {
  LaurentPoly out;
  for (const auto& [k, c] : y) {
    if (k.r.rank() != twist.rank()) throw std::invalid_argument("act_P: rank mismatch");
    for (const auto& [s, cs] : p) {
      Rational coeff = c * cs;
      for (int i = 0; i < twist.rank() && !coeff.is_zero(); ++i)
        coeff *= detail::ipow(twist.eigen(s, i), k.a[i]);
      out.add(k.r + s, coeff);
    }
  }
  return out;
}

/// Span of {d_i x^s : |s_j| <= bound, 1 <= i <= n} inside A_n^lambda.
inline SpanBasis<MultiIndex> hP_span(const TwistParam& twist, int bound) {
  if (bound < 0) throw std::invalid_argument("hP_span: empty window");
  SpanBasis<MultiIndex> span;
  for (const auto& s : box(twist.rank(), bound))
    for (int i = 0; i < twist.rank(); ++i) span.insert(monomial(s, twist.eigen(s, i)));
  return span;
}

/// Terms "c x^(r1,...,rn)" in key order, joined by " + "; "0" when empty.
inline std::string to_string(const LaurentPoly& p) {
  if (p.empty()) return "0";
  std::string out;
  bool first = true;
  for (const auto& [s, c] : p) {
    if (!first) out += " + ";
    first = false;
    out += c.to_string() + " x^" + s.to_string();
  }
  return out;
}

inline LaurentPoly parse_laurent(std::string_view text, int n) {
  LaurentPoly p;
  auto trim = [](std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text == "0") return p;
  std::size_t pos = 0;
  while (pos < text.size()) {
    auto next = text.find(" + ", pos);
    auto term = trim(text.substr(pos, next == std::string_view::npos ? std::string_view::npos : next - pos));
    auto sp = term.find(" x^(");
    if (sp == std::string_view::npos || term.back() != ')')
      throw std::invalid_argument("parse_laurent: malformed term '" + std::string(term) + "'");
    Rational c = Rational::parse(term.substr(0, sp));
    auto inner = term.substr(sp + 4, term.size() - sp - 5);
    std::vector<int> comps;
    std::size_t q = 0;
    while (q <= inner.size()) {
      auto comma = inner.find(',', q);
      comps.push_back(std::stoi(std::string(inner.substr(q, comma == std::string_view::npos ? std::string_view::npos : comma - q))));
      if (comma == std::string_view::npos) break;
      q = comma + 1;
    }
    if (static_cast<int>(comps.size()) != n) throw std::invalid_argument("parse_laurent: wrong rank");
    p.add(MultiIndex(comps), c);
    if (next == std::string_view::npos) break;
    pos = next + 3;
  }
  return p;
}

}  // namespace torusrep
