#pragma once

// The Witt algebra W_n of vector fields D(u, r) = x^r sum_i u_i d_i on the torus,
// and its divergence-zero subalgebra S_n = span{D(u, r) : (u|r) = 0}.

#include "torusrep/multi_index.hpp"
#include "torusrep/weyl.hpp"

#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace torusrep {

struct VectorField {
  RatVec u;
  MultiIndex r;

  VectorField() = default;
  VectorField(RatVec u_, MultiIndex r_) : u(std::move(u_)), r(r_) {
    if (static_cast<int>(u.size()) != r.rank()) throw std::invalid_argument("VectorField: rank mismatch");
  }
  /// D(e_i, 0) = d_i
  static VectorField euler(int n, int i) { return VectorField(unit_vec(n, i), MultiIndex(n)); }

  int rank() const { return r.rank(); }
  bool is_zero() const { return is_zero_vec(u); }
  bool is_divergence_free() const { return dot(u, r).is_zero(); }

  WeylElement to_weyl() const { return weyl_field(u, r); }

  /// "D[(u1,...,un); (r1,...,rn)]"
  std::string to_string() const { return "D[" + ratvec_to_string(u) + "; " + r.to_string() + "]"; }

  static VectorField parse(std::string_view text) {
    auto fail = [&] { return std::invalid_argument("VectorField: cannot parse '" + std::string(text) + "'"); };
    if (text.size() < 4 || text.substr(0, 3) != "D[(" || text.back() != ']') throw fail();
    auto semi = text.find("; (");
    if (semi == std::string_view::npos || text[semi - 1] != ')') throw fail();
    auto split = [](std::string_view body) {
      std::vector<std::string_view> out;
      std::size_t p = 0;
      while (p <= body.size()) {
        auto c = body.find(',', p);
        out.push_back(body.substr(p, c == std::string_view::npos ? std::string_view::npos : c - p));
        if (c == std::string_view::npos) break;
        p = c + 1;
      }
      return out;
    };
    RatVec u;
    for (auto piece : split(text.substr(3, semi - 4))) u.push_back(Rational::parse(piece));
    auto rbody = text.substr(semi + 3, text.size() - semi - 5);
    if (text[text.size() - 2] != ')') throw fail();
    std::vector<int> r;
    for (auto piece : split(rbody)) {
      try {
        r.push_back(std::stoi(std::string(piece)));
      } catch (const std::exception&) {
        throw fail();
      }
    }
    if (u.size() != r.size()) throw fail();
    return VectorField(std::move(u), MultiIndex(r));
  }

  friend bool operator==(const VectorField& a, const VectorField& b) { return a.r == b.r && a.u == b.u; }
};

/// [D(u,r), D(v,s)] = D((u|s)v - (v|r)u, r+s)
inline VectorField bracket(const VectorField& a, const VectorField& b) {
  if (a.rank() != b.rank()) throw std::invalid_argument("bracket: rank mismatch");
  const Rational us = dot(a.u, b.r);
  const Rational vr = dot(b.u, a.r);
  RatVec w(a.u.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = us * b.u[i] - vr * a.u[i];
  return VectorField(std::move(w), a.r + b.r);
}

// Finite sum of vector fields, normalized so that each exponent r carries a single u.
class FieldSum {
 public:
  FieldSum() = default;
  explicit FieldSum(const VectorField& f) { add(Rational(1), f); }

  void add(const Rational& c, const VectorField& f) {
    if (c.is_zero() || f.is_zero()) return;
    auto [it, inserted] = terms_.try_emplace(f.r, RatVec(f.u.size()));
    RatVec& u = it->second;
    for (std::size_t i = 0; i < u.size(); ++i) u[i] += c * f.u[i];
    if (is_zero_vec(u)) terms_.erase(it);
  }
  void add(const FieldSum& o, const Rational& c = Rational(1)) {
    for (const auto& [r, u] : o.terms_) add(c, VectorField(u, r));
  }

  std::vector<VectorField> fields() const {
    std::vector<VectorField> out;
    for (const auto& [r, u] : terms_) out.emplace_back(u, r);
    return out;
  }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  friend bool operator==(const FieldSum&, const FieldSum&) = default;

 private:
  std::map<MultiIndex, RatVec> terms_;
};

inline FieldSum bracket(const FieldSum& a, const FieldSum& b) {
  FieldSum out;
  for (const auto& x : a.fields())
    for (const auto& y : b.fields()) out.add(Rational(1), bracket(x, y));
  return out;
}

// D_{i,r} = D(r_{i+1} e_i - r_i e_{i+1}, r), 1 <= i <= n-1.
struct AdjacentGenerator {
  int i = 1;
  MultiIndex r;

  VectorField field() const {
    const int n = r.rank();
    if (i < 1 || i >= n) throw std::invalid_argument("AdjacentGenerator: index out of range");
    RatVec u(static_cast<std::size_t>(n));
    u[static_cast<std::size_t>(i - 1)] = r[i];
    u[static_cast<std::size_t>(i)] = -r[i - 1];
    return VectorField(std::move(u), r);
  }
};

/// D(r_j e_i - r_i e_j, r) for all pairs i < j and r in the box, plus the d_i;
/// zero fields are dropped.
inline std::vector<VectorField> sn_generators(int n, int bound) {
  if (bound < 1) throw std::invalid_argument("sn_generators: bound must be positive");
  std::vector<VectorField> out;
  for (const auto& r : box(n, bound)) {
    for (int i = 1; i <= n; ++i)
      for (int j = i + 1; j <= n; ++j) {
        RatVec u(static_cast<std::size_t>(n));
        u[static_cast<std::size_t>(i - 1)] = r[j - 1];
        u[static_cast<std::size_t>(j - 1)] = -r[i - 1];
        if (!is_zero_vec(u)) out.emplace_back(std::move(u), r);
      }
  }
  for (int i = 1; i <= n; ++i) out.push_back(VectorField::euler(n, i));
  return out;
}

/// Checks D(v,s)D(u,r)p = D(v,r+s)D(u,0)p + (v|r)D(u,r+s)p on A_n^lambda.
inline bool ddp_identity_check(const RatVec& u, const RatVec& v, const MultiIndex& r, const MultiIndex& s,
                               const LaurentPoly& p, const TwistParam& twist) {
  const int n = r.rank();
  MultiIndex zero(n);
  LaurentPoly lhs = act_P(weyl_field(v, s), act_P(weyl_field(u, r), p, twist), twist);
  LaurentPoly rhs = act_P(weyl_field(v, r + s), act_P(weyl_field(u, zero), p, twist), twist);
  rhs.axpy(dot(v, r), act_P(weyl_field(u, r + s), p, twist));
  return lhs == rhs;
}

}  // namespace torusrep
