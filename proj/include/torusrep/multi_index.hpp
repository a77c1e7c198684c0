#pragma once

#include "torusrep/rational.hpp"

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <cstdlib>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace torusrep {

/// Largest ambient rank supported by the fixed-capacity index type.
inline constexpr int kMaxRank = 8;

// An element of Z^n stored inline. Ordering is lexicographic on the components.
class MultiIndex {
 public:
  MultiIndex() = default;
  explicit MultiIndex(int n) : n_(check_rank(n)) {}
  MultiIndex(std::initializer_list<int> comps) : n_(check_rank(static_cast<int>(comps.size()))) {
    std::copy(comps.begin(), comps.end(), c_.begin());
  }
  explicit MultiIndex(const std::vector<int>& comps) : n_(check_rank(static_cast<int>(comps.size()))) {
    std::copy(comps.begin(), comps.end(), c_.begin());
  }

  /// The standard basis vector e_i (1-based i).
  static MultiIndex unit(int n, int i) {
    MultiIndex m(n);
    m[i - 1] = 1;
    return m;
  }

  int rank() const { return n_; }
  int operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  int& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

  bool is_zero() const {
    for (int i = 0; i < n_; ++i)
      if (c_[i] != 0) return false;
    return true;
  }
  int max_abs() const {
    int m = 0;
    for (int i = 0; i < n_; ++i) m = std::max(m, std::abs(c_[i]));
    return m;
  }
  int total() const {
    int t = 0;
    for (int i = 0; i < n_; ++i) t += c_[i];
    return t;
  }
  std::vector<int> to_vector() const { return {c_.begin(), c_.begin() + n_}; }

  MultiIndex& operator+=(const MultiIndex& o) {
    same_rank(o);
    for (int i = 0; i < n_; ++i) c_[i] += o.c_[i];
    return *this;
  }
  MultiIndex& operator-=(const MultiIndex& o) {
    same_rank(o);
    for (int i = 0; i < n_; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  friend MultiIndex operator+(MultiIndex a, const MultiIndex& b) { return a += b; }
  friend MultiIndex operator-(MultiIndex a, const MultiIndex& b) { return a -= b; }
  MultiIndex operator-() const {
    MultiIndex m(n_);
    for (int i = 0; i < n_; ++i) m.c_[i] = -c_[i];
    return m;
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  friend std::strong_ordering operator<=>(const MultiIndex& a, const MultiIndex& b) {
    if (a.n_ != b.n_) return a.n_ <=> b.n_;
    for (int i = 0; i < a.n_; ++i)
      if (a.c_[i] != b.c_[i]) return a.c_[i] <=> b.c_[i];
    return std::strong_ordering::equal;
  }

  /// "(r1,...,rn)"
  std::string to_string() const {
    std::string s = "(";
    for (int i = 0; i < n_; ++i) {
      if (i) s += ",";
      s += std::to_string(c_[i]);
    }
    return s + ")";
  }

 private:
  static int check_rank(int n) {
    if (n < 0 || n > kMaxRank) throw std::invalid_argument("MultiIndex: rank out of range");
    return n;
  }
  void same_rank(const MultiIndex& o) const {
    if (o.n_ != n_) throw std::invalid_argument("MultiIndex: rank mismatch");
  }

  std::array<int, kMaxRank> c_{};
  int n_ = 0;
};

/// All r in Z^n with |r_i| <= bound, in lexicographic order.
inline std::vector<MultiIndex> box(int n, int bound) {
  if (bound < 0) return {};
  std::vector<MultiIndex> out;
  MultiIndex r(n);
  for (int i = 0; i < n; ++i) r[i] = -bound;
  while (true) {
    out.push_back(r);
    int i = n - 1;
    while (i >= 0 && r[i] == bound) {
      r[i] = -bound;
      --i;
    }
    if (i < 0) break;
    ++r[i];
  }
  return out;
}

inline bool in_box(const MultiIndex& r, int bound) { return r.max_abs() <= bound; }

/// Rational n-vectors (u in C^n restricted to Q^n).
using RatVec = std::vector<Rational>;

inline RatVec unit_vec(int n, int i) {
  RatVec u(static_cast<std::size_t>(n));
  u[static_cast<std::size_t>(i - 1)] = 1;
  return u;
}

inline RatVec to_ratvec(const MultiIndex& r) {
  RatVec u(static_cast<std::size_t>(r.rank()));
  for (int i = 0; i < r.rank(); ++i) u[static_cast<std::size_t>(i)] = r[i];
  return u;
}

/// The form (u|v) = u^T v.
inline Rational dot(const RatVec& u, const RatVec& v) {
  if (u.size() != v.size()) throw std::invalid_argument("dot: length mismatch");
  Rational s;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (!u[i].is_zero() && !v[i].is_zero()) s += u[i] * v[i];
  return s;
}

inline Rational dot(const RatVec& u, const MultiIndex& r) {
  if (static_cast<int>(u.size()) != r.rank()) throw std::invalid_argument("dot: length mismatch");
  Rational s;
  for (std::size_t i = 0; i < u.size(); ++i)
    if (r[static_cast<int>(i)] != 0 && !u[i].is_zero()) s += u[i] * Rational(r[static_cast<int>(i)]);
  return s;
}

inline bool is_zero_vec(const RatVec& u) {
  return std::all_of(u.begin(), u.end(), [](const Rational& x) { return x.is_zero(); });
}

inline std::string ratvec_to_string(const RatVec& u) {
  std::string s = "(";
  for (std::size_t i = 0; i < u.size(); ++i) {
    if (i) s += ",";
    s += u[i].to_string();
  }
  return s + ")";
}

}  // namespace torusrep
