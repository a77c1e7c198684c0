#pragma once

#include "torusrep/rational.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace torusrep {

// Finite association Key -> Rational with no stored zeros, iterated in key
// order. Key must be totally ordered via operator<.
template <class Key>
class SparseVec {
 public:
  using key_type = Key;
  using map_type = std::map<Key, Rational>;
  using const_iterator = typename map_type::const_iterator;

  SparseVec() = default;
  SparseVec(std::initializer_list<std::pair<const Key, Rational>> init) {
    for (const auto& [k, c] : init) add(k, c);
  }

  static SparseVec unit(const Key& k) {
    SparseVec v;
    v.entries_.emplace(k, Rational(1));
    return v;
  }

  /// Adds c to the coefficient of k, erasing the entry if it cancels.
  void add(const Key& k, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = entries_.try_emplace(k, c);
    if (!inserted) {
      it->second += c;
      if (it->second.is_zero()) entries_.erase(it);
    }
  }

  /// this += c * other
  void axpy(const Rational& c, const SparseVec& other) {
    if (c.is_zero()) return;
    for (const auto& [k, x] : other.entries_) add(k, c * x);
  }

  Rational coeff(const Key& k) const {
    auto it = entries_.find(k);
    return it == entries_.end() ? Rational() : it->second;
  }
  bool contains(const Key& k) const { return entries_.count(k) != 0; }

  bool empty() const { return entries_.empty(); }
  std::size_t size() const { return entries_.size(); }
  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }
  const Key& leading_key() const { return entries_.begin()->first; }
  const Rational& leading_coeff() const { return entries_.begin()->second; }
  const map_type& entries() const { return entries_; }

  SparseVec scaled(const Rational& c) const {
    SparseVec out;
    if (c.is_zero()) return out;
    for (const auto& [k, x] : entries_) out.entries_.emplace_hint(out.entries_.end(), k, c * x);
    return out;
  }

  SparseVec& operator+=(const SparseVec& o) {
    axpy(Rational(1), o);
    return *this;
  }
  SparseVec& operator-=(const SparseVec& o) {
    axpy(Rational(-1), o);
    return *this;
  }
  friend SparseVec operator+(SparseVec a, const SparseVec& b) { return a += b; }
  friend SparseVec operator-(SparseVec a, const SparseVec& b) { return a -= b; }
  friend SparseVec operator*(const Rational& c, const SparseVec& v) { return v.scaled(c); }
  SparseVec operator-() const { return scaled(Rational(-1)); }

  friend bool operator==(const SparseVec& a, const SparseVec& b) { return a.entries_ == b.entries_; }

 private:
  map_type entries_;
};

/// Exact linear combination sum_i c_i v_i.
template <class Key>
SparseVec<Key> linear_combine(const std::vector<std::pair<Rational, SparseVec<Key>>>& terms) {
  SparseVec<Key> out;
  for (const auto& [c, v] : terms) out.axpy(c, v);
  return out;
}

// Incrementally maintained reduced row-echelon basis of a subspace.
//
// Invariants: every row has leading coefficient 1 at its pivot, the pivot is
// the smallest key of the row, and no pivot key occurs in any other row.
template <class Key>
class SpanBasis {
 public:
  std::size_t rank() const { return rows_.size(); }
  const std::vector<SparseVec<Key>>& rows() const { return rows_; }
  const std::map<Key, std::size_t>& pivots() const { return pivots_; }

  /// Canonical representative of v modulo the span (a linear projection).
  SparseVec<Key> reduce(const SparseVec<Key>& v) const {
    SparseVec<Key> out = v;
    // Rows are fully reduced, so subtracting a row never introduces another
    // pivot key; the original pivot coefficients of v are enough.
    for (const auto& [k, c] : v) {
      auto it = pivots_.find(k);
      if (it != pivots_.end()) out.axpy(-c, rows_[it->second]);
    }
    return out;
  }

  bool contains(const SparseVec<Key>& v) const { return reduce(v).empty(); }

  /// Returns true if v was independent of the current span.
  bool insert(const SparseVec<Key>& v) {
    SparseVec<Key> r = reduce(v);
    if (r.empty()) return false;
    r = r.scaled(Rational(1) / r.leading_coeff());
    const Key pivot = r.leading_key();
    for (auto& row : rows_) {
      Rational c = row.coeff(pivot);
      if (!c.is_zero()) row.axpy(-c, r);
    }
    pivots_.emplace(pivot, rows_.size());
    rows_.push_back(std::move(r));
    return true;
  }

 private:
  std::vector<SparseVec<Key>> rows_;
  std::map<Key, std::size_t> pivots_;
};

/// Inserts v into a copy of basis; returns the new basis and whether v was new.
template <class Key>
std::pair<SpanBasis<Key>, bool> span_insert(SpanBasis<Key> basis, const SparseVec<Key>& v) {
  bool inserted = basis.insert(v);
  return {std::move(basis), inserted};
}

template <class Key>
bool span_membership(const SpanBasis<Key>& basis, const SparseVec<Key>& v) {
  return basis.contains(v);
}

template <class Key>
std::size_t span_rank(const SpanBasis<Key>& basis) {
  return basis.rank();
}

/// True when the two spans coincide (checked by mutual membership).
template <class Key>
bool same_span(const SpanBasis<Key>& a, const SpanBasis<Key>& b) {
  if (a.rank() != b.rank()) return false;
  for (const auto& row : a.rows())
    if (!b.contains(row)) return false;
  return true;
}

// Key for the augmented vectors (f(x) | x) used to extract kernels. Image keys
// sort before domain keys.
template <class ImageKey, class DomainKey>
struct AugmentedKey {
  int part = 0;
  ImageKey image{};
  DomainKey domain{};
  friend auto operator<=>(const AugmentedKey&, const AugmentedKey&) = default;
  friend bool operator==(const AugmentedKey&, const AugmentedKey&) = default;
};

/// Basis of the kernel of the linear map sending each domain basis vector
/// `domain[i]` to `images[i]`. Kernel vectors are expressed over domain keys.
template <class DomainKey, class ImageKey>
std::vector<SparseVec<DomainKey>> kernel_basis(const std::vector<SparseVec<DomainKey>>& domain,
                                               const std::vector<SparseVec<ImageKey>>& images) {
  using AK = AugmentedKey<ImageKey, DomainKey>;
  SpanBasis<AK> aug;
  for (std::size_t i = 0; i < domain.size(); ++i) {
    SparseVec<AK> v;
    for (const auto& [k, c] : images[i]) v.add(AK{0, k, DomainKey{}}, c);
    for (const auto& [k, c] : domain[i]) v.add(AK{1, ImageKey{}, k}, c);
    aug.insert(v);
  }
  std::vector<SparseVec<DomainKey>> out;
  for (const auto& row : aug.rows()) {
    if (row.leading_key().part != 1) continue;
    SparseVec<DomainKey> k;
    for (const auto& [key, c] : row) k.add(key.domain, c);
    out.push_back(std::move(k));
  }
  return out;
}

/// Builds a span from a list of vectors.
template <class Key>
SpanBasis<Key> span_of(const std::vector<SparseVec<Key>>& vs) {
  SpanBasis<Key> b;
  for (const auto& v : vs) b.insert(v);
  return b;
}

}  // namespace torusrep
