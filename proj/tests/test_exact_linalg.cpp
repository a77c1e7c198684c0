#include "torusrep/exact_linalg.hpp"

#include <catch_amalgamated.hpp>

#include <map>
#include <random>

using namespace torusrep;

namespace {

// Dense fraction-free rank over mpq, independent of SpanBasis.
std::size_t dense_rank(std::vector<std::vector<mpq_class>> m) {
  std::size_t rank = 0;
  const std::size_t cols = m.empty() ? 0 : m[0].size();
  for (std::size_t c = 0; c < cols && rank < m.size(); ++c) {
    std::size_t p = rank;
    while (p < m.size() && m[p][c] == 0) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[rank]);
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == rank || m[r][c] == 0) continue;
      mpq_class f = m[r][c] / m[rank][c];
      for (std::size_t k = 0; k < cols; ++k) m[r][k] -= f * m[rank][k];
    }
    ++rank;
  }
  return rank;
}

SparseVec<int> random_vec(std::mt19937_64& rng, int keys) {
  std::uniform_int_distribution<int> key(0, keys - 1), coeff(-3, 3);
  SparseVec<int> v;
  for (int t = 0; t < 3; ++t) v.add(key(rng), Rational(coeff(rng)));
  return v;
}

}  // namespace

TEST_CASE("rational arithmetic agrees with mpq") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<long long> num(-1000000007LL, 1000000007LL), den(1, 1000003);
  for (int t = 0; t < 500; ++t) {
    long long a = num(rng), b = den(rng), c = num(rng), d = den(rng);
    Rational x(a, b), y(c, d);
    mpq_class X(std::to_string(a) + "/" + std::to_string(b)), Y(std::to_string(c) + "/" + std::to_string(d));
    X.canonicalize();
    Y.canonicalize();
    CHECK((x + y).to_mpq() == X + Y);
    CHECK((x - y).to_mpq() == X - Y);
    CHECK((x * y).to_mpq() == X * Y);
    if (!y.is_zero()) CHECK((x / y).to_mpq() == X / Y);
    CHECK((x < y) == (X < Y));
  }
}

TEST_CASE("rational overflow promotes and demotes canonically") {
  Rational big(1LL << 61);
  Rational sq = big * big * big;
  CHECK(sq.to_mpq() == mpq_class(mpz_class(1) << 183));
  Rational back = sq / (big * big);
  CHECK(back == big);
  CHECK(back.to_string() == std::to_string(1LL << 61));
}

TEST_CASE("rational parse and print") {
  CHECK(Rational::parse("6/4").to_string() == "3/2");
  CHECK(Rational::parse("-2").to_string() == "-2");
  CHECK(Rational::parse("0/5").is_zero());
  CHECK_THROWS(Rational::parse("1/0"));
  CHECK_THROWS(Rational::parse("abc"));
  CHECK(Rational(-7, 2).floor() == Rational(-4));
  CHECK(Rational(-7, 2).frac() == Rational(1, 2));
  for (int a = -20; a <= 20; ++a)
    for (int b = 1; b <= 7; ++b) CHECK(Rational::parse(Rational(a, b).to_string()) == Rational(a, b));
}

TEST_CASE("span rank matches dense elimination") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 200; ++t) {
    const int keys = 6;
    std::vector<SparseVec<int>> vs;
    for (int i = 0; i < 5; ++i) vs.push_back(random_vec(rng, keys));
    std::vector<std::vector<mpq_class>> dense;
    for (const auto& v : vs) {
      std::vector<mpq_class> row(keys);
      for (const auto& [k, c] : v) row[static_cast<std::size_t>(k)] = c.to_mpq();
      dense.push_back(row);
    }
    auto basis = span_of(vs);
    CHECK(basis.rank() == dense_rank(dense));
    for (const auto& v : vs) CHECK(basis.contains(v));
  }
}

TEST_CASE("span basis is reduced and canonical") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 100; ++t) {
    std::vector<SparseVec<int>> vs;
    for (int i = 0; i < 4; ++i) vs.push_back(random_vec(rng, 5));
    auto a = span_of(vs);
    std::reverse(vs.begin(), vs.end());
    auto b = span_of(vs);
    auto by_pivot = [](const SpanBasis<int>& s) {
      std::map<int, SparseVec<int>> m;
      for (const auto& row : s.rows()) m.emplace(row.leading_key(), row);
      return m;
    };
    CHECK(by_pivot(a) == by_pivot(b));
    CHECK(same_span(a, b));
    for (const auto& row : a.rows()) {
      CHECK(row.coeff(row.leading_key()) == Rational(1));
      for (const auto& [p, idx] : a.pivots())
        if (&a.rows()[idx] != &row) CHECK(row.coeff(p).is_zero());
    }
  }
}

TEST_CASE("kernel vectors map to zero and have the complementary dimension") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 100; ++t) {
    std::vector<SparseVec<int>> domain, images;
    for (int i = 0; i < 6; ++i) {
      domain.push_back(SparseVec<int>::unit(i));
      images.push_back(random_vec(rng, 3));
    }
    auto ker = kernel_basis(domain, images);
    CHECK(ker.size() + span_of(images).rank() == domain.size());
    for (const auto& k : ker) {
      SparseVec<int> img;
      for (const auto& [i, c] : k) img.axpy(c, images[static_cast<std::size_t>(i)]);
      CHECK(img.empty());
    }
  }
}

TEST_CASE("sparse vectors drop zero entries") {
  SparseVec<int> v;
  v.add(1, Rational(2));
  v.add(1, Rational(-2));
  CHECK(v.empty());
  auto w = SparseVec<int>::unit(3);
  CHECK((w - w).empty());
  CHECK((Rational(3) * w).coeff(3) == Rational(3));
}
