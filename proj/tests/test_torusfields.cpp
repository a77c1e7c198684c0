#include "torusrep/torusfields.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace torusrep;

namespace {

int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

VectorField rand_field(std::mt19937_64& rng, int n) {
  RatVec u;
  MultiIndex r(n);
  for (int i = 0; i < n; ++i) {
    u.push_back(Rational(pick(rng, -3, 3), pick(rng, 1, 3)));
    r[i] = pick(rng, -3, 3);
  }
  return VectorField(u, r);
}

}  // namespace

TEST_CASE("bracket agrees with the commutator of differential operators") {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 300; ++t) {
    const int n = pick(rng, 2, 4);
    auto a = rand_field(rng, n), b = rand_field(rng, n);
    auto A = a.to_weyl(), B = b.to_weyl();
    CHECK(weyl_product(A, B) - weyl_product(B, A) == bracket(a, b).to_weyl());
  }
}

TEST_CASE("worked bracket example") {
  // [x_1 d_2, x_2 d_1] = x_1 d_1 - x_2 d_2, i.e. D((1,-1),(0,0)) on the Euler side
  VectorField a({Rational(0), Rational(1)}, MultiIndex({1, -1}));
  VectorField b({Rational(1), Rational(0)}, MultiIndex({-1, 1}));
  CHECK(bracket(a, b) == VectorField({Rational(1), Rational(-1)}, MultiIndex({0, 0})));
}

TEST_CASE("S_n is a subalgebra and the generators lie in it") {
  std::mt19937_64 rng(37);
  for (int n = 2; n <= 4; ++n) {
    auto gens = sn_generators(n, 1);
    for (const auto& g : gens) CHECK(g.is_divergence_free());
    for (int t = 0; t < 50; ++t) {
      const auto& a = gens[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(gens.size()) - 1))];
      const auto& b = gens[static_cast<std::size_t>(pick(rng, 0, static_cast<int>(gens.size()) - 1))];
      CHECK(bracket(a, b).is_divergence_free());
    }
  }
}

TEST_CASE("generator count for n = 2, R = 1") {
  // 8 nonzero exponents, one pair each, plus the two Euler operators
  CHECK(sn_generators(2, 1).size() == 10);
  // the all-pairs family spans {u : (u|r) = 0} for every r != 0
  for (const auto& r : box(3, 1)) {
    if (r.is_zero()) continue;
    SpanBasis<int> span;
    for (const auto& g : sn_generators(3, 1)) {
      if (g.r != r) continue;
      SparseVec<int> v;
      for (int i = 0; i < 3; ++i) v.add(i, g.u[static_cast<std::size_t>(i)]);
      span.insert(v);
    }
    CHECK(span.rank() == 2);
  }
}

TEST_CASE("adjacent generators") {
  AdjacentGenerator g{1, MultiIndex({2, 3, -1})};
  CHECK(g.field() == VectorField({Rational(3), Rational(-2), Rational(0)}, MultiIndex({2, 3, -1})));
  CHECK(g.field().is_divergence_free());
  CHECK_THROWS(AdjacentGenerator{3, MultiIndex({1, 1, 1})}.field());
}

TEST_CASE("Jacobi identity on field sums") {
  std::mt19937_64 rng(41);
  for (int t = 0; t < 100; ++t) {
    FieldSum a, b, c;
    for (int k = 0; k < 2; ++k) {
      a.add(Rational(1), rand_field(rng, 3));
      b.add(Rational(1), rand_field(rng, 3));
      c.add(Rational(1), rand_field(rng, 3));
    }
    FieldSum j = bracket(bracket(a, b), c);
    j.add(bracket(bracket(b, c), a));
    j.add(bracket(bracket(c, a), b));
    CHECK(j.is_zero());
  }
}

TEST_CASE("DDp identity") {
  std::mt19937_64 rng(43);
  for (int t = 0; t < 100; ++t) {
    const int n = pick(rng, 2, 4);
    auto a = rand_field(rng, n), b = rand_field(rng, n);
    LaurentPoly p;
    for (int k = 0; k < 2; ++k) p.add(rand_field(rng, n).r, Rational(pick(rng, 1, 3)));
    RatVec l;
    for (int i = 0; i < n; ++i) l.push_back(Rational(pick(rng, -2, 2), 3));
    CHECK(ddp_identity_check(a.u, b.u, a.r, b.r, p, TwistParam(l)));
  }
}

TEST_CASE("vector field text round trip") {
  std::mt19937_64 rng(47);
  for (int t = 0; t < 50; ++t) {
    auto f = rand_field(rng, 3);
    CHECK(VectorField::parse(f.to_string()) == f);
  }
  CHECK(VectorField::euler(2, 1).to_string() == "D[(1,0); (0,0)]");
  CHECK_THROWS(VectorField::parse("D[(1,2); (0)]"));
  CHECK_THROWS(VectorField::parse("garbage"));
}
