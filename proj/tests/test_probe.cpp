#include "torusrep/probe.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace torusrep;

TEST_CASE("FNV-1a reference values") {
  Digest empty;
  CHECK(empty.hex() == "cbf29ce484222325");
  Digest a;
  a.update("a");
  CHECK(a.hex() == "af63dc4c8601ec8c");
  Digest foobar;
  foobar.update("foobar");
  CHECK(foobar.hex() == "85944171f73967e8");
}

TEST_CASE("window parsing and margin rule") {
  CHECK(Window::parse("2,2,3,6") == Window{2, 2, 3, 6});
  CHECK_THROWS(Window::parse("2,2,3"));
  CHECK_THROWS(Window::parse("2,x,3,6"));
  CHECK_THROWS(Window{2, 2, 4, 6}.validate());
  CHECK_NOTHROW(Window{2, 2, 3, 6}.validate());
  CHECK(Window::defaults(4).B == 1);
  CHECK(Window::parse(Window::defaults(3).to_string()) == Window::defaults(3));
}

TEST_CASE("graded span splits and lifts") {
  FVVector v;
  v.add(FVKey{MultiIndex({1, 0}), 0}, Rational(2));
  v.add(FVKey{MultiIndex({1, 0}), 1}, Rational(3));
  v.add(FVKey{MultiIndex({0, 1}), 1}, Rational(-1));
  auto parts = GradedSpan::split(v);
  CHECK(parts.size() == 2);
  FVVector back;
  for (const auto& [s, w] : parts) back += GradedSpan::lift(s, w);
  CHECK(back == v);
  GradedSpan g(2);
  g.insert_components(v);
  CHECK(g.rank() == 2);
  CHECK(g.contains(v));
  CHECK(g.contains(GradedSpan::lift(MultiIndex({0, 1}), VVector::unit(1))));
  CHECK_FALSE(g.contains(GradedSpan::lift(MultiIndex({1, 0}), VVector::unit(0))));
}

TEST_CASE("closure log replays and is independent of worker count") {
  std::mt19937_64 rng(73);
  FVContext ctx(TwistParam::parse("1/3,1/2"), FinModule::symmetric(2, 2));
  Window w{1, 1, 2, 2};
  auto seed = random_window_vector(ctx, 1, rng);
  auto gens = sn_generators(2, 1);
  ClosureOptions one, three;
  three.workers = 3;
  auto a = closure({seed}, gens, w, 2, one);
  auto b = closure({seed}, gens, w, 2, three);
  CHECK(a.logDigest == b.logDigest);
  CHECK(a.centralRank == b.centralRank);
  CHECK(replay_log(a, {seed}, gens));
  // tampering is detected
  auto bad = a;
  REQUIRE(bad.log.size() > 3);
  bad.log.back().v = bad.log.back().v.scaled(Rational(2));
  CHECK_FALSE(replay_log(bad, {seed}, gens));
}

TEST_CASE("closure rank grows with the depth") {
  std::mt19937_64 rng(79);
  FVContext ctx(TwistParam::parse("1/3,1/2"), FinModule::symmetric(2, 2));
  auto seed = random_window_vector(ctx, 1, rng);
  auto gens = sn_generators(2, 1);
  Window w{1, 1, 3, 3};
  ClosureOptions opt;
  opt.max_extra_rounds = 0;
  std::size_t prev = 0;
  for (int L = 0; L <= 3; ++L) {
    auto r = closure({seed}, gens, w, L, opt);
    CHECK(r.centralRank >= prev);
    prev = r.centralRank;
  }
}

TEST_CASE("closure of an L vector is a proper invariant subspace") {
  std::mt19937_64 rng(83);
  auto tw = TwistParam::zero(2);
  auto seed = random_l_vector(1, tw, 1, rng);
  auto res = closure({seed}, sn_generators(2, 1), Window{1, 1, 2, 2}, 2);
  CHECK(res.verdict == Verdict::ProperInvariant);
  auto L = l_graded(1, tw, res.window.ambient());
  for (const auto& e : res.log) CHECK(L.contains(GradedSpan::lift(e.s, e.v)));
}

TEST_CASE("closure of a nonminuscule seed fills the window") {
  std::mt19937_64 rng(89);
  FVContext ctx(TwistParam::zero(2), FinModule::symmetric(2, 2));
  auto res = closure({random_window_vector(ctx, 1, rng)}, sn_generators(2, 2), Window{1, 2, 3, 6}, 3);
  CHECK(res.verdict == Verdict::FillsWindow);
  CHECK(res.centralRank == res.centralDim);
}

TEST_CASE("closure rejects bad input") {
  FVContext ctx(TwistParam::zero(2), FinModule::natural(2));
  auto m = FVElement::term(ctx, MultiIndex(2), 0);
  CHECK_THROWS(closure({}, sn_generators(2, 1), Window{}, 1));
  CHECK_THROWS(closure({m}, sn_generators(2, 2), Window{1, 2, 3, 4}, 3));
  FVContext llz(TwistParam::zero(2), FinModule::natural(2), ActionStyle::LLZ);
  CHECK_THROWS(closure({FVElement::term(llz, MultiIndex(2), 0)}, sn_generators(2, 1), Window{}, 1));
}

TEST_CASE("random seeds are reproducible and well formed") {
  FVContext ctx(TwistParam::zero(3), FinModule::adjoint(3));
  std::mt19937_64 a(5), b(5);
  for (int t = 0; t < 50; ++t) {
    auto x = random_window_vector(ctx, 2, a);
    CHECK(x == random_window_vector(ctx, 2, b));
    CHECK(x.terms().size() <= 4);
    for (const auto& [k, c] : x.terms()) {
      CHECK(in_box(k.s, 2));
      CHECK(abs(c.to_mpq()) <= 12);
    }
  }
  std::mt19937_64 r(9);
  for (int t = 0; t < 200; ++t) {
    Rational c = random_coefficient(r);
    CHECK_FALSE(c.is_zero());
    CHECK(c >= Rational(-3));
    CHECK(c <= Rational(3));
  }
}

TEST_CASE("interpolation recovers polynomial coefficients") {
  FVContext ctx(TwistParam::zero(2), FinModule::trivial(2));
  auto one = FVElement::term(ctx, MultiIndex(2), 0);
  // f(r) = (3 r1^2 r2 - r2^3 + 5) * one
  auto f = [&](const MultiIndex& r) {
    Rational v = Rational(3 * r[0] * r[0] * r[1] - r[1] * r[1] * r[1] + 5);
    return v * one;
  };
  auto fam = sample_family(2, 3, f);
  CHECK(coeff_extract(fam, MultiIndex({2, 1})) == Rational(3) * one);
  CHECK(coeff_extract(fam, MultiIndex({0, 3})) == Rational(-1) * one);
  CHECK(coeff_extract(fam, MultiIndex({0, 0})) == Rational(5) * one);
  CHECK(coeff_extract(fam, MultiIndex({1, 1})).is_zero());
  CHECK(coefficients_of_degree(fam, 3).size() == 2);
  std::vector<std::vector<int>> nodes{{0, 1, 1, 2}, {0, 1, 2, 3}};
  CHECK_THROWS_WITH(sample_family(2, 3, nodes, f), Catch::Matchers::ContainsSubstring("repeated sample point"));
  std::vector<std::vector<int>> few{{0, 1, 2}, {0, 1, 2}};
  CHECK_THROWS_WITH(sample_family(2, 3, few, f), Catch::Matchers::ContainsSubstring("insufficient sample points"));
}

TEST_CASE("the r_i^2 coefficient carries a minus sign") {
  std::mt19937_64 rng(97);
  auto tw = TwistParam::parse("1/2,1/3,1/5");
  int nonzero = 0;
  for (int t = 0; t < 20; ++t) {
    const int k = uniform_int(rng, 1, 2);
    auto ctx = exterior_context(tw, k);
    MultiIndex s({uniform_int(rng, -2, 2), uniform_int(rng, -2, 2), uniform_int(rng, -2, 2)});
    LaurentPoly p;
    p.add(MultiIndex({uniform_int(rng, -2, 2), uniform_int(rng, -2, 2), uniform_int(rng, -2, 2)}), Rational(1));
    auto m = FVElement::tensor(ctx, p, VVector::unit(uniform_int(rng, 0, static_cast<int>(ctx.V().dim()) - 1)));
    auto fam = sample_family(3, 4, ddpw_family(1, 2, s, m));
    auto coeff = coeff_extract(fam, MultiIndex({2, 0, 0}));
    auto expect = ri2_expected(1, s, m);
    CHECK(coeff == Rational(-1) * expect);
    if (!expect.is_zero()) {
      ++nonzero;
      CHECK_FALSE(coeff == expect);
    }
  }
  CHECK(nonzero >= 5);
}

TEST_CASE("D D (p (x) w) is quartic in r with the double-matrix top part") {
  std::mt19937_64 rng(101);
  for (const char* mod : {"ext:2", "sym:2"}) {
    FVContext ctx(TwistParam::zero(3), FinModule::parse(mod, 3));
    int quartic = 0;
    for (int t = 0; t < 4; ++t) {
      MultiIndex s({uniform_int(rng, -2, 2), uniform_int(rng, -2, 2), uniform_int(rng, -2, 2)});
      auto m = FVElement::term(ctx, MultiIndex({1, 0, -1}), uniform_int(rng, 0, static_cast<int>(ctx.V().dim()) - 1));
      const int i = uniform_int(rng, 1, 2), j = uniform_int(rng, 1, 2);
      CHECK(coefficients_of_degree(sample_family(3, 5, ddpw_family(i, j, s, m)), 5).empty());
      auto top = coefficients_of_degree(sample_family(3, 4, ddpw_family(i, j, s, m)), 4);
      CHECK(top == coefficients_of_degree(sample_family(3, 4, double_matrix_family(i, j, s, m)), 4));
      if (!top.empty()) ++quartic;
    }
    // rank-one matrices square to zero on exterior powers but not on symmetric ones
    CHECK((quartic == 0) == ctx.V().is_minuscule());
  }
}

TEST_CASE("kernel of d_k matches the partial-derivative criterion") {
  for (int n = 2; n <= 3; ++n)
    for (auto tw : {TwistParam::zero(n), TwistParam::parse(n == 2 ? "1/3,1/2" : "1/2,1/3,1/5")})
      for (int k = 0; k <= n - 1; ++k)
        CHECK(same_graded(kernel_d_graded(k, tw, 1), partial_criterion_graded(k, tw, 1), 1));
}

TEST_CASE("L sits strictly inside ker d_k exactly at the fixed degree") {
  auto tw = TwistParam::zero(3);
  auto L = l_graded(1, tw, 1);
  auto K = kernel_d_graded(1, tw, 1);
  CHECK(K.rank_within(1) == L.rank_within(1) + 3);
  CHECK(L.rank_at(MultiIndex(3)) == 0);
  CHECK(K.rank_at(MultiIndex(3)) == 3);
}

TEST_CASE("lattice evidence in both regimes") {
  std::mt19937_64 rng(103);
  Window w{1, 1, 2, 2};
  auto integral = lattice_delta0(TwistParam::zero(2), w, 3, rng);
  CHECK(integral.ok());
  CHECK(integral.executed.count("fixed line is killed by S_n"));
  auto generic = lattice_delta0(TwistParam::parse("1/3,1/2"), w, 3, rng);
  CHECK(generic.ok());
  CHECK(generic.executed.count("every random seed generates the window"));
}

TEST_CASE("isomorphism fingerprints") {
  auto a = TwistParam::parse("1/3,1/2"), b = TwistParam::parse("1/4,1/2");
  auto sym2 = FinModule::symmetric(2, 2), adj = FinModule::adjoint(2);
  CHECK(iso_evidence(a, sym2, a, sym2).equal);
  auto c = iso_evidence(a, sym2, a, adj);
  CHECK_FALSE(c.equal);
  CHECK(c.reason == "character");
  auto l = iso_evidence(a, sym2, b, sym2);
  CHECK_FALSE(l.equal);
  CHECK(l.reason == "eigenvalue-lattice");
  CHECK(iso_evidence(a, sym2, TwistParam::parse("4/3,-1/2"), sym2).equal);
}

TEST_CASE("check report bookkeeping") {
  CheckReport r;
  r.check("a", true);
  r.check("b", false, "why");
  CHECK_FALSE(r.ok());
  CHECK(r.failures == std::vector<std::string>{"b: why"});
  CHECK(std::get<long long>(r.counters.at("checks")) == 2);
  r.set_max("m", 3);
  r.set_max("m", 2);
  CHECK(std::get<long long>(r.counters.at("m")) == 3);
}
