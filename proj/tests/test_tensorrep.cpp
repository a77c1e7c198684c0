#include "torusrep/tensorrep.hpp"

#include <catch_amalgamated.hpp>

#include <random>

using namespace torusrep;

namespace {

int pick(std::mt19937_64& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

MultiIndex rand_index(std::mt19937_64& rng, int n, int b) {
  MultiIndex r(n);
  for (int i = 0; i < n; ++i) r[i] = pick(rng, -b, b);
  return r;
}

LaurentPoly rand_poly(std::mt19937_64& rng, int n) {
  LaurentPoly p;
  for (int k = 0; k < 2; ++k) p.add(rand_index(rng, n, 2), Rational(pick(rng, -3, 3), pick(rng, 1, 2)));
  return p;
}

TwistParam rand_twist(std::mt19937_64& rng, int n) {
  RatVec l;
  for (int i = 0; i < n; ++i) l.push_back(Rational(pick(rng, -3, 3), pick(rng, 1, 4)));
  return TwistParam(l);
}

// sum over terms of p (x) w with coefficients from independent pieces
FVElement assemble(const FVContext& ctx, const std::vector<std::pair<LaurentPoly, VVector>>& parts) {
  FVElement out(ctx);
  for (const auto& [p, w] : parts) out += FVElement::tensor(ctx, p, w);
  return out;
}

std::vector<FinModule> modules(int n) {
  return {FinModule::trivial(n), FinModule::natural(n), FinModule::exterior(n, 2), FinModule::symmetric(n, 2),
          FinModule::adjoint(n)};
}

}  // namespace

TEST_CASE("first action agrees with the Weyl action plus the rank-one matrix") {
  std::mt19937_64 rng(53);
  for (int t = 0; t < 200; ++t) {
    const int n = pick(rng, 2, 3);
    auto mods = modules(n);
    const auto& V = mods[static_cast<std::size_t>(pick(rng, 0, 4))];
    auto tw = rand_twist(rng, n);
    FVContext ctx(tw, V);
    RatVec u;
    for (int i = 0; i < n; ++i) u.push_back(Rational(pick(rng, -3, 3)));
    auto r = rand_index(rng, n, 3);
    if (V.kind() == ModuleKind::Adjoint) {
      // divergence-free part only
      u = RatVec(static_cast<std::size_t>(n));
      u[0] = Rational(r[1]);
      u[1] = Rational(-r[0]);
    }
    VectorField X(u, r);
    auto p = rand_poly(rng, n);
    auto w = VVector::unit(pick(rng, 0, static_cast<int>(V.dim()) - 1));
    auto m = FVElement::tensor(ctx, p, w);
    auto dense = V.action_of(rank_one(r, u));
    auto expect = assemble(ctx, {{act_P(weyl_field(u, r), p, tw), w}, {shift(p, r), dense.apply(w)}});
    CHECK(act_shen(X, m) == expect);
  }
}

TEST_CASE("second action agrees with its Weyl description") {
  std::mt19937_64 rng(59);
  for (int t = 0; t < 200; ++t) {
    const int n = pick(rng, 2, 3);
    auto mods = modules(n);
    const auto& V = mods[static_cast<std::size_t>(pick(rng, 0, 4))];
    auto tw = rand_twist(rng, n);
    FVContext ctx(tw, V, ActionStyle::LLZ);
    const int j = pick(rng, 1, n);
    auto r = rand_index(rng, n, 3);
    auto p = rand_poly(rng, n);
    auto w = VVector::unit(pick(rng, 0, static_cast<int>(V.dim()) - 1));
    std::vector<std::pair<LaurentPoly, VVector>> parts;
    parts.push_back({act_P(weyl_monomial(r - MultiIndex::unit(n, j), MultiIndex::unit(n, j)), p, tw), w});
    for (int i = 1; i <= n; ++i) {
      LaurentPoly q = shift(p, r - MultiIndex::unit(n, i));
      LaurentPoly scaled;
      scaled.axpy(Rational(r[i - 1]), q);
      parts.push_back({scaled, e_act(MatrixUnit{i, j}, w, V)});
    }
    CHECK(act_llz(j, r, FVElement::tensor(ctx, p, w)) == assemble(ctx, parts));
  }
}

TEST_CASE("fields outside S_n need an identity scalar") {
  auto V = FinModule::natural(2).as_sl_module();
  FVContext ctx(TwistParam::zero(2), V);
  auto m = FVElement::term(ctx, MultiIndex({1, 0}), 0);
  VectorField X({Rational(1), Rational(0)}, MultiIndex({1, 0}));
  CHECK_THROWS_AS(act_shen(X, m), std::domain_error);
  VectorField Y({Rational(0), Rational(1)}, MultiIndex({1, 0}));
  CHECK_NOTHROW(act_shen(Y, m));
  FVContext llz(TwistParam::zero(2), FinModule::natural(2), ActionStyle::LLZ);
  CHECK_THROWS(act_shen(Y, FVElement::term(llz, MultiIndex(2), 0)));
}

TEST_CASE("mixing contexts is rejected") {
  FVContext a(TwistParam::zero(2), FinModule::natural(2));
  FVContext b(TwistParam::parse("1/2,0"), FinModule::natural(2));
  CHECK_THROWS(FVElement::term(a, MultiIndex(2), 0) + FVElement::term(b, MultiIndex(2), 0));
}

TEST_CASE("de Rham maps follow their defining sums") {
  std::mt19937_64 rng(61);
  for (int t = 0; t < 100; ++t) {
    const int n = pick(rng, 2, 4);
    const int k = pick(rng, 0, n - 1);
    auto tw = rand_twist(rng, n);
    auto from = exterior_module(n, k), to = exterior_module(n, k + 1);
    auto p = rand_poly(rng, n);
    auto w = VVector::unit(pick(rng, 0, static_cast<int>(from->dim()) - 1));
    FVContext cs(tw, from), cl(tw, from, ActionStyle::LLZ);
    FVContext ts(tw, to), tl(tw, to, ActionStyle::LLZ);
    FVElement d(ts), pi(tl);
    for (int i = 1; i <= n; ++i) {
      auto dp = act_P(weyl_d(n, i), p, tw);
      auto ew = wedge(i, w, *from, *to);
      d += FVElement::tensor(ts, dp, ew);
      pi += FVElement::tensor(tl, shift(dp, -MultiIndex::unit(n, i)), ew);
    }
    CHECK(d_map(k, FVElement::tensor(cs, p, w)) == d);
    CHECK(pi_map(k, FVElement::tensor(cl, p, w)) == pi);
  }
  CHECK_THROWS(d_map(1, FVElement::term(FVContext(TwistParam::zero(2), FinModule::symmetric(2, 2)), MultiIndex(2), 0)));
}

TEST_CASE("phi shifts by the weight and intertwines the actions") {
  FVContext ctx(TwistParam::zero(2), FinModule::natural(2));
  auto m = FVElement::term(ctx, MultiIndex({3, 1}), 0);
  auto img = phi_map(m);
  CHECK(img.context().style == ActionStyle::LLZ);
  CHECK(img == FVElement::term(img.context(), MultiIndex({2, 1}), 0));
  std::mt19937_64 rng(67);
  for (int t = 0; t < 100; ++t) {
    const int n = pick(rng, 2, 3);
    const int k = pick(rng, 0, n);
    FVContext c(rand_twist(rng, n), exterior_module(n, k));
    auto x = FVElement::tensor(c, rand_poly(rng, n), VVector::unit(pick(rng, 0, static_cast<int>(c.V().dim()) - 1)));
    RatVec u;
    for (int i = 0; i < n; ++i) u.push_back(Rational(pick(rng, -2, 2)));
    VectorField X(u, rand_index(rng, n, 2));
    CHECK(phi_map(act_shen(X, x)) == act_llz(X, phi_map(x)));
    CHECK(phi_inverse(phi_map(x)) == x);
  }
}

TEST_CASE("phi with a shifted target twist") {
  TwistParam lv = TwistParam::parse("1/2,1/2");
  FVContext ctx(TwistParam::parse("1/3,0"), FinModule::natural(2));
  // weights of the natural module are e_i, so lambdaV = (1/2,1/2) is not a valid offset
  CHECK_THROWS(phi_map(FVElement::term(ctx, MultiIndex(2), 0), lv));
  TwistParam ok = TwistParam::parse("1,0");
  auto img = phi_map(FVElement::term(ctx, MultiIndex({0, 0}), 0), ok);
  CHECK(img.context().twist == TwistParam::parse("4/3,0"));
  CHECK(phi_inverse(img, ok) == FVElement::term(ctx, MultiIndex({0, 0}), 0));
}

TEST_CASE("L lies in the kernel of the next de Rham map") {
  for (int n = 2; n <= 3; ++n) {
    auto tw = TwistParam::zero(n);
    for (int k = 1; k <= n - 1; ++k)
      for (const auto& g : l_generators(k, tw, 1)) CHECK(ltilde_member(k, g));
  }
}

TEST_CASE("g vanishes on L and not on the witness") {
  auto tw = TwistParam::parse("1/2,1/3,1/5");
  for (int k = 1; k <= 3; ++k)
    for (const auto& g : l_generators(k, tw, 1)) CHECK(g_map(1, MultiIndex({1, 0, -1}), g).is_zero());
  auto ctx = exterior_context(TwistParam::zero(3), 1);
  auto witness = FVElement::term(ctx, MultiIndex({0, 0, 1}), ctx.V().index_of({2}));
  CHECK(g_map(1, MultiIndex(3), witness) == FVElement::term(ctx, MultiIndex({0, 0, 1}), ctx.V().index_of({1}), Rational(-1)));
  CHECK_FALSE(l_span(1, TwistParam::zero(3), 2).contains(witness.terms()));
  CHECK_THROWS(g_map(2, MultiIndex(3), witness));
}

TEST_CASE("weight components are eigenvectors of the Euler operators") {
  std::mt19937_64 rng(71);
  for (auto style : {ActionStyle::ShenLarsson, ActionStyle::LLZ}) {
    FVContext ctx(TwistParam::parse("1/3,1/2"), FinModule::symmetric(2, 2), style);
    FVElement m(ctx);
    for (int t = 0; t < 6; ++t) m.add(rand_index(rng, 2, 2), pick(rng, 0, 2), Rational(pick(rng, 1, 3)));
    FVElement total(ctx);
    for (const auto& [wt, part] : weight_decompose(m)) {
      total += part;
      for (int i = 1; i <= 2; ++i)
        CHECK(act(VectorField::euler(2, i), part) == wt[static_cast<std::size_t>(i - 1)] * part);
    }
    CHECK(total == m);
  }
}

TEST_CASE("hF has codimension one for integral twists and the trivial module") {
  for (int n = 2; n <= 3; ++n) {
    FVContext c0(TwistParam::zero(n), FinModule::trivial(n));
    const std::size_t cells = box(n, 2).size();
    CHECK(hF_span(c0, 2).rank() == cells - 1);
    FVContext cg(TwistParam::parse(n == 2 ? "1/3,1/2" : "1/2,1/3,1/5"), FinModule::trivial(n));
    CHECK(hF_span(cg, 2).rank() == cells);
  }
}

TEST_CASE("text form of elements") {
  FVContext ctx(TwistParam::zero(2), FinModule::natural(2));
  auto m = FVElement::term(ctx, MultiIndex({1, -1}), 1, Rational(-3, 2));
  CHECK(to_string(m) == "-3/2 · x^(1,-1) ⊗ [2]");
  CHECK(window_basis(ctx, 1).size() == 18);
}
