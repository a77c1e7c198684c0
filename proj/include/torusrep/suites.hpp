#pragma once

// Named verification suites and the registry of checks they run.

#include "torusrep/probe.hpp"
#include "torusrep/report.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace torusrep {

/// (1/3,1/2) for n = 2; otherwise (1/2,1/3,1/5,1/7,...) truncated to n entries.
inline TwistParam generic_lambda(int n) {
  if (n == 2) return TwistParam({Rational(1, 3), Rational(1, 2)});
  static const int primes[] = {2, 3, 5, 7, 11, 13, 17, 19};
  RatVec l;
  for (int i = 0; i < n; ++i) l.push_back(Rational(1, primes[i]));
  return TwistParam(std::move(l));
}

namespace sampling {

inline Rational rational(std::mt19937_64& rng) {
  return Rational(uniform_int(rng, -3, 3), uniform_int(rng, 1, 3));
}

inline RatVec ratvec(std::mt19937_64& rng, int n) {
  RatVec u;
  for (int i = 0; i < n; ++i) u.push_back(rational(rng));
  return u;
}

inline MultiIndex multi(std::mt19937_64& rng, int n, int bound) {
  MultiIndex r(n);
  for (int i = 0; i < n; ++i) r[i] = uniform_int(rng, -bound, bound);
  return r;
}

inline VectorField wn_field(std::mt19937_64& rng, int n, int bound) {
  return VectorField(ratvec(rng, n), multi(rng, n, bound));
}

/// Random divergence-free field: a combination of the r_j e_i - r_i e_j, or any u when r = 0.
inline VectorField sn_field(std::mt19937_64& rng, int n, int bound) {
  while (true) {
    MultiIndex r = multi(rng, n, bound);
    RatVec u(static_cast<std::size_t>(n));
    if (r.is_zero()) {
      u = ratvec(rng, n);
    } else {
      for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) {
          Rational c = rational(rng);
          u[static_cast<std::size_t>(i - 1)] += c * Rational(r[j - 1]);
          u[static_cast<std::size_t>(j - 1)] -= c * Rational(r[i - 1]);
        }
    }
    if (!is_zero_vec(u)) return VectorField(std::move(u), r);
  }
}

inline LaurentPoly laurent(std::mt19937_64& rng, int n, int bound) {
  LaurentPoly p;
  const int terms = uniform_int(rng, 1, 3);
  for (int t = 0; t < terms; ++t) p.add(multi(rng, n, bound), rational(rng));
  return p;
}

inline WeylElement weyl(std::mt19937_64& rng, int n, int bound, int degree) {
  WeylElement w;
  const int terms = uniform_int(rng, 1, 3);
  for (int t = 0; t < terms; ++t) {
    MultiIndex a(n);
    for (int i = 0; i < n; ++i) a[i] = uniform_int(rng, 0, degree);
    w.add(WeylKey{multi(rng, n, bound), a}, rational(rng));
  }
  return w;
}

}  // namespace sampling

// Counts instances of one named identity; the identity passes when no instance fails.
class Tally {
 public:
  Tally(CheckReport& rep, std::string name, std::string counter = {})
      : rep_(rep), name_(std::move(name)), counter_(std::move(counter)) {}
  Tally(const Tally&) = delete;
  Tally& operator=(const Tally&) = delete;
  void operator()(bool ok) {
    ++count_;
    if (!ok) ++failed_;
  }
  ~Tally() {
    rep_.bump("instances", count_);
    if (!counter_.empty()) rep_.bump(counter_, count_);
    rep_.check(name_, failed_ == 0 && count_ > 0,
               std::to_string(failed_) + " of " + std::to_string(count_) + " instances failed");
  }

 private:
  CheckReport& rep_;
  std::string name_;
  std::string counter_;
  long long count_ = 0;
  long long failed_ = 0;
};

namespace check {
inline const std::string kBracketOracle = "bracket agrees with the commutator of derivations";
inline const std::string kAntisymmetry = "bracket is antisymmetric";
inline const std::string kJacobi = "Jacobi identity";
inline const std::string kSnClosed = "bracket of divergence-free fields is divergence-free";
inline const std::string kCartanAbelian = "Euler operators commute";
inline const std::string kRankOne = "(r u^T) v = (u|v) r";
inline const std::string kRankOneTrace = "trace(r u^T) = (u|r)";
inline const std::string kDDp = "D(v,s)D(u,r)p identity";
inline const std::string kWeylAssoc = "Weyl product is associative";
inline const std::string kActPModule = "P is a Weyl-algebra module";
inline const std::string kSemidirect = "[D(u,r), x^s] = (u|s) x^{r+s} on P (x) V";
inline const std::string kShenAxiom = "first action is a Lie module action of S_n";
inline const std::string kShenWnAxiom = "first action is a Lie module action of W_n on exterior powers";
inline const std::string kLlzAxiom = "second action is a Lie module action of W_n";
inline const std::string kDD = "d_{k+1} d_k = 0";
inline const std::string kPiPi = "pi_{k+1} pi_k = 0";
inline const std::string kDIntertwines = "d_k commutes with W_n";
inline const std::string kPhiIntertwines = "phi carries the first action to the second";
inline const std::string kPhiBijective = "phi is invertible";
inline const std::string kSquare = "phi d_k = pi_k phi";
inline const std::string kGVanishes = "g_{i,s} vanishes on L_n(P,k)";
inline const std::string kGWitness = "g_{i,s} is nonzero on a witness outside L_n(P,k)";
inline const std::string kLInvariant = "L_n(P,k) is invariant under the window generators";
inline const std::string kLProper = "L_n(P,k) is proper in the window";
inline const std::string kKernelCriterion = "ker d_k equals the d_l criterion set";
inline const std::string kRi2 = "r_i^2 coefficient identity";
inline const std::string kDegreeBound = "D_{j,s-r}D_{i,r}(p (x) w) has degree <= 4 in r";
inline const std::string kDegreeFour = "degree-4 part comes from the double-matrix term";
inline const std::string kIsoEqual = "equal parameters give equal fingerprints";
inline const std::string kIsoCharacter = "different characters are distinguished";
inline const std::string kIsoLattice = "different eigenvalue lattices are distinguished";
}  // namespace check

/// Every named check, for the registration test.
inline std::vector<std::string> registered_checks() {
  using namespace check;
  return {kBracketOracle,
          kAntisymmetry,
          kJacobi,
          kSnClosed,
          kCartanAbelian,
          kRankOne,
          kRankOneTrace,
          kDDp,
          kWeylAssoc,
          kActPModule,
          kSemidirect,
          kShenAxiom,
          kShenWnAxiom,
          kLlzAxiom,
          kDD,
          kPiPi,
          kDIntertwines,
          kPhiIntertwines,
          kPhiBijective,
          kSquare,
          kGVanishes,
          kGWitness,
          kLInvariant,
          kLProper,
          kKernelCriterion,
          kRi2,
          kDegreeBound,
          kDegreeFour,
          kIsoEqual,
          kIsoCharacter,
          kIsoLattice,
          "S_n F(P,delta_0) inside hF",
          "S_n L(P,1) inside hL(P,1)",
          "hF has codimension 1 in the window",
          "fixed line lies outside hF",
          "fixed line is killed by S_n",
          "closure of the fixed line is a proper invariant line",
          "hF fills the window",
          "random seed does not span a proper invariant subspace",
          "every random seed generates the window",
          "nonminuscule closure fills the window",
          "closure of an L vector stays inside L",
          "closure of every L vector reaches the window part of L",
          "rank hL(P,1) equals rank L(P,1)",
          "rank L(P,1) equals the number of non-fixed monomials",
          "ker d_k plus any outside vector fills the window"};
}

// ---------------------------------------------------------------------------

inline CheckReport suite_identities(const RunConfig& cfg, std::mt19937_64& rng) {
  CheckReport rep;
  const int n = cfg.n;
  const int N = 100;
  const TwistParam& tw = cfg.lambda;
  {
    Tally oracle(rep, check::kBracketOracle), anti(rep, check::kAntisymmetry);
    for (int t = 0; t < N; ++t) {
      auto a = sampling::wn_field(rng, n, 3), b = sampling::wn_field(rng, n, 3);
      auto c = bracket(a, b);
      auto A = a.to_weyl(), Bw = b.to_weyl();
      bool ok = weyl_product(A, Bw) - weyl_product(Bw, A) == c.to_weyl();
      auto p = sampling::laurent(rng, n, 3);
      ok = ok && act_P(A, act_P(Bw, p, tw), tw) - act_P(Bw, act_P(A, p, tw), tw) == act_P(c.to_weyl(), p, tw);
      oracle(ok);
      FieldSum sym(c);
      sym.add(Rational(1), bracket(b, a));
      anti(sym.is_zero());
    }
  }
  {
    Tally jac(rep, check::kJacobi), closed(rep, check::kSnClosed);
    for (int t = 0; t < N; ++t) {
      auto a = sampling::sn_field(rng, n, 3), b = sampling::sn_field(rng, n, 3), c = sampling::sn_field(rng, n, 3);
      FieldSum sum;
      sum.add(Rational(1), bracket(bracket(a, b), c));
      sum.add(Rational(1), bracket(bracket(b, c), a));
      sum.add(Rational(1), bracket(bracket(c, a), b));
      jac(sum.is_zero());
      closed(bracket(a, b).is_divergence_free());
    }
  }
  {
    Tally ab(rep, check::kCartanAbelian);
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) ab(bracket(VectorField::euler(n, i), VectorField::euler(n, j)).is_zero());
  }
  {
    Tally r1(rep, check::kRankOne), tr(rep, check::kRankOneTrace);
    for (int t = 0; t < N; ++t) {
      auto r = sampling::multi(rng, n, 3);
      auto u = sampling::ratvec(rng, n), v = sampling::ratvec(rng, n);
      auto m = rank_one(r, u);
      RatVec expect = to_ratvec(r);
      for (auto& x : expect) x *= dot(u, v);
      r1(m.apply(v) == expect);
      tr(m.trace() == dot(u, r));
    }
  }
  {
    Tally ddp(rep, check::kDDp);
    for (int t = 0; t < N; ++t)
      ddp(ddp_identity_check(sampling::ratvec(rng, n), sampling::ratvec(rng, n), sampling::multi(rng, n, 3),
                             sampling::multi(rng, n, 3), sampling::laurent(rng, n, 3), tw));
  }
  {
    Tally assoc(rep, check::kWeylAssoc), mod(rep, check::kActPModule);
    for (int t = 0; t < N; ++t) {
      auto a = sampling::weyl(rng, n, 2, 2), b = sampling::weyl(rng, n, 2, 2), c = sampling::weyl(rng, n, 2, 2);
      assoc(weyl_product(weyl_product(a, b), c) == weyl_product(a, weyl_product(b, c)));
      auto p = sampling::laurent(rng, n, 2);
      mod(act_P(weyl_product(a, b), p, tw) == act_P(a, act_P(b, p, tw), tw));
    }
  }
  {
    Tally semi(rep, check::kSemidirect);
    FVContext ctx(tw, FinModule::parse(cfg.module, n));
    for (int t = 0; t < N; ++t) {
      auto X = sampling::sn_field(rng, n, 3);
      auto s = sampling::multi(rng, n, 3);
      auto m = random_window_vector(ctx, 2, rng);
      auto lhs = act_shen(X, act_laurent(s, m)) - act_laurent(s, act_shen(X, m));
      semi(lhs == dot(X.u, s) * act_laurent(X.r + s, m));
    }
  }
  return rep;
}

inline std::vector<FinModule> axiom_modules(const RunConfig& cfg) {
  const int n = cfg.n;
  std::vector<FinModule> mods{FinModule::trivial(n), FinModule::natural(n)};
  for (int k = 2; k <= n - 1; ++k) mods.push_back(FinModule::exterior(n, k));
  mods.push_back(FinModule::symmetric(n, 2));
  mods.push_back(FinModule::adjoint(n));
  auto own = FinModule::parse(cfg.module, n);
  if (std::find(mods.begin(), mods.end(), own) == mods.end()) mods.push_back(own);
  return mods;
}

inline CheckReport suite_axioms(const RunConfig& cfg, std::mt19937_64& rng) {
  CheckReport rep;
  const int n = cfg.n;
  std::vector<TwistParam> twists{TwistParam::zero(n), generic_lambda(n)};
  if (std::find(twists.begin(), twists.end(), cfg.lambda) == twists.end()) twists.push_back(cfg.lambda);
  const auto mods = axiom_modules(cfg);
  // at least 200 instances per style in total
  const int per = std::max<int>(4, static_cast<int>((200 + twists.size() * mods.size() - 1) / (twists.size() * mods.size())));
  Tally shen(rep, check::kShenAxiom, "shenInstances"), shenW(rep, check::kShenWnAxiom, "shenWnInstances"),
      llz(rep, check::kLlzAxiom, "llzInstances");
  for (const auto& tw : twists)
    for (const auto& V : mods) {
      FVContext cs(tw, V, ActionStyle::ShenLarsson), cl(tw, V, ActionStyle::LLZ);
      for (int t = 0; t < per; ++t) {
        auto X = sampling::sn_field(rng, n, 2), Y = sampling::sn_field(rng, n, 2);
        auto m = random_window_vector(cs, 2, rng);
        shen(act_shen(bracket(X, Y), m) == act_shen(X, act_shen(Y, m)) - act_shen(Y, act_shen(X, m)));
        if (V.is_exterior(V.kind() == ModuleKind::Exterior ? V.param() : (V.kind() == ModuleKind::Natural ? 1 : 0))) {
          auto P = sampling::wn_field(rng, n, 2), Q = sampling::wn_field(rng, n, 2);
          shenW(act_shen(bracket(P, Q), m) == act_shen(P, act_shen(Q, m)) - act_shen(Q, act_shen(P, m)));
        }
        auto P = sampling::wn_field(rng, n, 2), Q = sampling::wn_field(rng, n, 2);
        auto ml = FVElement(cl, m.terms());
        llz(act_llz(bracket(P, Q), ml) == act_llz(P, act_llz(Q, ml)) - act_llz(Q, act_llz(P, ml)));
      }
    }
  rep.set("modules", static_cast<long long>(mods.size()));
  rep.set("twists", static_cast<long long>(twists.size()));
  return rep;
}

inline CheckReport suite_derham(const RunConfig& cfg, std::mt19937_64& rng) {
  CheckReport rep;
  const int n = cfg.n;
  const TwistParam& tw = cfg.lambda;
  const int B = cfg.window.B;
  {
    Tally dd(rep, check::kDD), pp(rep, check::kPiPi);
    for (int k = 0; k + 2 <= n; ++k) {
      for (const auto& m : window_basis(exterior_context(tw, k), B)) dd(d_map(k + 1, d_map(k, m)).is_zero());
      for (const auto& m : window_basis(exterior_context(tw, k, ActionStyle::LLZ), B))
        pp(pi_map(k + 1, pi_map(k, m)).is_zero());
    }
  }
  {
    Tally inter(rep, check::kDIntertwines);
    for (int k = 0; k <= n - 1; ++k) {
      const auto basis = window_basis(exterior_context(tw, k), B);
      for (int t = 0; t < 12; ++t) {
        auto X = sampling::wn_field(rng, n, 2);
        bool ok = true;
        for (const auto& m : basis) ok = ok && d_map(k, act_shen(X, m)) == act_shen(X, d_map(k, m));
        inter(ok);
      }
    }
  }
  {
    Tally phi(rep, check::kPhiIntertwines), inv(rep, check::kPhiBijective);
    std::vector<std::shared_ptr<const FinModule>> mods;
    for (int k = 0; k <= n; ++k) mods.push_back(exterior_module(n, k));
    auto own = shared_module(FinModule::parse(cfg.module, n));
    if (own->id_scalar()) mods.push_back(own);
    for (const auto& V : mods) {
      FVContext ctx(tw, V);
      const auto basis = window_basis(ctx, B);
      for (const auto& r : box(n, 2))
        for (int j = 1; j <= n; ++j) {
          VectorField X(unit_vec(n, j), r);
          for (int t = 0; t < 2; ++t) {
            const auto& m = basis[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(basis.size()) - 1))];
            phi(phi_map(act_shen(X, m)) == act_llz(j, r + MultiIndex::unit(n, j), phi_map(m)));
          }
        }
      for (int t = 0; t < 10; ++t) {
        auto m = random_window_vector(ctx, B, rng);
        inv(phi_inverse(phi_map(m)) == m);
      }
    }
  }
  {
    Tally sq(rep, check::kSquare);
    for (int k = 0; k <= n - 1; ++k)
      for (const auto& m : window_basis(exterior_context(tw, k), B)) sq(phi_map(d_map(k, m)) == pi_map(k, phi_map(m)));
  }
  return rep;
}

namespace detail {

/// True when gens applied to every homogeneous generator stays inside `target`.
inline bool graded_invariance(const std::vector<FVElement>& generators, const std::vector<VectorField>& gens,
                              const FVContext& ctx, const GradedSpan& target, int workers, long long& applications) {
  const auto gd = prepare_generators(gens, ctx);
  std::vector<char> ok(gd.size(), 1);
  parallel_for(gd.size(), workers, [&](std::size_t g) {
    for (const auto& v : generators)
      for (const auto& [s, w] : GradedSpan::split(v.terms())) {
        VVector img = apply_homogeneous(gd[g], s, w);
        if (img.empty()) continue;
        const SpanBasis<int>* part = target.part(s + gd[g].r);
        if (!part || !part->contains(img)) {
          ok[g] = 0;
          return;
        }
      }
  });
  applications += static_cast<long long>(gd.size() * generators.size());
  return std::all_of(ok.begin(), ok.end(), [](char c) { return c != 0; });
}

}  // namespace detail

inline CheckReport suite_minuscule(const RunConfig& cfg, std::mt19937_64& rng) {
  CheckReport rep;
  const int n = cfg.n;
  if (n < 3) throw std::invalid_argument("minuscule suite needs n >= 3");
  const TwistParam& tw = cfg.lambda;
  const Window& win = cfg.window;
  const int B = win.B;
  std::vector<int> levels;
  if (cfg.k) levels.push_back(*cfg.k);
  else
    for (int k = 1; k <= n; ++k) levels.push_back(k);

  {
    Tally gv(rep, check::kGVanishes);
    for (int k : levels) {
      if (k < 1) continue;
      const auto gens = l_generators(k, tw, B);
      for (int i = 1; i <= n - 2; ++i)
        for (const auto& s : box(n, 2)) {
          bool ok = true;
          for (const auto& y : gens) ok = ok && g_map(i, s, y).is_zero();
          gv(ok);
        }
    }
  }
  {
    // g_{1,0}(x^{e_n} (x) e_2) = -x^{e_n} (x) e_1 for lambda = 0, and the witness is outside L_n(P,1).
    Tally gw(rep, check::kGWitness);
    const TwistParam zero = TwistParam::zero(n);
    auto ctx = exterior_context(zero, 1);
    auto witness = FVElement::term(ctx, MultiIndex::unit(n, 3), ctx.V().index_of({2}));
    auto value = g_map(1, MultiIndex(n), witness);
    gw(value == FVElement::term(ctx, MultiIndex::unit(n, 3), ctx.V().index_of({1}), Rational(-1)) &&
       !l_graded(1, zero, 2).contains(witness.terms()));
  }
  {
    Tally inv(rep, check::kLInvariant), proper(rep, check::kLProper);
    const auto gens = sn_generators(n, win.R);
    long long applications = 0;
    for (int k : levels) {
      if (k < 1) continue;
      auto ctx = exterior_context(tw, k);
      const auto gensL = l_generators(k, tw, B);
      GradedSpan target = l_graded(k, tw, B + win.R);
      inv(detail::graded_invariance(gensL, gens, ctx, target, cfg.workers, applications));
      const std::size_t central = box(n, B).size() * ctx.V().dim();
      if (k <= n - 1) proper(l_graded(k, tw, B).rank_within(B) < central);
    }
    rep.set("generatorApplications", applications);
  }
  {
    Tally kc(rep, check::kKernelCriterion);
    for (int k = 0; k <= n - 1; ++k) {
      if (cfg.k && k != *cfg.k) continue;
      kc(same_graded(kernel_d_graded(k, tw, B), partial_criterion_graded(k, tw, B), B));
    }
  }
  {
    Tally ri2(rep, check::kRi2);
    for (int t = 0; t < 20; ++t) {
      const int i = uniform_int(rng, 1, n - 2);
      const int k = cfg.k && *cfg.k >= 1 ? *cfg.k : uniform_int(rng, 1, n - 1);
      auto ctx = exterior_context(tw, k);
      auto s = sampling::multi(rng, n, 2);
      auto p = sampling::laurent(rng, n, 2);
      auto w = VVector::unit(uniform_int(rng, 0, static_cast<int>(ctx.V().dim()) - 1));
      auto m = FVElement::tensor(ctx, p, w);
      auto fam = sample_family(n, 4, ddpw_family(i, i + 1, s, m));
      ri2(coeff_extract(fam, MultiIndex::unit(n, i) + MultiIndex::unit(n, i)) == Rational(-1) * ri2_expected(i, s, m));
    }
  }
  {
    Tally deg(rep, check::kDegreeBound), four(rep, check::kDegreeFour);
    for (int t = 0; t < 3; ++t) {
      const int k = cfg.k && *cfg.k >= 1 && *cfg.k <= n - 1 ? *cfg.k : uniform_int(rng, 1, n - 1);
      auto ctx = exterior_context(tw, k);
      const int i = uniform_int(rng, 1, n - 1), j = uniform_int(rng, 1, n - 1);
      auto s = sampling::multi(rng, n, 2);
      auto m = FVElement::tensor(ctx, sampling::laurent(rng, n, 2),
                                 VVector::unit(uniform_int(rng, 0, static_cast<int>(ctx.V().dim()) - 1)));
      auto fam = sample_family(n, 5, ddpw_family(i, j, s, m));
      deg(coefficients_of_degree(fam, 5).empty());
      auto dm = sample_family(n, 4, double_matrix_family(i, j, s, m));
      four(coefficients_of_degree(sample_family(n, 4, ddpw_family(i, j, s, m)), 4) == coefficients_of_degree(dm, 4));
    }
  }
  return rep;
}

inline CheckReport suite_lattice(const RunConfig& cfg, std::mt19937_64& rng) {
  ClosureOptions opt;
  opt.workers = cfg.workers;
  return lattice_delta0(cfg.lambda, cfg.window, 10, rng, opt);
}

inline CheckReport suite_nonminuscule(const RunConfig& cfg, std::mt19937_64& rng) {
  ClosureOptions opt;
  opt.workers = cfg.workers;
  FVContext ctx(cfg.lambda, FinModule::parse(cfg.module, cfg.n));
  return generation_evidence(ctx, 10, cfg.window, rng, opt);
}

inline CheckReport suite_simplicity(const RunConfig& cfg, std::mt19937_64& rng) {
  ClosureOptions opt;
  opt.workers = cfg.workers;
  return maximality_evidence(cfg.k.value_or(2), cfg.lambda, cfg.window, 10, rng, opt);
}

inline CheckReport suite_iso(const RunConfig& cfg, std::mt19937_64&) {
  CheckReport rep;
  rep.usedEvidence = true;
  const TwistParam a({Rational(1, 3), Rational(1, 2)}), b({Rational(1, 4), Rational(1, 2)});
  const auto sym2 = FinModule::symmetric(2, 2), adj = FinModule::adjoint(2);
  auto record = [&](const std::string& name, const IsoResult& r, bool equal, const std::string& reason) {
    rep.check(name, r.equal == equal && r.reason == reason, r.reason);
  };
  record(check::kIsoEqual, iso_evidence(a, sym2, a, sym2), true, "");
  record(check::kIsoCharacter, iso_evidence(a, sym2, a, adj), false, "character");
  record(check::kIsoLattice, iso_evidence(a, sym2, b, sym2), false, "eigenvalue-lattice");
  // the configured parameters against shifted copies of themselves
  const auto V = FinModule::parse(cfg.module, cfg.n);
  RatVec shifted = cfg.lambda.lambda, halved = cfg.lambda.lambda;
  shifted[0] += Rational(1);
  halved[0] += Rational(1, 2);
  record(check::kIsoEqual, iso_evidence(cfg.lambda, V, TwistParam(shifted), V), true, "");
  record(check::kIsoLattice, iso_evidence(cfg.lambda, V, TwistParam(halved), V), false, "eigenvalue-lattice");
  return rep;
}

struct SuiteSpec {
  std::string name;
  bool evidence = false;
  std::function<CheckReport(const RunConfig&, std::mt19937_64&)> run;
};

inline const std::vector<SuiteSpec>& suite_registry() {
  static const std::vector<SuiteSpec> reg{
      {"identities", false, suite_identities}, {"axioms", false, suite_axioms},
      {"derham", false, suite_derham},         {"minuscule", false, suite_minuscule},
      {"lattice", true, suite_lattice},        {"nonminuscule", true, suite_nonminuscule},
      {"simplicity", true, suite_simplicity},  {"iso", true, suite_iso},
  };
  return reg;
}

inline std::vector<std::string> suite_names() {
  std::vector<std::string> out;
  for (const auto& s : suite_registry()) out.push_back(s.name);
  return out;
}

inline const SuiteSpec& find_suite(const std::string& name) {
  for (const auto& s : suite_registry())
    if (s.name == name) return s;
  throw std::invalid_argument("unknown suite '" + name + "'");
}

/// Runs one suite; the suite's random stream depends only on the seed and its name.
inline SuiteResult run_one(const RunConfig& cfg, const SuiteSpec& spec, std::set<std::string>* executed = nullptr) {
  Digest nd;
  nd.update(spec.name);
  std::mt19937_64 rng(cfg.seed ^ nd.value());
  const auto t0 = std::chrono::steady_clock::now();
  SuiteResult res;
  res.name = spec.name;
  CheckReport rep;
  try {
    rep = spec.run(cfg, rng);
  } catch (const std::invalid_argument& e) {
    rep.check("suite preconditions", false, e.what());
  }
  const auto t1 = std::chrono::steady_clock::now();
  if (cfg.timings) res.timeMs = std::chrono::duration_cast<std::chrono::milliseconds>(t1 - t0).count();
  res.counters = rep.counters;
  res.failures = rep.failures;
  res.logDigest = rep.digest.hex();
  if (!rep.ok()) res.status = SuiteStatus::Fail;
  else res.status = (spec.evidence || rep.usedEvidence) ? SuiteStatus::EvidencePass : SuiteStatus::Pass;
  if (executed) executed->insert(rep.executed.begin(), rep.executed.end());
  return res;
}

inline Report run_suite(const RunConfig& cfg, std::set<std::string>* executed = nullptr) {
  cfg.validate();
  if (cfg.suites.empty()) throw std::invalid_argument("no suites requested");
  std::vector<const SuiteSpec*> specs;
  for (const auto& name : cfg.suites) specs.push_back(&find_suite(name));
  Report rep;
  rep.config = cfg;
  for (const auto* spec : specs) rep.suites.push_back(run_one(cfg, *spec, executed));
  return rep;
}

}  // namespace torusrep
