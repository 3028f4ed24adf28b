#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "fpcc/protocols.hpp"
#include "fpcc/reductions.hpp"
#include "fpcc/serialize.hpp"

using namespace fpcc;

namespace {

Vec random_point(Rng& rng, int n) {
  Vec v(std::size_t(n), 0.0);
  for (double& c : v) c = rng.next_unit();
  return v;
}

// test-only oracle: direct substitution into the locality formula
Vec local_eval_oracle(const LocalFamily& fam, const Vec& z) {
  const auto sel = fam.select(z);
  std::uint32_t xb = 0, yb = 0;
  for (std::size_t j = 0; j < sel.size(); ++j) {
    if (fam.x[std::size_t(sel[j])]) xb |= 1u << j;
    if (fam.y[std::size_t(sel[j])]) yb |= 1u << j;
  }
  return fam.fprime[(std::size_t(xb) << fam.r) | yb].eval(z);
}

}  // namespace

TEST_CASE("mean_to_comp is a pointwise identity") {
  Rng rng(31);
  for (NormKind norm : {NormKind::max(), NormKind::l2()}) {
    const auto src = random_instance(rng.next_u64(), BrouwerKind::Mean, 3, 3,
                                     norm, 0.2, 1.0, 1.5, 6);
    const auto rec = mean_to_comp(src);
    CHECK(rec.epsilon_scale == 1.0);
    const auto mean = src.target();
    const auto comp = rec.target.target();
    for (int trial = 0; trial < 200; ++trial) {
      const Vec x = random_point(rng, 3);
      const Vec a = mean->eval(x);
      const Vec b = comp->eval(x);
      for (std::size_t i = 0; i < a.size(); ++i)
        CHECK(std::fabs(a[i] - b[i]) <= 1e-12);
    }
    // g_B composed with g_A stays inside the unit box
    for (int trial = 0; trial < 100; ++trial) {
      const Vec x = random_point(rng, 3);
      CHECK(in_unit_box(comp->eval(x)));
    }
  }
}

TEST_CASE("mean_to_comp on identities solves everywhere") {
  const auto src = BrouwerInstance::make(BrouwerKind::Mean, NormKind::max(),
                                         0.1, 1.0, 1.0, make_identity(2),
                                         make_identity(2));
  const auto rec = mean_to_comp(src);
  Rng rng(32);
  for (int trial = 0; trial < 50; ++trial) {
    const Vec x = random_point(rng, 2);
    CHECK(verify_solution(rec.target, x, 1e-12).ok);
    CHECK(rec.backmap(x) == x);
  }
}

TEST_CASE("concat_to_mean constants and identity decomposition") {
  // both halves constant 1/2: the mean gadget fixes (0.5, 0.5)
  const auto c = make_constant(2, Vec{0.5});
  const auto src = BrouwerInstance::make(BrouwerKind::Concat, NormKind::max(),
                                         0.1, 0.0, 0.0, c, c);
  const auto rec = concat_to_mean(src);
  CHECK(rec.epsilon_scale == 2.0);
  CHECK(rec.target.epsilon == doctest::Approx(0.05));
  const Vec fp{0.5, 0.5};
  CHECK(verify_solution(rec.target, fp, 1e-12).ok);
  CHECK(verify_solution(src, rec.backmap(fp), 1e-12).ok);

  // projections make f_Concat the identity: every point has residual 0
  auto half = [](int which) -> FuncPtr {
    return std::make_shared<LambdaFunc>(
        2, 1,
        [which](std::span<const double> x) { return Vec{x[std::size_t(which)]}; },
        [](NormKind k) { return k.is_max() ? 1.0 : std::sqrt(2.0); }, "proj");
  };
  const auto id_src = BrouwerInstance::make(BrouwerKind::Concat,
                                            NormKind::max(), 0.1, 1.0, 1.0,
                                            half(0), half(1));
  const auto id_rec = concat_to_mean(id_src);
  Rng rng(33);
  for (int trial = 0; trial < 30; ++trial) {
    const Vec x = random_point(rng, 2);
    CHECK(verify_solution(id_src, id_rec.backmap(x), 1e-12).ok);
  }
}

TEST_CASE("concat_to_mean round trip through the grid protocol") {
  Rng rng(34);
  for (int trial = 0; trial < 15; ++trial) {
    const auto src = random_instance(rng.next_u64(), BrouwerKind::Concat, 2, 2,
                                     NormKind::max(), 0.3, 1.0, 1.0, 5);
    const auto rec = concat_to_mean(src);
    const double lam = rec.target.combined_lambda_bound();
    const double alpha = 1.0 / 16;
    if (!total_regime_check(lam, alpha, rec.target.epsilon)) continue;
    const auto res = run_grid_protocol(rec.target, alpha);
    REQUIRE(res.accepted);
    const Vec back = rec.backmap(res.solution);
    CHECK(verify_solution(src, back, rec.source_epsilon(rec.target.epsilon)).ok);
  }
}

TEST_CASE("comp_to_concat exactness and epsilon chain") {
  // exact target fixed point backs to an exact source fixed point
  const auto src = BrouwerInstance::make(BrouwerKind::Comp, NormKind::max(),
                                         0.5, 1.0, 1.0, make_identity(1),
                                         make_identity(1));
  const auto rec = comp_to_concat(src, 1.0);
  CHECK(rec.epsilon_scale == doctest::Approx(2.0 * 2.0 * 2.0));  // 2(1+c)(lb+1)
  const Vec fixed{0.3, 0.3, 0.3, 0.3};  // (a, x1, b, x2) with x1=f_A(x2) etc.
  CHECK(verify_solution(rec.target, fixed, 1e-12).ok);
  const Vec back = rec.backmap(fixed);
  CHECK(back == Vec{0.3});
  CHECK(verify_solution(src, back, 1e-12).ok);

  CHECK_THROWS_AS(comp_to_concat(src, 0.5), std::invalid_argument);

  Rng rng(35);
  for (int trial = 0; trial < 10; ++trial) {
    const auto s = random_instance(rng.next_u64(), BrouwerKind::Comp, 1, 1,
                                   NormKind::max(), 0.6, 0.75, 0.75, 5);
    const auto r = comp_to_concat(s, 1.0);
    const double alpha = 0.125;
    if (!total_regime_check(r.target.combined_lambda_bound(), alpha,
                            r.target.epsilon))
      continue;
    const auto res = run_grid_protocol(r.target, alpha);
    REQUIRE(res.accepted);
    const Vec back = r.backmap(res.solution);
    CHECK(verify_solution(s, back, r.source_epsilon(r.target.epsilon)).ok);
  }
}

TEST_CASE("reduction targets satisfy the lemma lambda bounds") {
  Rng rng(36);
  for (NormKind norm : {NormKind::max(), NormKind::l2()}) {
    const auto concat = random_instance(rng.next_u64(), BrouwerKind::Concat,
                                        2, 2, norm, 0.3, 1.0, 0.8, 5);
    const auto r1 = concat_to_mean(concat);
    CHECK(lipschitz_estimate(*r1.target.f_a, norm, 40, 7) <=
          r1.target.lambda_a + 1e-6);
    CHECK(lipschitz_estimate(*r1.target.f_b, norm, 40, 8) <=
          r1.target.lambda_b + 1e-6);

    const auto mean = random_instance(rng.next_u64(), BrouwerKind::Mean, 2, 2,
                                      norm, 0.3, 1.2, 0.9, 5);
    const auto r2 = mean_to_comp(mean);
    CHECK(lipschitz_estimate(*r2.target.f_a, norm, 40, 9) <=
          r2.target.lambda_a + 1e-6);
    CHECK(lipschitz_estimate(*r2.target.f_b, norm, 40, 10) <=
          r2.target.lambda_b + 1e-6);

    const auto comp = random_instance(rng.next_u64(), BrouwerKind::Comp, 2, 2,
                                      norm, 0.3, 0.7, 1.1, 5);
    const auto r3 = comp_to_concat(comp, 1.0);
    CHECK(lipschitz_estimate(*r3.target.f_a, norm, 40, 11) <=
          r3.target.lambda_a + 1e-6);
    CHECK(lipschitz_estimate(*r3.target.f_b, norm, 40, 12) <=
          r3.target.lambda_b + 1e-6);
  }
}

TEST_CASE("chained theorem-1 cycle composes epsilon maps") {
  Rng rng(37);
  const auto src = random_instance(rng.next_u64(), BrouwerKind::Comp, 1, 1,
                                   NormKind::max(), 1.2, 0.5, 0.5, 4);
  const auto r1 = comp_to_concat(src, 1.0);
  const auto r2 = concat_to_mean(r1.target);
  const auto r3 = mean_to_comp(r2.target);
  const double alpha = 0.25;
  REQUIRE(total_regime_check(r3.target.combined_lambda_bound(), alpha,
                             r3.target.epsilon));
  const auto res = run_grid_protocol(r3.target, alpha);
  REQUIRE(res.accepted);
  const Vec back = r1.backmap(r2.backmap(r3.backmap(res.solution)));
  const double eps = r1.source_epsilon(
      r2.source_epsilon(r3.source_epsilon(r3.target.epsilon)));
  CHECK(verify_solution(src, back, eps).ok);
}

TEST_CASE("local family evaluation matches the substitution oracle") {
  Rng rng(38);
  for (auto sel : {LocalFamily::Selector::Kind::Constant,
                   LocalFamily::Selector::Kind::CellHash}) {
    for (int trial = 0; trial < 10; ++trial) {
      const auto fam = random_local_family(rng.next_u64(), 12, 2, 2, 1.0,
                                           NormKind::max(), 4, sel);
      for (int i = 0; i < 50; ++i) {
        const Vec z = random_point(rng, 2);
        CHECK(fam.eval(z) == local_eval_oracle(fam, z));
      }
    }
  }

  // f' ignoring its bit arguments: all members identical
  auto fam = random_local_family(rng.next_u64(), 8, 1, 1, 1.0,
                                 NormKind::max(), 4,
                                 LocalFamily::Selector::Kind::Constant);
  for (auto& f : fam.fprime) f = fam.fprime[0];
  for (int i = 0; i < 20; ++i) {
    const Vec z = random_point(rng, 1);
    CHECK(fam.eval(z) == fam.fprime[0].eval(z));
  }
}

TEST_CASE("local_to_comp composition is exact") {
  Rng rng(39);
  for (int trial = 0; trial < 10; ++trial) {
    const int r = int(rng.next_u64() % 3);
    const auto fam = std::make_shared<LocalFamily>(random_local_family(
        rng.next_u64(), 10, 2, r, 1.0, NormKind::max(), 4,
        trial % 2 ? LocalFamily::Selector::Kind::CellHash
                  : LocalFamily::Selector::Kind::Constant));
    const auto src = BrouwerInstance::make_local(NormKind::max(), 0.2, fam);
    const auto rec = local_to_comp(src);
    CHECK(rec.target.f_a->out_dim() == 2 * ((1 << r) + 1));
    for (int i = 0; i < 200; ++i) {
      const Vec z = random_point(rng, 2);
      const Vec via = rec.target.f_b->eval(rec.target.f_a->eval(z));
      const Vec direct = fam->eval(z);
      CHECK(via == direct);  // exact, bit for bit
    }
  }
}

TEST_CASE("local_to_comp lipschitz claims") {
  Rng rng(40);
  const auto fam = std::make_shared<LocalFamily>(random_local_family(
      rng.next_u64(), 10, 2, 2, 1.5, NormKind::max(), 5,
      LocalFamily::Selector::Kind::Constant));
  const auto src = BrouwerInstance::make_local(NormKind::max(), 0.2, fam);
  const auto rec = local_to_comp(src);
  // constant-L family: f_A is at most lambda-Lipschitz
  CHECK(lipschitz_estimate(*rec.target.f_a, src.p, 60, 1) <=
        rec.target.lambda_a + 1e-6);
  // selector bound holds on pairs within C (images of f_A)
  const double bound = rec.target.lambda_b;
  double worst = 0.0;
  for (int i = 0; i < 200; ++i) {
    const Vec z1 = random_point(rng, 2), z2 = random_point(rng, 2);
    const Vec u1 = rec.target.f_a->eval(z1), u2 = rec.target.f_a->eval(z2);
    const double du = normalized_dist(u1, u2, src.p);
    if (du <= 0) continue;
    const double dv = normalized_dist(rec.target.f_b->eval(u1),
                                      rec.target.f_b->eval(u2), src.p);
    worst = std::max(worst, dv / du);
  }
  CHECK(worst <= bound + 1e-6);

  auto big = *fam;
  big.r = 13;
  CHECK_THROWS_AS(
      local_to_comp(BrouwerInstance::make_local(
          NormKind::max(), 0.2, std::make_shared<LocalFamily>(big))),
      std::invalid_argument);
}

TEST_CASE("imitation game utilities and pure Nash enumeration") {
  const auto src = BrouwerInstance::make(BrouwerKind::Comp, NormKind::l2(),
                                         0.1, 1.0, 1.0, make_identity(1),
                                         make_identity(1));
  const auto game = comp_to_imitation_game(src, 0.5);
  CHECK(game.profile_count() == 9);
  CHECK(game.utility_a(Vec{0.5}, Vec{0.5}) == 0.0);
  CHECK(game.utility_b(Vec{0.5}, Vec{0.5}) == 0.0);

  Rng rng(41);
  for (int i = 0; i < 50; ++i) {
    const Vec x{rng.next_unit()}, y{rng.next_unit()};
    const double ua = game.utility_a(x, y);
    CHECK(ua <= 0.0);
    CHECK(ua >= -1.0);
  }

  // zero regret profiles of the identity game are exactly the diagonal
  const auto exact = enumerate_approx_pure_nash(game, 0.0);
  REQUIRE(exact.size() == 3);
  for (const auto& p : exact) CHECK(p.x == p.y);
  CHECK(nash_profile_to_point(exact[1]) == Vec{0.5});

  // a unit regret threshold admits every profile
  CHECK(enumerate_approx_pure_nash(game, 1.0).size() == 9);

  CHECK_THROWS_AS(
      comp_to_imitation_game(
          BrouwerInstance::make(BrouwerKind::Comp, NormKind::max(), 0.1, 1.0,
                                1.0, make_identity(1), make_identity(1)),
          0.5),
      std::invalid_argument);
}

TEST_CASE("rounded fixed point profile has small regret") {
  Rng rng(42);
  for (int trial = 0; trial < 5; ++trial) {
    const double lam = 0.5 + rng.next_unit();
    const auto inst = random_instance(rng.next_u64(), BrouwerKind::Comp, 1, 1,
                                      NormKind::l2(), 0.1, lam, lam, 5);
    const double alpha = 0.125;
    const auto game = comp_to_imitation_game(inst, alpha);

    // test-local oracle: bisection on the sign of f(x) - x
    const auto f = inst.target();
    double lo = 0.0, hi = 1.0;
    double flo = f->eval(Vec{lo})[0] - lo;
    for (int it = 0; it < 200; ++it) {
      const double mid = 0.5 * (lo + hi);
      const double fmid = f->eval(Vec{mid})[0] - mid;
      if ((flo <= 0) == (fmid <= 0)) {
        lo = mid;
        flo = fmid;
      } else {
        hi = mid;
      }
    }
    const double xstar = 0.5 * (lo + hi);
    const GridSpec g1 = GridSpec::make(1, alpha);
    const Vec xr = nearest_grid(Vec{xstar}, g1);
    const Vec yr = nearest_grid(inst.f_a->eval(Vec{xstar}), g1);

    double best_a = -1e300, best_b = -1e300;
    GridScan sx(g1);
    Vec p;
    while (sx.next(p)) {
      best_a = std::max(best_a, game.utility_a(p, yr));
      best_b = std::max(best_b, game.utility_b(xr, p));
    }
    const double regret =
        std::max(best_a - game.utility_a(xr, yr),
                 best_b - game.utility_b(xr, yr));
    const double lam_eff = inst.combined_lambda_bound();
    CHECK(regret <= 8.0 * (lam_eff + 1.0) * (lam_eff + 1.0) * alpha);
  }
}

TEST_CASE("backmap descriptors survive serialization") {
  Rng rng(43);
  const auto src = random_instance(rng.next_u64(), BrouwerKind::Comp, 1, 1,
                                   NormKind::max(), 0.4, 0.8, 0.8, 4);
  const auto rec = comp_to_concat(src, 2.0);
  const json j = reduction_record_to_json(rec);
  const auto back = reduction_record_from_json(json::parse(j.dump()));
  CHECK(back.epsilon_scale == rec.epsilon_scale);
  CHECK(back.c == rec.c);
  CHECK(back.target.epsilon == rec.target.epsilon);
  const Vec x{0.1, 0.2, 0.3, 0.4};
  CHECK(back.backmap(x) == rec.backmap(x));
}
