#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>

#include "fpcc/protocols.hpp"
#include "fpcc/serialize.hpp"

using namespace fpcc;

namespace {

BrouwerInstance identity_comp(double eps) {
  return BrouwerInstance::make(BrouwerKind::Comp, NormKind::max(), eps, 1.0,
                               1.0, make_identity(1), make_identity(1));
}

}  // namespace

TEST_CASE("total regime condition") {
  CHECK(total_regime_check(1.0, 0.1, 0.1));        // 0.2 <= 0.2
  CHECK_FALSE(total_regime_check(3.0, 0.1, 0.1));  // 0.4 > 0.2
  CHECK(total_regime_check(7.0, 0.0, 0.0));        // 0 <= 0
  CHECK_THROWS_AS(total_regime_check(-1.0, 0.1, 0.1), std::invalid_argument);
}

TEST_CASE("quantizer error bounds") {
  Rng rng(21);
  for (int bits : {1, 4, 16}) {
    const double step = std::ldexp(1.0, -bits);
    for (int trial = 0; trial < 300; ++trial) {
      const double v = rng.next_unit();
      CHECK(std::fabs(dequantize01(quantize01(v, bits), bits) - v) <= step);
      const double w = 2.0 * rng.next_unit() - 1.0;
      CHECK(std::fabs(dequantize_sym(quantize_sym(w, bits), bits) - w) <=
            2.0 * step);
    }
  }
}

TEST_CASE("channel accounting") {
  Channel ch;
  ch.send_uint("A", 5, 4);
  ch.send_bit("B", true);
  ch.send_bit("B", false);
  ch.send_bits("A", "101");
  const Transcript t = ch.take();
  CHECK(t.messages.size() == 4);
  CHECK(t.messages[0].bits == "0101");
  CHECK(t.total_bits == 9);
  CHECK(replay_total_bits(t) == t.total_bits);
  CHECK(t.rounds == 3);  // A, BB, A
  CHECK(t.rounds <= int(t.messages.size()));
}

TEST_CASE("identity composition accepts the first grid point") {
  const auto inst = identity_comp(0.25);
  const auto res = run_grid_protocol(inst, 0.5);
  REQUIRE(res.accepted);
  CHECK(res.solution == Vec{0.0});
  CHECK(res.candidates_tried == 1);
  const auto v = verify_solution(inst, res.solution, inst.epsilon);
  CHECK(v.ok);
  CHECK(v.residual == 0.0);
}

TEST_CASE("grid protocol cost shape in one dimension") {
  // constant function: the candidate sweep stops at the nearest grid point
  const auto fa = std::make_shared<AnchorFunction>(AnchorFunction::create(
      1, 1, {{Vec{0.0}, Vec{0.75}}}, 0.0, NormKind::max()));
  const auto inst = BrouwerInstance::make(BrouwerKind::Comp, NormKind::max(),
                                          0.3, 0.0, 1.0, fa,
                                          make_identity(1));
  const auto res = run_grid_protocol(inst, 0.5, 16);
  REQUIRE(res.accepted);
  CHECK(res.candidates_tried <= 3);
  CHECK(res.transcript.total_bits <= res.candidates_tried * (16 + 1));
}

TEST_CASE("random total-regime instances succeed and verify") {
  Rng rng(22);
  int ran = 0;
  const std::array<BrouwerKind, 3> kinds{BrouwerKind::Comp, BrouwerKind::Mean,
                                         BrouwerKind::Concat};
  for (int trial = 0; trial < 30; ++trial) {
    const auto kind = kinds[std::size_t(trial % 3)];
    const int n = kind == BrouwerKind::Concat ? 2 : 1 + int(rng.next_u64() % 2);
    const auto inst = random_instance(rng.next_u64(), kind, n, n,
                                      NormKind::max(), 0.25, 1.0, 1.0, 6);
    const double alpha = 0.1;
    const double lam = inst.combined_lambda_bound();
    if (!total_regime_check(lam, alpha, inst.epsilon)) continue;
    const auto res = run_grid_protocol(inst, alpha);
    REQUIRE(res.accepted);
    const auto v = verify_solution(inst, res.solution, inst.epsilon);
    CHECK(v.ok);
    ++ran;
  }
  CHECK(ran > 20);
}

TEST_CASE("soundness: accepted points pass at the declared epsilon") {
  Rng rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_instance(rng.next_u64(), BrouwerKind::Comp, 2, 2,
                                      NormKind::max(), 0.18, 1.0, 1.0, 5);
    const auto res = run_grid_protocol(inst, 1.0 / 16, 8);
    if (!res.accepted) continue;
    // zero verifier tolerance: the quantization slack keeps epsilon honest
    const auto v = verify_solution(inst, res.solution, inst.epsilon, 0.0);
    CHECK(v.ok);
  }
}

TEST_CASE("protocol failure is a result, not an exception") {
  // constant 0.25 vs the grid {0, 1/2, 1}: residual at least 1/4 everywhere
  const auto fa = std::make_shared<AnchorFunction>(AnchorFunction::create(
      1, 1, {{Vec{0.0}, Vec{0.25}}}, 0.0, NormKind::max()));
  const auto inst = BrouwerInstance::make(BrouwerKind::Comp, NormKind::max(),
                                          1.0 / 16, 0.0, 1.0, fa,
                                          make_identity(1));
  // condition violated by a factor of 4: (0+1)*0.5 = 8*epsilon
  CHECK_FALSE(total_regime_check(0.0, 0.5, inst.epsilon));
  const auto res = run_grid_protocol(inst, 0.5);
  CHECK_FALSE(res.accepted);
  CHECK(res.candidates_tried == 3);
  CHECK(res.transcript.total_bits == 3 * (16 + 1));
}

TEST_CASE("determinism: identical runs give identical transcripts") {
  Rng rng(24);
  const auto inst = random_instance(rng.next_u64(), BrouwerKind::Mean, 2, 2,
                                    NormKind::max(), 0.3, 1.0, 1.0, 6);
  const auto r1 = run_grid_protocol(inst, 0.25);
  const auto r2 = run_grid_protocol(inst, 0.25);
  CHECK(transcript_to_json(r1.transcript, json(r1.solution)).dump() ==
        transcript_to_json(r2.transcript, json(r2.solution)).dump());
}

TEST_CASE("euclidean instances stay sound with the inflated certificate") {
  Rng rng(25);
  for (int trial = 0; trial < 10; ++trial) {
    const auto inst = random_instance(rng.next_u64(), BrouwerKind::Comp, 2, 2,
                                      NormKind::l2(), 0.4, 0.5, 0.5, 5);
    const double lam = inst.combined_lambda_bound();  // sqrt(m)-inflated
    CHECK(lam == doctest::Approx(0.5 * std::sqrt(2.0) * 0.5 * std::sqrt(2.0)));
    const double alpha = 0.125;
    if (!total_regime_check(lam, alpha, inst.epsilon)) continue;
    const auto res = run_grid_protocol(inst, alpha);
    REQUIRE(res.accepted);
    CHECK(verify_solution(inst, res.solution, inst.epsilon).ok);
  }
}

TEST_CASE("grid protocol rejects local instances") {
  auto fam = std::make_shared<LocalFamily>(random_local_family(
      3, 8, 1, 1, 1.0, NormKind::max(), 4,
      LocalFamily::Selector::Kind::Constant));
  const auto inst = BrouwerInstance::make_local(NormKind::max(), 0.2, fam);
  CHECK_THROWS_AS(run_grid_protocol(inst, 0.5), std::invalid_argument);
}
