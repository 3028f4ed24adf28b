#include "fpcc/protocols.hpp"

#include <cmath>
#include <stdexcept>

namespace fpcc {

bool total_regime_check(double lambda_combined, double alpha, double epsilon) {
  if (lambda_combined < 0.0 || alpha < 0.0 || epsilon < 0.0)
    throw std::invalid_argument("total_regime_check: arguments must be >= 0");
  return (lambda_combined + 1.0) * alpha <= 2.0 * epsilon;
}

double grid_protocol_slack(const BrouwerInstance& inst, int bits_per_coord) {
  const double q = std::ldexp(1.0, -bits_per_coord);  // 2^-bits
  switch (inst.kind) {
    case BrouwerKind::Comp:
      // B evaluates f_B at the quantized point
      return inst.f_b->lipschitz_bound(inst.p) * q;
    case BrouwerKind::Mean:
      // the quantization error enters the mean with factor 1/2
      return 0.5 * q;
    case BrouwerKind::Concat:
      // A's half-residual is quantized over [-1,1]
      return 2.0 * q;
    case BrouwerKind::Local:
      break;
  }
  throw std::invalid_argument("grid protocol: unsupported instance kind");
}

namespace {

// one quantized real per coordinate, message assembled by the caller
void append_uint(std::string& payload, std::uint64_t value, int bits) {
  for (int i = 0; i < bits; ++i)
    payload.push_back(((value >> (bits - 1 - i)) & 1ull) ? '1' : '0');
}

}  // namespace

GridProtocolResult run_grid_protocol(const BrouwerInstance& inst, double alpha,
                                     int bits_per_coord) {
  if (inst.kind == BrouwerKind::Local)
    throw std::invalid_argument(
        "grid protocol: Local instances are not grid-solvable; reduce to "
        "Comp first");
  if (bits_per_coord < 1 || bits_per_coord > 52)
    throw std::invalid_argument("grid protocol: bits_per_coord out of range");

  const int n = inst.n();
  const GridSpec grid = GridSpec::make(n, alpha);
  const double slack = grid_protocol_slack(inst, bits_per_coord);
  const double threshold = inst.epsilon - slack;

  GridProtocolResult result;
  Channel ch;
  GridScan scan(grid);
  Vec z;
  while (scan.next(z)) {
    ++result.candidates_tried;
    bool accept = false;
    switch (inst.kind) {
      case BrouwerKind::Comp: {
        // A -> B: f_A(z) quantized, m coords; B tests ||f_B(q) - z||
        const Vec w = inst.f_a->eval(z);
        std::string payload;
        Vec q(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
          const std::uint64_t enc = quantize01(w[i], bits_per_coord);
          append_uint(payload, enc, bits_per_coord);
          q[i] = dequantize01(enc, bits_per_coord);
        }
        ch.send_bits("A", std::move(payload));
        const Vec r = inst.f_b->eval(q);
        accept = normalized_dist(r, z, inst.p) <= threshold;
        break;
      }
      case BrouwerKind::Mean: {
        const Vec w = inst.f_a->eval(z);
        std::string payload;
        Vec q(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) {
          const std::uint64_t enc = quantize01(w[i], bits_per_coord);
          append_uint(payload, enc, bits_per_coord);
          q[i] = dequantize01(enc, bits_per_coord);
        }
        ch.send_bits("A", std::move(payload));
        Vec mean = inst.f_b->eval(z);
        for (std::size_t i = 0; i < mean.size(); ++i)
          mean[i] = 0.5 * (mean[i] + q[i]);
        accept = normalized_dist(mean, z, inst.p) <= threshold;
        break;
      }
      case BrouwerKind::Concat: {
        // A -> B: her half-residual f_A(z) - z_1 quantized over [-1,1];
        // B appends his own half and tests the combined residual.
        const Vec w = inst.f_a->eval(z);
        const int half = inst.f_a->out_dim();
        std::string payload;
        Vec res(std::size_t(n), 0.0);
        for (int i = 0; i < half; ++i) {
          const std::uint64_t enc =
              quantize_sym(w[std::size_t(i)] - z[std::size_t(i)],
                           bits_per_coord);
          append_uint(payload, enc, bits_per_coord);
          res[std::size_t(i)] = dequantize_sym(enc, bits_per_coord);
        }
        ch.send_bits("A", std::move(payload));
        const Vec wb = inst.f_b->eval(z);
        for (int i = 0; i < inst.f_b->out_dim(); ++i)
          res[std::size_t(half + i)] =
              wb[std::size_t(i)] - z[std::size_t(half + i)];
        accept = normalized_norm(res, inst.p) <= threshold;
        break;
      }
      case BrouwerKind::Local:
        break;
    }
    ch.send_bit("B", accept);
    if (accept) {
      result.accepted = true;
      result.solution = z;
      break;
    }
  }
  result.transcript = ch.take();
  return result;
}

Verification verify_solution(const BrouwerInstance& inst,
                             std::span<const double> x, double epsilon,
                             double tol) {
  if (int(x.size()) != inst.n())
    throw std::invalid_argument("verify_solution: dimension mismatch");
  const Vec fx = inst.target()->eval(x);
  Verification v;
  v.residual = normalized_dist(fx, x, inst.p);
  v.ok = v.residual <= epsilon + tol;
  return v;
}

}  // namespace fpcc
