#pragma once

#include "fpcc/instance.hpp"
#include "fpcc/transcript.hpp"

namespace fpcc {

inline constexpr int kDefaultBitsPerCoord = 16;

// Totality condition (lambda + 1) * alpha <= 2 * epsilon.
bool total_regime_check(double lambda_combined, double alpha, double epsilon);

// Acceptance slack subtracted from B's test threshold so that the declared
// epsilon stays honest under quantized messages.
double grid_protocol_slack(const BrouwerInstance& inst, int bits_per_coord);

struct GridProtocolResult {
  bool accepted = false;
  Vec solution;  // the accepted grid point when accepted
  long long candidates_tried = 0;
  Transcript transcript;
};

// Lockstep sweep over the alpha-grid. For each candidate z, A sends a
// quantized message (f_A(z) for Comp/Mean, her half-residual for Concat)
// and B answers one accept bit after testing against epsilon - slack.
// Termination is guaranteed whenever
//   (combined_lambda + 1) * alpha <= 2 * (epsilon - slack).
// Exhausting the grid is reported as a first-class failure result, never
// an exception.
GridProtocolResult run_grid_protocol(const BrouwerInstance& inst, double alpha,
                                     int bits_per_coord = kDefaultBitsPerCoord);

struct Verification {
  bool ok = false;
  double residual = 0.0;
};

// Referee check: recompute the exact residual with both inputs in hand.
Verification verify_solution(const BrouwerInstance& inst,
                             std::span<const double> x, double epsilon,
                             double tol = kDefaultTol);

}  // namespace fpcc
