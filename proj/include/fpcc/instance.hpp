#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "fpcc/functions.hpp"

namespace fpcc {

enum class BrouwerKind { Comp, Concat, Mean, Local };

const char* to_string(BrouwerKind k);

// A collection of functions f_{x,y} whose value at z depends on the
// players' bit strings only through the r coordinates selected by the
// public map L(z):  f_{x,y}(z) = fprime[x|L(z), y|L(z)](z).
struct LocalFamily {
  // Public selector z -> r-subset of [N] (sorted index order).
  struct Selector {
    enum class Kind { Constant, CellHash };
    Kind kind = Kind::Constant;
    std::vector<int> constant;  // sorted r-subset, Kind::Constant
    int cells_per_axis = 1;     // Kind::CellHash
    std::uint64_t seed = 0;     // Kind::CellHash
  };

  int N = 0, n = 0, r = 0;
  double lambda = 0.0;
  NormKind norm;
  Selector L;
  // 2^{2r} functions [0,1]^n -> [0,1]^n indexed by (xbits << r) | ybits,
  // bit j of a restriction = the selected coordinate with the j-th
  // smallest index.
  std::vector<AnchorFunction> fprime;
  std::vector<std::uint8_t> x, y;  // bit strings of length N

  void validate() const;  // throws std::invalid_argument
  std::vector<int> select(std::span<const double> z) const;  // L(z)
  static std::uint32_t restrict_bits(const std::vector<std::uint8_t>& s,
                                     const std::vector<int>& idx);
  // f_{x,y}(z) = fprime[x|L(z), y|L(z)](z), evaluated exactly as written.
  Vec eval(std::span<const double> z) const;
};

using LocalFamilyPtr = std::shared_ptr<const LocalFamily>;

LocalFamily random_local_family(std::uint64_t seed, int N, int n, int r,
                                double lambda, NormKind norm,
                                int anchor_count,
                                LocalFamily::Selector::Kind selector_kind);

// A two-party fixed-point problem instance. The lambda fields are the
// declared certificates (for reduction targets, the lemma's claimed
// bounds); f_a->lipschitz_bound() carries the tighter structural bound.
struct BrouwerInstance {
  BrouwerKind kind = BrouwerKind::Comp;
  NormKind p;
  double epsilon = 0.0;
  double lambda_a = 0.0, lambda_b = 0.0;
  FuncPtr f_a, f_b;      // unused for Local
  LocalFamilyPtr local;  // Local only

  static BrouwerInstance make(BrouwerKind kind, NormKind p, double epsilon,
                              double lambda_a, double lambda_b, FuncPtr f_a,
                              FuncPtr f_b);
  static BrouwerInstance make_local(NormKind p, double epsilon,
                                    LocalFamilyPtr family);

  int n() const;  // solution dimension
  // The function whose approximate fixed point is sought.
  FuncPtr target() const;
  // Certified Lipschitz bound of target() (props for Comp/Concat/Mean).
  double combined_lambda_bound() const;
};

BrouwerInstance random_instance(std::uint64_t seed, BrouwerKind kind, int n,
                                int m, NormKind p, double epsilon,
                                double lambda_a, double lambda_b,
                                int anchor_count);

}  // namespace fpcc
