#pragma once

#include "fpcc/instance.hpp"

namespace fpcc {

enum class ReductionKind {
  ConcatToMean,
  MeanToComp,
  CompToConcat,
  LocalToComp,
};

const char* to_string(ReductionKind k);

// ---- target-side gadget functions -----------------------------------------
// Each wrapper exposes its inner function so instances built from
// reductions can be serialized structurally.

// g_A(x) = (f_A(x), x_2) for the Concat -> Mean reduction.
class ConcatMeanGA final : public Func {
 public:
  explicit ConcatMeanGA(FuncPtr inner);
  int in_dim() const override { return n_; }
  int out_dim() const override { return n_; }
  Vec eval(std::span<const double> x) const override;
  double lipschitz_bound(NormKind k) const override;
  const FuncPtr& inner() const { return inner_; }

 private:
  FuncPtr inner_;
  int n_;
};

// g_B(x) = (x_1, f_B(x)) for the Concat -> Mean reduction.
class ConcatMeanGB final : public Func {
 public:
  explicit ConcatMeanGB(FuncPtr inner);
  int in_dim() const override { return n_; }
  int out_dim() const override { return n_; }
  Vec eval(std::span<const double> x) const override;
  double lipschitz_bound(NormKind k) const override;
  const FuncPtr& inner() const { return inner_; }

 private:
  FuncPtr inner_;
  int n_;
};

// g_A(x) = (f_A(x)/2, x) for the Mean -> Comp reduction.
class MeanCompGA final : public Func {
 public:
  explicit MeanCompGA(FuncPtr inner);
  int in_dim() const override { return n_; }
  int out_dim() const override { return 2 * n_; }
  Vec eval(std::span<const double> x) const override;
  double lipschitz_bound(NormKind k) const override;
  const FuncPtr& inner() const { return inner_; }

 private:
  FuncPtr inner_;
  int n_;
};

// g_B(x_1, x_2) = x_1 + f_B(x_2)/2 for the Mean -> Comp reduction. On
// arbitrary inputs the formula can reach 1.5; on range(g_A) it stays in
// the unit box, and the composition never leaves it.
class MeanCompGB final : public Func {
 public:
  explicit MeanCompGB(FuncPtr inner);
  int in_dim() const override { return 2 * n_; }
  int out_dim() const override { return n_; }
  Vec eval(std::span<const double> x) const override;
  double lipschitz_bound(NormKind k) const override;
  const FuncPtr& inner() const { return inner_; }

 private:
  FuncPtr inner_;
  int n_;
};

// g_A(a, x_1, b, x_2) = (a, f_A(x_2)) for the Comp -> Concat reduction.
// Block layout of the 2(n+m)-dimensional input: a (n), x_1 (m), b (m),
// x_2 (n).
class CompConcatGA final : public Func {
 public:
  explicit CompConcatGA(FuncPtr inner);  // inner: n -> m
  int in_dim() const override { return 2 * (n_ + m_); }
  int out_dim() const override { return n_ + m_; }
  Vec eval(std::span<const double> x) const override;
  double lipschitz_bound(NormKind k) const override;
  const FuncPtr& inner() const { return inner_; }

 private:
  FuncPtr inner_;
  int n_, m_;
};

// g_B(a, x_1, b, x_2) = (b, f_B(x_1)) for the Comp -> Concat reduction.
class CompConcatGB final : public Func {
 public:
  CompConcatGB(FuncPtr inner, int n);  // inner: m -> n
  int in_dim() const override { return 2 * (n_ + m_); }
  int out_dim() const override { return n_ + m_; }
  Vec eval(std::span<const double> x) const override;
  double lipschitz_bound(NormKind k) const override;
  const FuncPtr& inner() const { return inner_; }

 private:
  FuncPtr inner_;
  int n_, m_;
};

// f_A(z) = (f'(x|L(z), b_1, z), ..., f'(x|L(z), b_{2^r}, z), z) for the
// Local -> Comp reduction.
class LocalCompFA final : public Func {
 public:
  explicit LocalCompFA(LocalFamilyPtr family);
  int in_dim() const override { return fam_->n; }
  int out_dim() const override { return fam_->n * (blocks_ + 1); }
  Vec eval(std::span<const double> z) const override;
  double lipschitz_bound(NormKind k) const override;
  const LocalFamilyPtr& family() const { return fam_; }

 private:
  LocalFamilyPtr fam_;
  int blocks_;  // 2^r
};

// Selector g_B on the set C: recover z from the final block, compute
// L(z), and return the block indexed by y|L(z). The McShane extension
// off C is never evaluated by the composition since range(f_A) lies in C.
class LocalCompFB final : public Func {
 public:
  explicit LocalCompFB(LocalFamilyPtr family);
  int in_dim() const override { return fam_->n * (blocks_ + 1); }
  int out_dim() const override { return fam_->n; }
  Vec eval(std::span<const double> w) const override;
  double lipschitz_bound(NormKind k) const override;
  const LocalFamilyPtr& family() const { return fam_; }

 private:
  LocalFamilyPtr fam_;
  int blocks_;
};

// ---- reduction records -----------------------------------------------------

// A constructed target instance plus the bookkeeping needed to map a
// target solution back to a source solution. A target solved at its
// declared epsilon back-maps to a source solution with residual at most
// epsilon_scale * target.epsilon. Target lambda fields carry the lemma's
// claimed bounds applied to the certified constants of the source
// functions (the certified bound absorbs the sqrt(m) Euclidean extension
// gap).
struct ReductionRecord {
  ReductionKind kind = ReductionKind::MeanToComp;
  BrouwerInstance source;
  BrouwerInstance target;
  double epsilon_scale = 1.0;
  double c = 0.0;  // CompToConcat aspect-ratio constant

  Vec backmap(std::span<const double> target_solution) const;
  double source_epsilon(double target_eps) const {
    return epsilon_scale * target_eps;
  }
};

ReductionRecord concat_to_mean(const BrouwerInstance& src);
ReductionRecord mean_to_comp(const BrouwerInstance& src);
// c must be at least max(m/n, n/m).
ReductionRecord comp_to_concat(const BrouwerInstance& src, double c);
// Materializes 2^r blocks; refuses r > 12.
ReductionRecord local_to_comp(const BrouwerInstance& src);

// ---- imitation game (Comp -> Nash) -----------------------------------------

// Bimatrix game on the alpha-grids with u_A(x,y) = -||f_A(x) - y||_2^2 and
// u_B(x,y) = -||x - f_B(y)||_2^2 (normalized Euclidean norm). Utilities
// are recomputed on demand, never tabulated to disk.
struct ImitationGame {
  GridSpec grid_x, grid_y;
  FuncPtr f_a, f_b;
  double alpha = 0.0;

  double utility_a(std::span<const double> x, std::span<const double> y) const;
  double utility_b(std::span<const double> x, std::span<const double> y) const;
  long long profile_count() const {
    return grid_x.point_count() * grid_y.point_count();
  }
};

// pre: src is a Comp instance in the Euclidean norm; the grids must stay
// at desk scale (<= 1e6 profiles).
ImitationGame comp_to_imitation_game(const BrouwerInstance& src, double alpha);

struct NashProfile {
  long long ix = 0, iy = 0;
  Vec x, y;
  double regret = 0.0;
};

// Exhaustive scan for pure profiles whose best-response regret is at most
// eps_regret, sorted by profile index.
std::vector<NashProfile> enumerate_approx_pure_nash(const ImitationGame& game,
                                                    double eps_regret);

Vec nash_profile_to_point(const NashProfile& profile);

}  // namespace fpcc
