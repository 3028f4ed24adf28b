#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "fpcc/numerics.hpp"

namespace fpcc {

// An evaluable map [0,1]^n -> [0,1]^m.
class Func {
 public:
  virtual ~Func() = default;
  virtual int in_dim() const = 0;
  virtual int out_dim() const = 0;
  virtual Vec eval(std::span<const double> x) const = 0;
  // Certified upper bound on the Lipschitz constant in the given norm.
  virtual double lipschitz_bound(NormKind k) const = 0;
};

using FuncPtr = std::shared_ptr<const Func>;

struct Anchor {
  Vec x;  // in [0,1]^n
  Vec v;  // in [0,1]^m
};

// A lambda-Lipschitz function represented by finitely many anchor points;
// evaluation extends them to the whole box with a per-coordinate McShane
// formula, clamped to [0,1]:
//
//   F(x)_i = clamp( min over anchors s of v_s[i] + slope * dist(x, s) )
//
// dist is the declared normalized norm. For the max norm the slope is
// lambda and the extension is an exact lambda-Lipschitz interpolant. For
// the Euclidean norm the slope is lambda*sqrt(m): the extension still
// agrees with every anchor but its vector Lipschitz constant may grow to
// lambda*sqrt(m) (the exact Kirszbraun extension is non-constructive and
// out of scope; callers fold the sqrt(m) gap into their tolerances via
// lipschitz_bound()).
class AnchorFunction final : public Func {
 public:
  // Validates dims, box membership, and the pairwise Lipschitz invariant
  // ||v_s - v_t|| <= lambda * ||s - t|| + tol. Throws std::invalid_argument.
  static AnchorFunction create(int n, int m, std::vector<Anchor> anchors,
                               double lambda, NormKind norm,
                               double tol = kDefaultTol);

  int in_dim() const override { return n_; }
  int out_dim() const override { return m_; }
  Vec eval(std::span<const double> x) const override;
  double lipschitz_bound(NormKind k) const override;

  double lambda() const { return lambda_; }
  NormKind norm() const { return norm_; }
  const std::vector<Anchor>& anchors() const { return anchors_; }
  // Per-output-coordinate McShane slope (lambda, or lambda*sqrt(m) for l2).
  double coord_slope() const;

 private:
  AnchorFunction() = default;
  int n_ = 0, m_ = 0;
  std::vector<Anchor> anchors_;
  double lambda_ = 0.0;
  NormKind norm_;
  std::vector<double> vals_by_coord_;  // [i * anchors + s]
};

// Pointwise McShane lower-regularization: v_s[i] <- min_t raw_t[i] +
// lambda * dist(s, t). The result always satisfies the pairwise Lipschitz
// invariant (each output coordinate becomes lambda-Lipschitz on the
// anchor set), and raw data that was already feasible is left unchanged.
std::vector<Anchor> lipschitz_regularize(const std::vector<Anchor>& raw,
                                         double lambda, NormKind norm);

// Regularizes raw data and wraps it into a valid AnchorFunction.
AnchorFunction regularized_function(int n, int m, std::vector<Anchor> raw,
                                    double lambda, NormKind norm);

// Deterministic in seed: uniform anchors and values, then regularization.
AnchorFunction random_lipschitz(std::uint64_t seed, int n, int m,
                                double lambda, NormKind norm,
                                int anchor_count);

enum class CombineKind { Compose, Concat, Mean };

// f_Comp(x) = right(left(x));  f_Concat(x) = (left(x), right(x));
// f_Mean(x) = (left(x) + right(x)) / 2.
class CombinedFunction final : public Func {
 public:
  static CombinedFunction create(CombineKind kind, FuncPtr left,
                                 FuncPtr right);
  int in_dim() const override { return in_; }
  int out_dim() const override { return out_; }
  Vec eval(std::span<const double> x) const override;
  double lipschitz_bound(NormKind k) const override;
  CombineKind kind() const { return kind_; }
  const FuncPtr& left() const { return left_; }
  const FuncPtr& right() const { return right_; }

 private:
  CombinedFunction() = default;
  CombineKind kind_ = CombineKind::Compose;
  FuncPtr left_, right_;
  int in_ = 0, out_ = 0;
};

FuncPtr make_compose(FuncPtr left, FuncPtr right);
FuncPtr make_concat(FuncPtr left, FuncPtr right);
FuncPtr make_mean(FuncPtr left, FuncPtr right);

// Ad-hoc evaluable map with a caller-supplied Lipschitz certificate.
class LambdaFunc final : public Func {
 public:
  LambdaFunc(int n, int m, std::function<Vec(std::span<const double>)> f,
             std::function<double(NormKind)> bound, std::string tag = "")
      : n_(n), m_(m), f_(std::move(f)), bound_(std::move(bound)),
        tag_(std::move(tag)) {}
  int in_dim() const override { return n_; }
  int out_dim() const override { return m_; }
  Vec eval(std::span<const double> x) const override { return f_(x); }
  double lipschitz_bound(NormKind k) const override { return bound_(k); }
  const std::string& tag() const { return tag_; }

 private:
  int n_, m_;
  std::function<Vec(std::span<const double>)> f_;
  std::function<double(NormKind)> bound_;
  std::string tag_;
};

FuncPtr make_identity(int n);
FuncPtr make_constant(int n, Vec value);

// Max over sampled pairs of ||f(x)-f(y)|| / ||x-y||; a lower bound on the
// true Lipschitz constant. Deterministic in seed. sample_budget >= 2 points
// are drawn (plus local perturbation pairs) and all pairs are compared.
double lipschitz_estimate(const Func& f, NormKind norm, int sample_budget,
                          std::uint64_t seed);

}  // namespace fpcc
