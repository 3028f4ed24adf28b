#include "fpcc/functions.hpp"

#include <cmath>
#include <stdexcept>

#include "fpcc/kernels.hpp"

namespace fpcc {

namespace {

void check_norm_supported(NormKind k) {
  if (!k.is_max() && k.p != 2.0)
    throw std::invalid_argument(
        "AnchorFunction: only the max norm and the Euclidean norm have an "
        "extension rule");
}

}  // namespace

AnchorFunction AnchorFunction::create(int n, int m,
                                      std::vector<Anchor> anchors,
                                      double lambda, NormKind norm,
                                      double tol) {
  if (n < 1 || m < 1)
    throw std::invalid_argument("AnchorFunction: dims must be positive");
  if (anchors.empty())
    throw std::invalid_argument("AnchorFunction: at least one anchor");
  if (lambda < 0.0)
    throw std::invalid_argument("AnchorFunction: lambda must be >= 0");
  check_norm_supported(norm);
  for (const auto& a : anchors) {
    if (int(a.x.size()) != n || int(a.v.size()) != m)
      throw std::invalid_argument("AnchorFunction: anchor dimension mismatch");
    if (!in_unit_box(a.x) || !in_unit_box(a.v))
      throw std::invalid_argument("AnchorFunction: anchor outside unit box");
  }
  for (std::size_t s = 0; s < anchors.size(); ++s)
    for (std::size_t t = s + 1; t < anchors.size(); ++t) {
      const double dx = normalized_dist(anchors[s].x, anchors[t].x, norm);
      const double dv = normalized_dist(anchors[s].v, anchors[t].v, norm);
      if (dv > lambda * dx + tol)
        throw std::invalid_argument(
            "AnchorFunction: anchor pair violates the Lipschitz bound");
    }

  AnchorFunction f;
  f.n_ = n;
  f.m_ = m;
  f.lambda_ = lambda;
  f.norm_ = norm;
  f.vals_by_coord_.resize(std::size_t(m) * anchors.size());
  for (int i = 0; i < m; ++i)
    for (std::size_t s = 0; s < anchors.size(); ++s)
      f.vals_by_coord_[std::size_t(i) * anchors.size() + s] = anchors[s].v[i];
  f.anchors_ = std::move(anchors);
  return f;
}

double AnchorFunction::coord_slope() const {
  return norm_.is_max() ? lambda_ : lambda_ * std::sqrt(double(m_));
}

double AnchorFunction::lipschitz_bound(NormKind k) const {
  if (!(k == norm_))
    throw std::invalid_argument(
        "AnchorFunction: queried norm differs from the declared norm");
  // per-coordinate slope bounds every normalized vector norm
  return coord_slope();
}

Vec AnchorFunction::eval(std::span<const double> x) const {
  if (int(x.size()) != n_)
    throw std::invalid_argument("AnchorFunction::eval: dimension mismatch");
  const std::size_t a = anchors_.size();
  std::vector<double> dist(a);
  for (std::size_t s = 0; s < a; ++s)
    dist[s] = normalized_dist(x, anchors_[s].x, norm_);
  const double slope = coord_slope();
  Vec out(m_);
  for (int i = 0; i < m_; ++i)
    out[i] = clamp01(kernels::min_plus_scaled(
        vals_by_coord_.data() + std::size_t(i) * a, dist.data(), a, slope));
  return out;
}

std::vector<Anchor> lipschitz_regularize(const std::vector<Anchor>& raw,
                                         double lambda, NormKind norm) {
  if (raw.empty())
    throw std::invalid_argument("lipschitz_regularize: empty input");
  const std::size_t a = raw.size();
  const std::size_t m = raw[0].v.size();
  std::vector<Anchor> out = raw;
  std::vector<double> dist(a);
  for (std::size_t s = 0; s < a; ++s) {
    for (std::size_t t = 0; t < a; ++t)
      dist[t] = normalized_dist(raw[s].x, raw[t].x, norm);
    for (std::size_t i = 0; i < m; ++i) {
      double best = raw[s].v[i];
      for (std::size_t t = 0; t < a; ++t) {
        const double c = raw[t].v[i] + lambda * dist[t];
        if (c < best) best = c;
      }
      out[s].v[i] = best;
    }
  }
  return out;
}

AnchorFunction regularized_function(int n, int m, std::vector<Anchor> raw,
                                    double lambda, NormKind norm) {
  return AnchorFunction::create(n, m, lipschitz_regularize(raw, lambda, norm),
                                lambda, norm);
}

AnchorFunction random_lipschitz(std::uint64_t seed, int n, int m,
                                double lambda, NormKind norm,
                                int anchor_count) {
  if (anchor_count < 1)
    throw std::invalid_argument("random_lipschitz: anchor_count must be >= 1");
  Rng rng(seed);
  std::vector<Anchor> raw(anchor_count);
  for (auto& a : raw) {
    a.x.resize(n);
    a.v.resize(m);
    for (double& c : a.x) c = rng.next_unit();
    for (double& c : a.v) c = rng.next_unit();
  }
  return regularized_function(n, m, std::move(raw), lambda, norm);
}

CombinedFunction CombinedFunction::create(CombineKind kind, FuncPtr left,
                                          FuncPtr right) {
  if (!left || !right)
    throw std::invalid_argument("CombinedFunction: null operand");
  CombinedFunction c;
  c.kind_ = kind;
  switch (kind) {
    case CombineKind::Compose:
      if (left->out_dim() != right->in_dim())
        throw std::invalid_argument("Compose: inner dims must match");
      c.in_ = left->in_dim();
      c.out_ = right->out_dim();
      break;
    case CombineKind::Concat:
      if (left->in_dim() != right->in_dim())
        throw std::invalid_argument("Concat: input dims must match");
      if (left->out_dim() + right->out_dim() != left->in_dim())
        throw std::invalid_argument("Concat: output dims must sum to input");
      c.in_ = left->in_dim();
      c.out_ = c.in_;
      break;
    case CombineKind::Mean:
      if (left->in_dim() != right->in_dim() ||
          left->out_dim() != right->out_dim() ||
          left->in_dim() != left->out_dim())
        throw std::invalid_argument("Mean: dims must agree");
      c.in_ = left->in_dim();
      c.out_ = c.in_;
      break;
  }
  c.left_ = std::move(left);
  c.right_ = std::move(right);
  return c;
}

Vec CombinedFunction::eval(std::span<const double> x) const {
  switch (kind_) {
    case CombineKind::Compose:
      return right_->eval(left_->eval(x));
    case CombineKind::Concat: {
      Vec out = left_->eval(x);
      Vec r = right_->eval(x);
      out.insert(out.end(), r.begin(), r.end());
      return out;
    }
    case CombineKind::Mean: {
      Vec out = left_->eval(x);
      Vec r = right_->eval(x);
      for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = 0.5 * (out[i] + r[i]);
      return out;
    }
  }
  throw std::logic_error("unreachable");
}

double CombinedFunction::lipschitz_bound(NormKind k) const {
  const double la = left_->lipschitz_bound(k);
  const double lb = right_->lipschitz_bound(k);
  switch (kind_) {
    case CombineKind::Compose:
      return la * lb;
    case CombineKind::Concat: {
      const double pair[2] = {la, lb};
      return normalized_norm(pair, k);
    }
    case CombineKind::Mean:
      return 0.5 * (la + lb);
  }
  throw std::logic_error("unreachable");
}

FuncPtr make_compose(FuncPtr left, FuncPtr right) {
  return std::make_shared<CombinedFunction>(CombinedFunction::create(
      CombineKind::Compose, std::move(left), std::move(right)));
}

FuncPtr make_concat(FuncPtr left, FuncPtr right) {
  return std::make_shared<CombinedFunction>(CombinedFunction::create(
      CombineKind::Concat, std::move(left), std::move(right)));
}

FuncPtr make_mean(FuncPtr left, FuncPtr right) {
  return std::make_shared<CombinedFunction>(CombinedFunction::create(
      CombineKind::Mean, std::move(left), std::move(right)));
}

FuncPtr make_identity(int n) {
  return std::make_shared<LambdaFunc>(
      n, n, [](std::span<const double> x) { return Vec(x.begin(), x.end()); },
      [](NormKind) { return 1.0; }, "identity");
}

FuncPtr make_constant(int n, Vec value) {
  const int m = int(value.size());
  return std::make_shared<LambdaFunc>(
      n, m, [value](std::span<const double>) { return value; },
      [](NormKind) { return 0.0; }, "constant");
}

double lipschitz_estimate(const Func& f, NormKind norm, int sample_budget,
                          std::uint64_t seed) {
  if (sample_budget < 2)
    throw std::invalid_argument("lipschitz_estimate: budget must be >= 2");
  Rng rng(seed);
  const int n = f.in_dim();
  std::vector<Vec> xs(sample_budget), ys(sample_budget);
  for (int i = 0; i < sample_budget; ++i) {
    xs[i].resize(n);
    for (double& c : xs[i]) c = rng.next_unit();
    ys[i] = f.eval(xs[i]);
  }
  double best = 0.0;
  auto consider = [&](const Vec& x0, const Vec& y0, const Vec& x1,
                      const Vec& y1) {
    const double dx = normalized_dist(x0, x1, norm);
    if (dx <= 0.0) return;
    const double dy = normalized_dist(y0, y1, norm);
    const double r = dy / dx;
    if (r > best) best = r;
  };
  for (int i = 0; i < sample_budget; ++i)
    for (int j = i + 1; j < sample_budget; ++j)
      consider(xs[i], ys[i], xs[j], ys[j]);
  // local pairs: the sup is often attained at short range
  for (int i = 0; i < sample_budget; ++i) {
    Vec z = xs[i];
    const int axis = rng.next_int(0, n - 1);
    const double step = (rng.next_unit() - 0.5) * 0.02;
    z[axis] = clamp01(z[axis] + step);
    consider(xs[i], ys[i], z, f.eval(z));
  }
  return best;
}

}  // namespace fpcc
