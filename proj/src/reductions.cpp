#include "fpcc/reductions.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fpcc/kernels.hpp"

namespace fpcc {

const char* to_string(ReductionKind k) {
  switch (k) {
    case ReductionKind::ConcatToMean: return "concat_to_mean";
    case ReductionKind::MeanToComp: return "mean_to_comp";
    case ReductionKind::CompToConcat: return "comp_to_concat";
    case ReductionKind::LocalToComp: return "local_to_comp";
  }
  return "?";
}

namespace {

// ||x_i - y_i||_p <= ratio^(1/p) ||x - y||_p for a block of 1/ratio of the
// coordinates; free for the max norm.
double extract_factor(double ratio, NormKind k) {
  return k.is_max() ? 1.0 : std::pow(ratio, 1.0 / k.p);
}

}  // namespace

// ---- ConcatMeanGA / GB ------------------------------------------------------

ConcatMeanGA::ConcatMeanGA(FuncPtr inner) : inner_(std::move(inner)) {
  n_ = inner_->in_dim();
  if (n_ % 2 != 0 || inner_->out_dim() != n_ / 2)
    throw std::invalid_argument("ConcatMeanGA: inner must be n -> n/2");
}

Vec ConcatMeanGA::eval(std::span<const double> x) const {
  Vec out = inner_->eval(x);
  out.insert(out.end(), x.begin() + n_ / 2, x.end());
  return out;
}

double ConcatMeanGA::lipschitz_bound(NormKind k) const {
  return inner_->lipschitz_bound(k) + 1.0;
}

ConcatMeanGB::ConcatMeanGB(FuncPtr inner) : inner_(std::move(inner)) {
  n_ = inner_->in_dim();
  if (n_ % 2 != 0 || inner_->out_dim() != n_ / 2)
    throw std::invalid_argument("ConcatMeanGB: inner must be n -> n/2");
}

Vec ConcatMeanGB::eval(std::span<const double> x) const {
  Vec out(x.begin(), x.begin() + n_ / 2);
  Vec r = inner_->eval(x);
  out.insert(out.end(), r.begin(), r.end());
  return out;
}

double ConcatMeanGB::lipschitz_bound(NormKind k) const {
  return inner_->lipschitz_bound(k) + 1.0;
}

// ---- MeanCompGA / GB --------------------------------------------------------

MeanCompGA::MeanCompGA(FuncPtr inner) : inner_(std::move(inner)) {
  n_ = inner_->in_dim();
  if (inner_->out_dim() != n_)
    throw std::invalid_argument("MeanCompGA: inner must be n -> n");
}

Vec MeanCompGA::eval(std::span<const double> x) const {
  Vec out = inner_->eval(x);
  for (double& v : out) v *= 0.5;
  out.insert(out.end(), x.begin(), x.end());
  return out;
}

double MeanCompGA::lipschitz_bound(NormKind k) const {
  return 0.5 * inner_->lipschitz_bound(k) + 1.0;
}

MeanCompGB::MeanCompGB(FuncPtr inner) : inner_(std::move(inner)) {
  n_ = inner_->in_dim();
  if (inner_->out_dim() != n_)
    throw std::invalid_argument("MeanCompGB: inner must be n -> n");
}

Vec MeanCompGB::eval(std::span<const double> x) const {
  if (int(x.size()) != 2 * n_)
    throw std::invalid_argument("MeanCompGB: dimension mismatch");
  Vec out = inner_->eval(x.subspan(std::size_t(n_)));
  for (int i = 0; i < n_; ++i)
    out[std::size_t(i)] = x[std::size_t(i)] + 0.5 * out[std::size_t(i)];
  return out;
}

double MeanCompGB::lipschitz_bound(NormKind k) const {
  return extract_factor(2.0, k) * (1.0 + 0.5 * inner_->lipschitz_bound(k));
}

// ---- CompConcatGA / GB ------------------------------------------------------

CompConcatGA::CompConcatGA(FuncPtr inner) : inner_(std::move(inner)) {
  n_ = inner_->in_dim();
  m_ = inner_->out_dim();
}

Vec CompConcatGA::eval(std::span<const double> x) const {
  if (int(x.size()) != in_dim())
    throw std::invalid_argument("CompConcatGA: dimension mismatch");
  Vec out(x.begin(), x.begin() + n_);  // a
  Vec fa = inner_->eval(x.subspan(std::size_t(n_ + 2 * m_)));  // f_A(x_2)
  out.insert(out.end(), fa.begin(), fa.end());
  return out;
}

double CompConcatGA::lipschitz_bound(NormKind k) const {
  const double ratio = 2.0 * double(n_ + m_) / double(n_);
  return extract_factor(ratio, k) * (1.0 + inner_->lipschitz_bound(k));
}

CompConcatGB::CompConcatGB(FuncPtr inner, int n)
    : inner_(std::move(inner)), n_(n) {
  m_ = inner_->in_dim();
  if (inner_->out_dim() != n_)
    throw std::invalid_argument("CompConcatGB: inner must be m -> n");
}

Vec CompConcatGB::eval(std::span<const double> x) const {
  if (int(x.size()) != in_dim())
    throw std::invalid_argument("CompConcatGB: dimension mismatch");
  Vec out(x.begin() + n_ + m_, x.begin() + n_ + 2 * m_);  // b
  Vec fb = inner_->eval(x.subspan(std::size_t(n_), std::size_t(m_)));
  out.insert(out.end(), fb.begin(), fb.end());
  return out;
}

double CompConcatGB::lipschitz_bound(NormKind k) const {
  const double ratio = 2.0 * double(n_ + m_) / double(m_);
  return extract_factor(ratio, k) * (1.0 + inner_->lipschitz_bound(k));
}

// ---- LocalCompFA / FB -------------------------------------------------------

LocalCompFA::LocalCompFA(LocalFamilyPtr family) : fam_(std::move(family)) {
  fam_->validate();
  blocks_ = 1 << fam_->r;
}

Vec LocalCompFA::eval(std::span<const double> z) const {
  const std::vector<int> sel = fam_->select(z);
  const std::uint32_t xb = LocalFamily::restrict_bits(fam_->x, sel);
  Vec out;
  out.reserve(std::size_t(out_dim()));
  for (int i = 0; i < blocks_; ++i) {
    const Vec w =
        fam_->fprime[(std::size_t(xb) << fam_->r) | std::uint32_t(i)].eval(z);
    out.insert(out.end(), w.begin(), w.end());
  }
  out.insert(out.end(), z.begin(), z.end());
  return out;
}

double LocalCompFA::lipschitz_bound(NormKind k) const {
  double member = 0.0;
  for (const auto& f : fam_->fprime)
    member = std::max(member, f.lipschitz_bound(k));
  if (k.is_max()) return std::max(member, 1.0);
  const double blocks = double(blocks_);
  return std::pow((blocks * std::pow(member, k.p) + 1.0) / (blocks + 1.0),
                  1.0 / k.p);
}

LocalCompFB::LocalCompFB(LocalFamilyPtr family) : fam_(std::move(family)) {
  fam_->validate();
  blocks_ = 1 << fam_->r;
}

Vec LocalCompFB::eval(std::span<const double> w) const {
  if (int(w.size()) != in_dim())
    throw std::invalid_argument("LocalCompFB: dimension mismatch");
  const int n = fam_->n;
  const auto z = w.subspan(std::size_t(blocks_) * std::size_t(n));
  const std::vector<int> sel = fam_->select(z);
  const std::uint32_t yb = LocalFamily::restrict_bits(fam_->y, sel);
  const auto block = w.subspan(std::size_t(yb) * std::size_t(n),
                               std::size_t(n));
  return Vec(block.begin(), block.end());
}

double LocalCompFB::lipschitz_bound(NormKind k) const {
  double member = 0.0;
  for (const auto& f : fam_->fprime)
    member = std::max(member, f.lipschitz_bound(k));
  // holds on the set C actually reached by the composition
  return extract_factor(double(blocks_ + 1), k) * (member + 1.0);
}

// ---- reduction constructors -------------------------------------------------

Vec ReductionRecord::backmap(std::span<const double> target_solution) const {
  if (int(target_solution.size()) != target.n())
    throw std::invalid_argument("backmap: dimension mismatch");
  switch (kind) {
    case ReductionKind::ConcatToMean:
    case ReductionKind::MeanToComp:
    case ReductionKind::LocalToComp:
      return Vec(target_solution.begin(), target_solution.end());
    case ReductionKind::CompToConcat: {
      const int n = source.n();
      const int m = source.f_a->out_dim();
      const auto x2 = target_solution.subspan(std::size_t(n + 2 * m));
      return Vec(x2.begin(), x2.end());
    }
  }
  throw std::logic_error("unreachable");
}

ReductionRecord concat_to_mean(const BrouwerInstance& src) {
  if (src.kind != BrouwerKind::Concat)
    throw std::invalid_argument("concat_to_mean: source must be Concat");
  if (src.n() % 2 != 0)
    throw std::invalid_argument("concat_to_mean: n must be even");
  ReductionRecord rec;
  rec.kind = ReductionKind::ConcatToMean;
  rec.source = src;
  rec.epsilon_scale = 2.0;
  const double la = src.f_a->lipschitz_bound(src.p) + 1.0;
  const double lb = src.f_b->lipschitz_bound(src.p) + 1.0;
  rec.target = BrouwerInstance::make(
      BrouwerKind::Mean, src.p, src.epsilon / 2.0, la, lb,
      std::make_shared<ConcatMeanGA>(src.f_a),
      std::make_shared<ConcatMeanGB>(src.f_b));
  return rec;
}

ReductionRecord mean_to_comp(const BrouwerInstance& src) {
  if (src.kind != BrouwerKind::Mean)
    throw std::invalid_argument("mean_to_comp: source must be Mean");
  ReductionRecord rec;
  rec.kind = ReductionKind::MeanToComp;
  rec.source = src;
  rec.epsilon_scale = 1.0;  // pointwise identity f_Mean = g_Comp
  const double la = 0.5 * src.f_a->lipschitz_bound(src.p) + 1.0;
  const double lb = src.f_b->lipschitz_bound(src.p) + 2.0;
  rec.target = BrouwerInstance::make(
      BrouwerKind::Comp, src.p, src.epsilon, la, lb,
      std::make_shared<MeanCompGA>(src.f_a),
      std::make_shared<MeanCompGB>(src.f_b));
  return rec;
}

ReductionRecord comp_to_concat(const BrouwerInstance& src, double c) {
  if (src.kind != BrouwerKind::Comp)
    throw std::invalid_argument("comp_to_concat: source must be Comp");
  const double n = src.n();
  const double m = src.f_a->out_dim();
  if (c < std::max(m / n, n / m))
    throw std::invalid_argument("comp_to_concat: c must be >= max(m/n, n/m)");
  ReductionRecord rec;
  rec.kind = ReductionKind::CompToConcat;
  rec.source = src;
  rec.c = c;
  const double lb_true = src.f_b->lipschitz_bound(src.p);
  rec.epsilon_scale = 2.0 * (1.0 + c) * (lb_true + 1.0);
  const double la = 4.0 * (src.f_a->lipschitz_bound(src.p) + 1.0);
  const double lb = 4.0 * (lb_true + 1.0);
  rec.target = BrouwerInstance::make(
      BrouwerKind::Concat, src.p, src.epsilon / rec.epsilon_scale, la, lb,
      std::make_shared<CompConcatGA>(src.f_a),
      std::make_shared<CompConcatGB>(src.f_b, src.n()));
  return rec;
}

ReductionRecord local_to_comp(const BrouwerInstance& src) {
  if (src.kind != BrouwerKind::Local)
    throw std::invalid_argument("local_to_comp: source must be Local");
  const LocalFamilyPtr fam = src.local;
  if (fam->r > 12)
    throw std::invalid_argument(
        "local_to_comp: r > 12 would materialize too many blocks");
  ReductionRecord rec;
  rec.kind = ReductionKind::LocalToComp;
  rec.source = src;
  rec.epsilon_scale = 1.0;  // the composition equals f_{x,y} exactly
  auto fa = std::make_shared<LocalCompFA>(fam);
  auto fb = std::make_shared<LocalCompFB>(fam);
  const double la = std::max(fam->lambda, 1.0);
  const double lb = fb->lipschitz_bound(src.p);
  rec.target = BrouwerInstance::make(BrouwerKind::Comp, src.p, src.epsilon,
                                     la, lb, std::move(fa), std::move(fb));
  return rec;
}

// ---- imitation game ---------------------------------------------------------

namespace {

double neg_sq_dist(std::span<const double> a, std::span<const double> b) {
  return -kernels::sum_sq_diff(a.data(), b.data(), a.size()) /
         double(a.size());
}

}  // namespace

double ImitationGame::utility_a(std::span<const double> x,
                                std::span<const double> y) const {
  return neg_sq_dist(f_a->eval(x), y);
}

double ImitationGame::utility_b(std::span<const double> x,
                                std::span<const double> y) const {
  return neg_sq_dist(x, f_b->eval(y));
}

ImitationGame comp_to_imitation_game(const BrouwerInstance& src,
                                     double alpha) {
  if (src.kind != BrouwerKind::Comp)
    throw std::invalid_argument("comp_to_imitation_game: source must be Comp");
  if (!(src.p == NormKind::l2()))
    throw std::invalid_argument(
        "comp_to_imitation_game: the gadget is Euclidean; p must be 2");
  ImitationGame game;
  game.grid_x = GridSpec::make(src.f_a->in_dim(), alpha);
  game.grid_y = GridSpec::make(src.f_a->out_dim(), alpha);
  game.f_a = src.f_a;
  game.f_b = src.f_b;
  game.alpha = alpha;
  if (game.profile_count() > 1'000'000)
    throw std::invalid_argument("comp_to_imitation_game: too many profiles");
  return game;
}

std::vector<NashProfile> enumerate_approx_pure_nash(const ImitationGame& game,
                                                    double eps_regret) {
  const std::vector<Vec> xs = grid_points(game.grid_x);
  const std::vector<Vec> ys = grid_points(game.grid_y);
  const std::size_t nx = xs.size(), ny = ys.size();

  std::vector<Vec> fa(nx), fb(ny);
  for (std::size_t i = 0; i < nx; ++i) fa[i] = game.f_a->eval(xs[i]);
  for (std::size_t j = 0; j < ny; ++j) fb[j] = game.f_b->eval(ys[j]);

  std::vector<double> ua(nx * ny), ub(nx * ny);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      ua[i * ny + j] = neg_sq_dist(fa[i], ys[j]);
      ub[i * ny + j] = neg_sq_dist(xs[i], fb[j]);
    }
  std::vector<double> best_a(ny, -1e300), best_b(nx, -1e300);
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      best_a[j] = std::max(best_a[j], ua[i * ny + j]);
      best_b[i] = std::max(best_b[i], ub[i * ny + j]);
    }

  std::vector<NashProfile> out;
  for (std::size_t i = 0; i < nx; ++i)
    for (std::size_t j = 0; j < ny; ++j) {
      const double regret = std::max(best_a[j] - ua[i * ny + j],
                                     best_b[i] - ub[i * ny + j]);
      if (regret <= eps_regret) {
        NashProfile p;
        p.ix = (long long)i;
        p.iy = (long long)j;
        p.x = xs[i];
        p.y = ys[j];
        p.regret = regret;
        out.push_back(std::move(p));
      }
    }
  return out;
}

Vec nash_profile_to_point(const NashProfile& profile) { return profile.x; }

}  // namespace fpcc
