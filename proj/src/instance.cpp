#include "fpcc/instance.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fpcc {

const char* to_string(BrouwerKind k) {
  switch (k) {
    case BrouwerKind::Comp: return "comp";
    case BrouwerKind::Concat: return "concat";
    case BrouwerKind::Mean: return "mean";
    case BrouwerKind::Local: return "local";
  }
  return "?";
}

void LocalFamily::validate() const {
  if (N < 1 || n < 1 || r < 0)
    throw std::invalid_argument("LocalFamily: bad dimensions");
  if (r > N) throw std::invalid_argument("LocalFamily: r > N");
  if (int(x.size()) != N || int(y.size()) != N)
    throw std::invalid_argument("LocalFamily: bit string length != N");
  const std::size_t want = std::size_t(1) << (2 * r);
  if (fprime.size() != want)
    throw std::invalid_argument("LocalFamily: need 2^(2r) member functions");
  for (const auto& f : fprime)
    if (f.in_dim() != n || f.out_dim() != n)
      throw std::invalid_argument("LocalFamily: member dims must be n -> n");
  if (L.kind == Selector::Kind::Constant) {
    if (int(L.constant.size()) != r)
      throw std::invalid_argument("LocalFamily: |L| != r");
    if (!std::is_sorted(L.constant.begin(), L.constant.end()))
      throw std::invalid_argument("LocalFamily: L must be sorted");
    for (int i : L.constant)
      if (i < 0 || i >= N)
        throw std::invalid_argument("LocalFamily: L index out of range");
  } else if (L.cells_per_axis < 1) {
    throw std::invalid_argument("LocalFamily: cells_per_axis must be >= 1");
  }
}

std::vector<int> LocalFamily::select(std::span<const double> z) const {
  if (int(z.size()) != n)
    throw std::invalid_argument("LocalFamily::select: dimension mismatch");
  if (L.kind == Selector::Kind::Constant) return L.constant;
  // cell-hash: the grid cell of z seeds a draw of r distinct indices
  std::uint64_t cell = 0;
  for (double c : z) {
    int idx = int(std::floor(c * L.cells_per_axis));
    if (idx >= L.cells_per_axis) idx = L.cells_per_axis - 1;
    if (idx < 0) idx = 0;
    cell = cell * std::uint64_t(L.cells_per_axis) + std::uint64_t(idx);
  }
  Rng rng(L.seed ^ (cell * 0x9e3779b97f4a7c15ull + 0x2545f4914f6cdd1dull));
  std::vector<int> pool(N);
  for (int i = 0; i < N; ++i) pool[i] = i;
  std::vector<int> pick;
  pick.reserve(r);
  for (int i = 0; i < r; ++i) {
    const int j = rng.next_int(i, N - 1);
    std::swap(pool[i], pool[j]);
    pick.push_back(pool[i]);
  }
  std::sort(pick.begin(), pick.end());
  return pick;
}

std::uint32_t LocalFamily::restrict_bits(const std::vector<std::uint8_t>& s,
                                         const std::vector<int>& idx) {
  std::uint32_t out = 0;
  for (std::size_t j = 0; j < idx.size(); ++j)
    if (s[std::size_t(idx[j])]) out |= (1u << j);
  return out;
}

Vec LocalFamily::eval(std::span<const double> z) const {
  const std::vector<int> sel = select(z);
  if (int(sel.size()) != r)
    throw std::invalid_argument("LocalFamily::eval: |L(z)| != r");
  const std::uint32_t xb = restrict_bits(x, sel);
  const std::uint32_t yb = restrict_bits(y, sel);
  return fprime[(std::size_t(xb) << r) | yb].eval(z);
}

LocalFamily random_local_family(std::uint64_t seed, int N, int n, int r,
                                double lambda, NormKind norm,
                                int anchor_count,
                                LocalFamily::Selector::Kind selector_kind) {
  Rng rng(seed);
  LocalFamily fam;
  fam.N = N;
  fam.n = n;
  fam.r = r;
  fam.lambda = lambda;
  fam.norm = norm;
  fam.L.kind = selector_kind;
  if (selector_kind == LocalFamily::Selector::Kind::Constant) {
    std::vector<int> pool(N);
    for (int i = 0; i < N; ++i) pool[i] = i;
    for (int i = 0; i < r; ++i) {
      const int j = rng.next_int(i, N - 1);
      std::swap(pool[i], pool[j]);
    }
    fam.L.constant.assign(pool.begin(), pool.begin() + r);
    std::sort(fam.L.constant.begin(), fam.L.constant.end());
  } else {
    fam.L.cells_per_axis = 2;
    fam.L.seed = rng.next_u64();
  }
  const std::size_t members = std::size_t(1) << (2 * r);
  fam.fprime.reserve(members);
  for (std::size_t i = 0; i < members; ++i)
    fam.fprime.push_back(
        random_lipschitz(rng.next_u64(), n, n, lambda, norm, anchor_count));
  fam.x.resize(N);
  fam.y.resize(N);
  for (auto& b : fam.x) b = std::uint8_t(rng.next_u64() & 1);
  for (auto& b : fam.y) b = std::uint8_t(rng.next_u64() & 1);
  fam.validate();
  return fam;
}

BrouwerInstance BrouwerInstance::make(BrouwerKind kind, NormKind p,
                                      double epsilon, double lambda_a,
                                      double lambda_b, FuncPtr f_a,
                                      FuncPtr f_b) {
  if (kind == BrouwerKind::Local)
    throw std::invalid_argument("BrouwerInstance: use make_local");
  if (!f_a || !f_b) throw std::invalid_argument("BrouwerInstance: null func");
  if (!(epsilon > 0.0))
    throw std::invalid_argument("BrouwerInstance: epsilon must be > 0");
  switch (kind) {
    case BrouwerKind::Comp:
      if (f_a->out_dim() != f_b->in_dim() || f_b->out_dim() != f_a->in_dim())
        throw std::invalid_argument("Comp instance: dims must be n->m, m->n");
      break;
    case BrouwerKind::Concat:
      if (f_a->in_dim() != f_b->in_dim() ||
          f_a->out_dim() + f_b->out_dim() != f_a->in_dim())
        throw std::invalid_argument(
            "Concat instance: halves must sum to the input dimension");
      break;
    case BrouwerKind::Mean:
      if (f_a->in_dim() != f_b->in_dim() ||
          f_a->out_dim() != f_b->out_dim() ||
          f_a->in_dim() != f_a->out_dim())
        throw std::invalid_argument("Mean instance: dims must all be n");
      break;
    default:
      break;
  }
  BrouwerInstance inst;
  inst.kind = kind;
  inst.p = p;
  inst.epsilon = epsilon;
  inst.lambda_a = lambda_a;
  inst.lambda_b = lambda_b;
  inst.f_a = std::move(f_a);
  inst.f_b = std::move(f_b);
  return inst;
}

BrouwerInstance BrouwerInstance::make_local(NormKind p, double epsilon,
                                            LocalFamilyPtr family) {
  if (!family) throw std::invalid_argument("BrouwerInstance: null family");
  family->validate();
  BrouwerInstance inst;
  inst.kind = BrouwerKind::Local;
  inst.p = p;
  inst.epsilon = epsilon;
  inst.lambda_a = family->lambda;
  inst.lambda_b = family->lambda;
  inst.local = std::move(family);
  return inst;
}

int BrouwerInstance::n() const {
  if (kind == BrouwerKind::Local) return local->n;
  return f_a->in_dim();
}

FuncPtr BrouwerInstance::target() const {
  switch (kind) {
    case BrouwerKind::Comp: return make_compose(f_a, f_b);
    case BrouwerKind::Concat: return make_concat(f_a, f_b);
    case BrouwerKind::Mean: return make_mean(f_a, f_b);
    case BrouwerKind::Local: {
      auto fam = local;
      return std::make_shared<LambdaFunc>(
          fam->n, fam->n,
          [fam](std::span<const double> z) { return fam->eval(z); },
          [fam](NormKind) { return fam->lambda; }, "local_family");
    }
  }
  throw std::logic_error("unreachable");
}

double BrouwerInstance::combined_lambda_bound() const {
  return target()->lipschitz_bound(p);
}

BrouwerInstance random_instance(std::uint64_t seed, BrouwerKind kind, int n,
                                int m, NormKind p, double epsilon,
                                double lambda_a, double lambda_b,
                                int anchor_count) {
  Rng rng(seed);
  const std::uint64_t sa = rng.next_u64();
  const std::uint64_t sb = rng.next_u64();
  FuncPtr fa, fb;
  switch (kind) {
    case BrouwerKind::Comp:
      fa = std::make_shared<AnchorFunction>(
          random_lipschitz(sa, n, m, lambda_a, p, anchor_count));
      fb = std::make_shared<AnchorFunction>(
          random_lipschitz(sb, m, n, lambda_b, p, anchor_count));
      break;
    case BrouwerKind::Concat:
      if (n % 2 != 0)
        throw std::invalid_argument("random_instance: Concat needs even n");
      fa = std::make_shared<AnchorFunction>(
          random_lipschitz(sa, n, n / 2, lambda_a, p, anchor_count));
      fb = std::make_shared<AnchorFunction>(
          random_lipschitz(sb, n, n / 2, lambda_b, p, anchor_count));
      break;
    case BrouwerKind::Mean:
      fa = std::make_shared<AnchorFunction>(
          random_lipschitz(sa, n, n, lambda_a, p, anchor_count));
      fb = std::make_shared<AnchorFunction>(
          random_lipschitz(sb, n, n, lambda_b, p, anchor_count));
      break;
    case BrouwerKind::Local:
      throw std::invalid_argument(
          "random_instance: use random_local_family for Local");
  }
  return BrouwerInstance::make(kind, p, epsilon, lambda_a, lambda_b,
                               std::move(fa), std::move(fb));
}

}  // namespace fpcc
