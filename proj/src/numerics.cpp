#include "fpcc/numerics.hpp"

#include <cmath>
#include <stdexcept>

#include "fpcc/kernels.hpp"

namespace fpcc {

NormKind NormKind::lp(double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("NormKind: p must be >= 1");
  NormKind k;
  k.p = p;
  return k;
}

double normalized_norm(std::span<const double> x, NormKind k) {
  if (x.empty()) throw std::invalid_argument("normalized_norm: empty vector");
  const std::size_t n = x.size();
  if (k.is_max()) return kernels::max_abs(x.data(), n);
  if (k.p == 2.0) return std::sqrt(kernels::sum_sq(x.data(), n) / double(n));
  return std::pow(kernels::sum_abs_pow(x.data(), n, k.p) / double(n),
                  1.0 / k.p);
}

double normalized_dist(std::span<const double> x, std::span<const double> y,
                       NormKind k) {
  if (x.size() != y.size())
    throw std::invalid_argument("normalized_dist: dimension mismatch");
  if (x.empty()) throw std::invalid_argument("normalized_dist: empty vector");
  const std::size_t n = x.size();
  if (k.is_max()) return kernels::max_abs_diff(x.data(), y.data(), n);
  if (k.p == 2.0)
    return std::sqrt(kernels::sum_sq_diff(x.data(), y.data(), n) / double(n));
  return std::pow(
      kernels::sum_abs_pow_diff(x.data(), y.data(), n, k.p) / double(n),
      1.0 / k.p);
}

bool in_unit_box(std::span<const double> x, double tol) {
  for (double v : x)
    if (v < -tol || v > 1.0 + tol) return false;
  return true;
}

double clamp01(double v) { return v < 0.0 ? 0.0 : (v > 1.0 ? 1.0 : v); }

GridSpec GridSpec::make(int dim, double alpha) {
  if (dim < 1) throw std::invalid_argument("GridSpec: dim must be positive");
  if (!(alpha > 0.0) || alpha > 1.0)
    throw std::invalid_argument("GridSpec: alpha must be in (0,1]");
  return GridSpec{dim, alpha};
}

int GridSpec::points_per_axis() const {
  // small forgiveness so alpha = 0.1 etc. land on the intended count
  return int(std::floor(1.0 / alpha + 1e-9)) + 1;
}

long long GridSpec::point_count() const {
  long long c = 1;
  for (int i = 0; i < dim; ++i) c *= points_per_axis();
  return c;
}

GridScan::GridScan(const GridSpec& spec) : spec_(spec), idx_(spec.dim, 0) {}

bool GridScan::next(Vec& out) {
  if (done_) return false;
  if (!started_) {
    started_ = true;
  } else {
    // last coordinate fastest => lexicographic tuples
    int pos = spec_.dim - 1;
    const int top = spec_.points_per_axis() - 1;
    while (pos >= 0 && idx_[pos] == top) {
      idx_[pos] = 0;
      --pos;
    }
    if (pos < 0) {
      done_ = true;
      return false;
    }
    ++idx_[pos];
  }
  out.resize(spec_.dim);
  for (int i = 0; i < spec_.dim; ++i) out[i] = spec_.coord(idx_[i]);
  return true;
}

std::vector<Vec> grid_points(const GridSpec& spec) {
  const long long count = spec.point_count();
  if (count > 20'000'000)
    throw std::invalid_argument("grid_points: grid too large to materialize");
  std::vector<Vec> pts;
  pts.reserve(std::size_t(count));
  GridScan scan(spec);
  Vec p;
  while (scan.next(p)) pts.push_back(p);
  return pts;
}

Vec nearest_grid(std::span<const double> x, const GridSpec& spec) {
  if (int(x.size()) != spec.dim)
    throw std::invalid_argument("nearest_grid: dimension mismatch");
  const int top = spec.points_per_axis() - 1;
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double t = x[i] / spec.alpha;
    double base = std::floor(t);
    const double frac = t - base;
    if (frac > 0.5) base += 1.0;  // exact half rounds down
    int idx = int(base);
    if (idx < 0) idx = 0;
    if (idx > top) idx = top;
    out[i] = spec.coord(idx);
  }
  return out;
}

}  // namespace fpcc
