#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

namespace fpcc {

using Vec = std::vector<double>;

// Default absolute tolerance for every epsilon comparison in the library.
inline constexpr double kDefaultTol = 1e-9;

// All norms here are NORMALIZED: the p-th root carries a 1/n averaging
// factor, ||x||_p = ((1/n) * sum |x_i|^p)^(1/p). This is not the usual
// library convention, but every approximation bound in this project is
// stated for the normalized norm, so do not swap in an unnormalized one.
struct NormKind {
  double p = std::numeric_limits<double>::infinity();

  static NormKind max() { return NormKind{}; }
  static NormKind lp(double p);
  static NormKind l2() { return lp(2.0); }

  bool is_max() const { return std::numeric_limits<double>::infinity() == p; }
  friend bool operator==(const NormKind& a, const NormKind& b) {
    return a.p == b.p;
  }
};

double normalized_norm(std::span<const double> x, NormKind k);
double normalized_dist(std::span<const double> x, std::span<const double> y,
                       NormKind k);

bool in_unit_box(std::span<const double> x, double tol = kDefaultTol);
double clamp01(double v);

// Axis-aligned lattice {0, alpha, 2*alpha, ...}^dim intersected with the
// unit box. Covers every point of [0,1]^dim within alpha/2 per coordinate
// whenever 1/alpha is an integer (the usual alpha = 1/k case).
struct GridSpec {
  int dim = 1;
  double alpha = 1.0;

  static GridSpec make(int dim, double alpha);  // validates
  int points_per_axis() const;                  // floor(1/alpha) + 1
  long long point_count() const;
  double coord(int index) const { return index * alpha; }
};

// Lexicographic odometer over the grid; avoids materializing big grids.
class GridScan {
 public:
  explicit GridScan(const GridSpec& spec);
  // Fills `out` with the next grid point; returns false when exhausted.
  bool next(Vec& out);
  const std::vector<int>& index() const { return idx_; }

 private:
  GridSpec spec_;
  std::vector<int> idx_;
  bool started_ = false;
  bool done_ = false;
};

// Materialized lexicographic enumeration (guarded against huge grids).
std::vector<Vec> grid_points(const GridSpec& spec);

// Per-coordinate nearest grid point; exact midpoints round toward the
// smaller grid value so protocol replays are deterministic.
Vec nearest_grid(std::span<const double> x, const GridSpec& spec);

// Deterministic splitmix64 stream; identical output on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  // uniform in [0,1)
  double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }

  // uniform in [lo, hi] inclusive
  int next_int(int lo, int hi) {
    return lo + int(next_u64() % std::uint64_t(hi - lo + 1));
  }

  std::uint64_t fork(std::uint64_t stream) {
    Rng r(state_ ^ (0xa0761d6478bd642full * (stream + 1)));
    return r.next_u64();
  }

 private:
  std::uint64_t state_;
};

}  // namespace fpcc
