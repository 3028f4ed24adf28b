#include "fpcc/sperner.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>
#include <stdexcept>

namespace fpcc {

namespace {

int bits_for(long long max_value) {  // width of the largest value
  if (max_value <= 0) return 0;
  return int(std::bit_width(std::uint64_t(max_value)));
}

long long binomial(int top, int bottom) {
  if (bottom < 0 || bottom > top) return 0;
  bottom = std::min(bottom, top - bottom);
  long long r = 1;
  for (int i = 1; i <= bottom; ++i) r = r * (top - bottom + i) / i;
  return r;
}

}  // namespace

// ---- Triangulation ----------------------------------------------------------

Triangulation Triangulation::build(int d, int k) {
  if (d < 1 || k < 1)
    throw std::invalid_argument("Triangulation: d and k must be >= 1");
  double cells_est = 1.0;
  for (int i = 0; i < d; ++i) cells_est *= double(k);
  if (cells_est > 1e8)
    throw std::invalid_argument("Triangulation: size overflow (k^d > 1e8)");
  double keys_est = 1.0, fact = 1.0;
  for (int i = 0; i < d; ++i) keys_est *= double(k + 1);
  for (int i = 2; i <= d; ++i) fact *= double(i);
  if (keys_est > 5e8 || double(binomial(k + d, d)) * fact > 2e8)
    throw std::invalid_argument("Triangulation: size overflow");

  Triangulation t;
  t.d_ = d;
  t.k_ = k;

  // vertices, ascending lexicographic
  std::vector<std::int32_t> tuple(std::size_t(d) + 1);
  auto emit = [&](auto&& self, int pos, int remaining) -> void {
    if (pos == d) {
      tuple[std::size_t(d)] = remaining;
      t.vert_coords_.insert(t.vert_coords_.end(), tuple.begin(), tuple.end());
      return;
    }
    for (int v = 0; v <= remaining; ++v) {
      tuple[std::size_t(pos)] = v;
      self(self, pos + 1, remaining - v);
    }
  };
  emit(emit, 0, k);
  t.nverts_ = t.vert_coords_.size() / (std::size_t(d) + 1);
  if ((long long)t.nverts_ != binomial(k + d, d))
    throw std::logic_error("Triangulation: vertex count mismatch");

  std::size_t keys = 1;
  for (int i = 0; i < d; ++i) keys *= std::size_t(k + 1);
  t.key_to_vid_.assign(keys, -1);
  for (std::size_t vid = 0; vid < t.nverts_; ++vid)
    t.key_to_vid_[t.coords_key(t.vertex((long long)vid))] =
        std::int32_t(vid);

  // cells: bases ascending, permutations of the d moves in lex order
  std::vector<int> axes(d);
  std::vector<std::int32_t> cur(std::size_t(d) + 1);
  for (std::size_t base = 0; base < t.nverts_; ++base) {
    const auto b = t.vertex((long long)base);
    for (int i = 0; i < d; ++i) axes[std::size_t(i)] = i + 1;
    do {
      std::copy(b.begin(), b.end(), cur.begin());
      bool ok = true;
      for (int i = 0; i < d && ok; ++i) {
        const int a = axes[std::size_t(i)];
        if (cur[std::size_t(a - 1)] == 0) {
          ok = false;
          break;
        }
        --cur[std::size_t(a - 1)];
        ++cur[std::size_t(a)];
      }
      if (ok) {
        std::uint32_t packed = 0;
        for (int i = 0; i < d; ++i)
          packed = (packed << 4) | std::uint32_t(axes[std::size_t(i)]);
        t.cells_.push_back(CellRef{std::int32_t(base), packed});
      }
    } while (std::next_permutation(axes.begin(), axes.end()));
  }
  if ((double)t.cells_.size() != cells_est)
    throw std::logic_error("Triangulation: cell count != k^d");

  // cell -> vertex ids
  t.cell_verts_.resize(t.cells_.size() * (std::size_t(d) + 1));
  for (std::size_t ci = 0; ci < t.cells_.size(); ++ci) {
    const auto b = t.vertex(t.cells_[ci].base);
    std::copy(b.begin(), b.end(), cur.begin());
    std::int32_t* out = t.cell_verts_.data() + ci * (std::size_t(d) + 1);
    out[0] = t.cells_[ci].base;
    for (int i = 0; i < d; ++i) {
      const int a = int((t.cells_[ci].perm >> (4 * (d - 1 - i))) & 0xf);
      --cur[std::size_t(a - 1)];
      ++cur[std::size_t(a)];
      out[i + 1] = std::int32_t(t.vid_from_coords(cur));
    }
  }

  // facet neighbors via the standard Freudenthal pivot rules
  t.neighbors_.assign(t.cells_.size() * (std::size_t(d) + 1), -1);
  std::vector<int> perm(d), nperm(d);
  std::vector<std::int32_t> nbase(std::size_t(d) + 1);
  for (std::size_t ci = 0; ci < t.cells_.size(); ++ci) {
    for (int i = 0; i < d; ++i)
      perm[std::size_t(i)] =
          int((t.cells_[ci].perm >> (4 * (d - 1 - i))) & 0xf);
    const auto b = t.vertex(t.cells_[ci].base);
    for (int j = 0; j <= d; ++j) {
      std::copy(b.begin(), b.end(), nbase.begin());
      nperm = perm;
      if (j == 0) {
        const int a = perm[0];
        --nbase[std::size_t(a - 1)];
        ++nbase[std::size_t(a)];
        std::rotate(nperm.begin(), nperm.begin() + 1, nperm.end());
      } else if (j == d) {
        const int a = perm[std::size_t(d - 1)];
        ++nbase[std::size_t(a - 1)];
        --nbase[std::size_t(a)];
        std::rotate(nperm.begin(), nperm.end() - 1, nperm.end());
      } else {
        std::swap(nperm[std::size_t(j - 1)], nperm[std::size_t(j)]);
      }
      // candidate must be a valid walk inside the lattice
      bool ok = true;
      for (int i = 0; i <= d && ok; ++i)
        if (nbase[std::size_t(i)] < 0 || nbase[std::size_t(i)] > k) ok = false;
      if (ok) {
        std::copy(nbase.begin(), nbase.end(), cur.begin());
        for (int i = 0; i < d && ok; ++i) {
          const int a = nperm[std::size_t(i)];
          if (cur[std::size_t(a - 1)] == 0) {
            ok = false;
            break;
          }
          --cur[std::size_t(a - 1)];
          ++cur[std::size_t(a)];
        }
      }
      if (!ok) continue;  // boundary facet
      const long long bvid = t.vid_from_coords(nbase);
      if (bvid < 0) continue;
      std::uint32_t packed = 0;
      for (int i = 0; i < d; ++i)
        packed = (packed << 4) | std::uint32_t(nperm[std::size_t(i)]);
      const long long nci = t.cell_index(std::int32_t(bvid), packed);
      if (nci < 0)
        throw std::logic_error("Triangulation: pivot left the complex");
      t.neighbors_[ci * (std::size_t(d) + 1) + std::size_t(j)] =
          std::int32_t(nci);
    }
  }
  return t;
}

std::uint64_t Triangulation::coords_key(
    std::span<const std::int32_t> y) const {
  std::uint64_t key = 0;
  for (int i = 0; i < d_; ++i)
    key = key * std::uint64_t(k_ + 1) + std::uint64_t(y[std::size_t(i)]);
  return key;
}

std::span<const std::int32_t> Triangulation::vertex(long long vid) const {
  return {vert_coords_.data() + std::size_t(vid) * (std::size_t(d_) + 1),
          std::size_t(d_) + 1};
}

long long Triangulation::vid_from_coords(
    std::span<const std::int32_t> y) const {
  int sum = 0;
  for (auto v : y) {
    if (v < 0 || v > k_) return -1;
    sum += v;
  }
  if (sum != k_) return -1;
  return key_to_vid_[coords_key(y)];
}

long long Triangulation::corner_vid(int i) const {
  std::vector<std::int32_t> y(std::size_t(d_) + 1, 0);
  y[std::size_t(i)] = std::int32_t(k_);
  return vid_from_coords(y);
}

std::span<const std::int32_t> Triangulation::cell_vertices(
    long long ci) const {
  return {cell_verts_.data() + std::size_t(ci) * (std::size_t(d_) + 1),
          std::size_t(d_) + 1};
}

long long Triangulation::neighbor(long long ci, int j) const {
  return neighbors_[std::size_t(ci) * (std::size_t(d_) + 1) + std::size_t(j)];
}

long long Triangulation::cell_index(std::int32_t base,
                                    std::uint32_t perm) const {
  const CellRef want{base, perm};
  auto less = [](const CellRef& a, const CellRef& b) {
    return a.base != b.base ? a.base < b.base : a.perm < b.perm;
  };
  auto it = std::lower_bound(cells_.begin(), cells_.end(), want, less);
  if (it == cells_.end() || it->base != base || it->perm != perm) return -1;
  return it - cells_.begin();
}

std::vector<int> Triangulation::cell_base(long long ci) const {
  const auto y = vertex(cells_[std::size_t(ci)].base);
  return std::vector<int>(y.begin(), y.end());
}

std::vector<int> Triangulation::cell_perm(long long ci) const {
  std::vector<int> perm(d_);
  for (int i = 0; i < d_; ++i)
    perm[std::size_t(i)] =
        int((cells_[std::size_t(ci)].perm >> (4 * (d_ - 1 - i))) & 0xf);
  return perm;
}

std::vector<int> Triangulation::support(long long vid) const {
  const auto y = vertex(vid);
  std::vector<int> s;
  for (int i = 0; i <= d_; ++i)
    if (y[std::size_t(i)] > 0) s.push_back(i);
  return s;
}

// ---- colorings ----------------------------------------------------------------

std::optional<Violation> validate_sperner(
    const Triangulation& tri,
    const std::vector<std::vector<long long>>& classes) {
  const int d = tri.d();
  const long long n = tri.vertex_count();
  if (int(classes.size()) != d + 1)
    throw std::invalid_argument("validate_sperner: need d+1 color classes");
  std::vector<std::int8_t> count(std::size_t(n), 0);
  std::vector<std::int8_t> color(std::size_t(n), -1);
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (long long v : classes[c]) {
      if (v < 0 || v >= n)
        throw std::invalid_argument("validate_sperner: vertex id out of range");
      if (count[std::size_t(v)] < 2) ++count[std::size_t(v)];
      color[std::size_t(v)] = std::int8_t(c);
    }
  std::vector<long long> corner_of(std::size_t(n), -1);
  std::vector<long long> corners(std::size_t(d) + 1);
  for (int i = 0; i <= d; ++i) {
    corners[std::size_t(i)] = tri.corner_vid(i);
    corner_of[std::size_t(corners[std::size_t(i)])] = i;
  }
  for (long long v = 0; v < n; ++v) {
    if (count[std::size_t(v)] > 1)
      return Violation{v, "vertex appears in more than one color class"};
    if (count[std::size_t(v)] == 0)
      return Violation{v, "vertex appears in no color class"};
    const int c = color[std::size_t(v)];
    if (corner_of[std::size_t(v)] >= 0 && c != corner_of[std::size_t(v)])
      return Violation{v, "corner vertex has the wrong color"};
    const auto y = tri.vertex(v);
    if (y[std::size_t(c)] == 0)
      return Violation{v, "color outside the minimal face support"};
  }
  return std::nullopt;
}

std::vector<std::int8_t> coloring_from_classes(
    const Triangulation& tri,
    const std::vector<std::vector<long long>>& classes) {
  std::vector<std::int8_t> color(std::size_t(tri.vertex_count()), -1);
  for (std::size_t c = 0; c < classes.size(); ++c)
    for (long long v : classes[c]) color[std::size_t(v)] = std::int8_t(c);
  return color;
}

std::vector<std::vector<long long>> random_valid_coloring(
    const Triangulation& tri, std::uint64_t seed) {
  Rng rng(seed);
  const int d = tri.d();
  std::vector<std::vector<long long>> classes(std::size_t(d) + 1);
  for (long long v = 0; v < tri.vertex_count(); ++v) {
    const auto y = tri.vertex(v);
    int live = 0;
    for (int i = 0; i <= d; ++i)
      if (y[std::size_t(i)] > 0) ++live;
    int pick = rng.next_int(0, live - 1);
    for (int i = 0; i <= d; ++i)
      if (y[std::size_t(i)] > 0 && pick-- == 0) {
        classes[std::size_t(i)].push_back(v);
        break;
      }
  }
  return classes;
}

std::vector<std::int8_t> merge_coloring(const std::vector<std::int8_t>& c,
                                        int d) {
  std::vector<std::int8_t> out = c;
  for (auto& v : out)
    if (v == d) v = 0;
  return out;
}

std::vector<long long> brute_force_panchromatic(
    const Triangulation& tri, const std::vector<std::int8_t>& colors) {
  const int d = tri.d();
  std::vector<long long> hits;
  const std::uint32_t want = (d + 1 >= 32) ? ~0u : ((1u << (d + 1)) - 1);
  for (long long ci = 0; ci < tri.cell_count(); ++ci) {
    const auto verts = tri.cell_vertices(ci);
    std::uint32_t mask = 0;
    for (auto v : verts) mask |= (1u << colors[std::size_t(v)]);
    if (mask == want) hits.push_back(ci);
  }
  return hits;
}

// ---- surplus graph and path ---------------------------------------------------

SurplusGraph build_surplus_graph(const Triangulation& tri,
                                 const std::vector<std::int8_t>& merged) {
  const int d = tri.d();
  SurplusGraph g;
  g.ports.assign(std::size_t(tri.cell_count()), {});
  g.degree.assign(std::size_t(tri.cell_count()), 0);
  std::array<std::int8_t, 16> count{};
  for (long long ci = 0; ci < tri.cell_count(); ++ci) {
    const auto verts = tri.cell_vertices(ci);
    count.fill(0);
    bool in_range = true;
    for (auto v : verts) {
      const int c = merged[std::size_t(v)];
      if (c < 0 || c >= d) {
        in_range = false;
        break;
      }
      ++count[std::size_t(c)];
    }
    if (!in_range) {
      g.defect = Violation{verts[0], "merged color out of range"};
      return g;
    }
    int dup = -1;
    bool all = true;
    for (int c = 0; c < d; ++c) {
      if (count[std::size_t(c)] == 0) all = false;
      if (count[std::size_t(c)] == 2) dup = c;
    }
    if (!all) continue;  // no panchromatic facet
    // d+1 vertices over d colors, all present: exactly one duplicate;
    // dropping either duplicate vertex leaves a panchromatic facet
    for (int j = 0; j <= d; ++j) {
      if (merged[std::size_t(verts[std::size_t(j)])] != dup) continue;
      SurplusGraph::Port port;
      port.facet = j;
      const long long nb = tri.neighbor(ci, j);
      if (nb >= 0) {
        port.to = nb;
      } else {
        bool on_f0 = true, on_fd = true;
        for (int i = 0; i <= d; ++i) {
          if (i == j) continue;
          const auto y = tri.vertex(verts[std::size_t(i)]);
          if (y[std::size_t(d)] != 0) on_f0 = false;
          if (y[0] != 0) on_fd = false;
        }
        if (on_f0) {
          port.to = SurplusGraph::kTerm0;
          g.f0_edges.emplace_back(ci, j);
        } else if (on_fd) {
          port.to = SurplusGraph::kTermD;
          g.fd_edges.emplace_back(ci, j);
        } else {
          g.defect = Violation{verts[std::size_t(j)],
                               "panchromatic facet on a middle boundary face"};
          return g;
        }
      }
      if (g.degree[std::size_t(ci)] >= 2) {
        g.defect = Violation{verts[std::size_t(j)], "cell degree exceeds 2"};
        return g;
      }
      g.ports[std::size_t(ci)][g.degree[std::size_t(ci)]++] = port;
    }
  }
  return g;
}

namespace {

long long facet_zero_vertex(const Triangulation& tri,
                            const std::vector<std::int8_t>& merged,
                            long long ci, int facet) {
  const auto verts = tri.cell_vertices(ci);
  long long zero = -1;
  for (int i = 0; i <= tri.d(); ++i) {
    if (i == facet) continue;
    if (merged[std::size_t(verts[std::size_t(i)])] == 0) {
      if (zero >= 0) throw std::logic_error("facet has two color-0 vertices");
      zero = verts[std::size_t(i)];
    }
  }
  if (zero < 0) throw std::logic_error("facet has no color-0 vertex");
  return zero;
}

}  // namespace

std::optional<SurplusPath> surplus_path(
    const Triangulation& tri, const SurplusGraph& g,
    const std::vector<std::int8_t>& merged) {
  if (g.defect) return std::nullopt;
  std::set<std::pair<long long, int>> used;
  for (const auto& start : g.f0_edges) {
    if (used.count(start)) continue;
    SurplusPath path;
    long long cur = start.first;
    int entry = start.second;
    path.edges.push_back(SurplusPath::Edge{
        cur, entry, facet_zero_vertex(tri, merged, cur, entry)});
    bool dead = false;
    for (long long guard = 0; guard <= tri.cell_count() + 1; ++guard) {
      path.cells.push_back(cur);
      const auto& ports = g.ports[std::size_t(cur)];
      if (g.degree[std::size_t(cur)] != 2)
        throw std::logic_error("path cell does not have degree 2");
      const auto& exit = ports[0].facet == entry ? ports[1] : ports[0];
      path.edges.push_back(SurplusPath::Edge{
          cur, exit.facet, facet_zero_vertex(tri, merged, cur, exit.facet)});
      if (exit.to == SurplusGraph::kTerm0) {
        used.insert(start);
        used.insert({cur, exit.facet});
        dead = true;
        break;
      }
      if (exit.to == SurplusGraph::kTermD) return path;
      const long long next = exit.to;
      const auto& nports = g.ports[std::size_t(next)];
      int nentry = -1;
      for (int i = 0; i < g.degree[std::size_t(next)]; ++i)
        if (nports[std::size_t(i)].to == cur)
          nentry = nports[std::size_t(i)].facet;
      if (nentry < 0) throw std::logic_error("asymmetric surplus edge");
      cur = next;
      entry = nentry;
    }
    if (!dead) throw std::logic_error("surplus walk did not terminate");
  }
  return std::nullopt;
}

// ---- protocols ------------------------------------------------------------------

long long surplus_bits_bound(long long path_len, long long nverts) {
  const long long lr = path_len >= 2 ? bits_for(path_len - 1) : 0;
  const long long ln = bits_for(nverts - 1);
  return (lr + 1) * (lr + ln + 1);
}

namespace {

void check_instance_shape(const Triangulation& tri,
                          const SpernerInstance& inst) {
  if (inst.d != tri.d() || inst.k != tri.k())
    throw std::invalid_argument("sperner protocol: instance/triangulation mismatch");
  if (int(inst.classes.size()) != tri.d() + 1)
    throw std::invalid_argument("sperner protocol: need d+1 color classes");
  for (const auto& cls : inst.classes)
    for (long long v : cls)
      if (v < 0 || v >= tri.vertex_count())
        throw std::invalid_argument("sperner protocol: vertex id out of range");
}

SpernerRunResult violation_result(Violation v, Channel& ch) {
  SpernerRunResult r;
  r.ok = false;
  r.violation = std::move(v);
  r.transcript = ch.take();
  return r;
}

}  // namespace

SpernerRunResult run_surplus_protocol(const Triangulation& tri,
                                      const SpernerInstance& inst) {
  const int d = tri.d();
  if (d < 2)
    throw std::invalid_argument("surplus protocol: requires d >= 2");
  check_instance_shape(tri, inst);
  if (inst.split != SpernerInstance::Split::Surplus)
    throw std::invalid_argument(
        "surplus protocol: instance must use the surplus split "
        "(A holds colors 1..d-1)");
  const long long n = tri.vertex_count();
  Channel ch;

  // Player A reconstructs the merged coloring alone: every vertex outside
  // her classes carries color 0 or d, both of which merge to 0.
  std::vector<std::int8_t> cprime(std::size_t(n), 0);
  std::vector<std::uint8_t> mine(std::size_t(n), 0);
  for (int c = 1; c <= d - 1; ++c)
    for (long long v : inst.classes[std::size_t(c)]) {
      if (mine[std::size_t(v)])
        return violation_result(
            Violation{v, "vertex appears in two of A's color classes"}, ch);
      mine[std::size_t(v)] = 1;
      cprime[std::size_t(v)] = std::int8_t(c);
    }
  for (int i = 1; i <= d - 1; ++i) {
    const long long corner = tri.corner_vid(i);
    if (cprime[std::size_t(corner)] != i)
      return violation_result(
          Violation{corner, "corner vertex missing from its color class"}, ch);
  }
  for (int i : {0, d}) {
    const long long corner = tri.corner_vid(i);
    if (mine[std::size_t(corner)])
      return violation_result(
          Violation{corner, "corner vertex colored by player A"}, ch);
  }
  for (long long v = 0; v < n; ++v) {
    const auto y = tri.vertex(v);
    const int c = cprime[std::size_t(v)];
    if (c >= 1) {
      if (y[std::size_t(c)] == 0)
        return violation_result(
            Violation{v, "color outside the minimal face support"}, ch);
    } else if (y[0] == 0 && y[std::size_t(d)] == 0) {
      return violation_result(
          Violation{v, "vertex admits only A's colors but is not in A's classes"},
          ch);
    }
  }

  SurplusGraph graph = build_surplus_graph(tri, cprime);
  if (graph.defect) return violation_result(*graph.defect, ch);
  if (graph.f0_edges.empty())
    return violation_result(Violation{-1, "no panchromatic facet on F_0"}, ch);
  auto path = surplus_path(tri, graph, cprime);
  if (!path)
    return violation_result(Violation{-1, "no chain from F_0 to F_d"}, ch);

  // Player B's side: membership in class 0 / class d.
  std::vector<std::uint8_t> bmap(std::size_t(n), 0);
  for (long long v : inst.classes[0]) bmap[std::size_t(v)] |= 1;
  for (long long v : inst.classes[std::size_t(d)]) bmap[std::size_t(v)] |= 2;

  const long long r = (long long)path->cells.size();
  const int idx_bits = r >= 2 ? bits_for(r - 1) : 0;
  const int vid_bits = bits_for(n - 1);
  // invariant: edge lo is labeled 0, edge hi is labeled d
  long long lo = 0, hi = r;
  while (hi - lo > 1) {
    const long long mid = (lo + hi) / 2;
    const long long u = path->edges[std::size_t(mid)].zero_vertex;
    std::string payload;
    for (int i = 0; i < idx_bits; ++i)
      payload.push_back(((std::uint64_t(mid - 1) >> (idx_bits - 1 - i)) & 1)
                            ? '1' : '0');
    for (int i = 0; i < vid_bits; ++i)
      payload.push_back(((std::uint64_t(u) >> (vid_bits - 1 - i)) & 1)
                            ? '1' : '0');
    ch.send_bits("A", std::move(payload));
    const std::uint8_t side = bmap[std::size_t(u)];
    if (side != 1 && side != 2)
      return violation_result(
          Violation{u, side == 0
                           ? "queried vertex in neither of B's classes"
                           : "queried vertex in both of B's classes"},
          ch);
    const bool is_d = (side == 2);
    ch.send_bit("B", is_d);
    if (is_d)
      hi = mid;
    else
      lo = mid;
  }

  SpernerRunResult result;
  result.ok = true;
  result.cell = path->cells[std::size_t(lo)];
  result.transcript = ch.take();
  return result;
}

SpernerRunResult run_single_missing_color_protocol(
    const Triangulation& tri, const SpernerInstance& inst) {
  const int d = tri.d();
  check_instance_shape(tri, inst);
  if (inst.split != SpernerInstance::Split::Prefix || inst.t != d)
    throw std::invalid_argument(
        "single-missing-color protocol: A must hold colors 0..d-1");
  const long long n = tri.vertex_count();
  Channel ch;

  std::vector<std::int8_t> colors(std::size_t(n), -1);
  for (int c = 0; c <= d - 1; ++c)
    for (long long v : inst.classes[std::size_t(c)]) {
      if (colors[std::size_t(v)] >= 0)
        return violation_result(
            Violation{v, "vertex appears in two of A's color classes"}, ch);
      colors[std::size_t(v)] = std::int8_t(c);
    }
  for (auto& c : colors)
    if (c < 0) c = std::int8_t(d);  // inferred complement

  for (int i = 0; i <= d; ++i) {
    const long long corner = tri.corner_vid(i);
    if (colors[std::size_t(corner)] != i)
      return violation_result(
          Violation{corner, "corner vertex has the wrong inferred color"}, ch);
  }
  for (long long v = 0; v < n; ++v) {
    const auto y = tri.vertex(v);
    if (y[std::size_t(colors[std::size_t(v)])] == 0)
      return violation_result(
          Violation{v, "inferred color outside the minimal face support"}, ch);
  }

  const auto hits = brute_force_panchromatic(tri, colors);
  if (hits.empty())
    return violation_result(
        Violation{-1, "no panchromatic cell under the inferred coloring"}, ch);
  const long long cell = hits.front();
  const int cell_bits = bits_for(tri.cell_count() - 1);
  std::string payload;
  for (int i = 0; i < cell_bits; ++i)
    payload.push_back(((std::uint64_t(cell) >> (cell_bits - 1 - i)) & 1)
                          ? '1' : '0');
  ch.send_bits("A", std::move(payload));

  SpernerRunResult result;
  result.ok = true;
  result.cell = cell;
  result.transcript = ch.take();
  return result;
}

SpernerRunResult run_three_player_protocol(const Triangulation& tri,
                                           const SpernerInstance& inst) {
  if (tri.d() != 2)
    throw std::invalid_argument("three-player protocol: requires d = 2");
  check_instance_shape(tri, inst);
  if (inst.split != SpernerInstance::Split::Three)
    throw std::invalid_argument(
        "three-player protocol: instance must use the three-player split");
  const long long n = tri.vertex_count();
  Channel ch;

  // Player 2 (holder of C_1) knows the merged coloring alone.
  std::vector<std::int8_t> cprime(std::size_t(n), 0);
  for (long long v : inst.classes[1]) cprime[std::size_t(v)] = 1;
  {
    const long long c1 = tri.corner_vid(1);
    if (cprime[std::size_t(c1)] != 1)
      return violation_result(
          Violation{c1, "corner vertex missing from its color class"}, ch);
    for (int i : {0, 2}) {
      const long long corner = tri.corner_vid(i);
      if (cprime[std::size_t(corner)] == 1)
        return violation_result(
            Violation{corner, "corner vertex colored by player 2"}, ch);
    }
    for (long long v = 0; v < n; ++v) {
      const auto y = tri.vertex(v);
      if (cprime[std::size_t(v)] == 1) {
        if (y[1] == 0)
          return violation_result(
              Violation{v, "color outside the minimal face support"}, ch);
      } else if (y[0] == 0 && y[2] == 0) {
        return violation_result(
            Violation{v, "vertex admits only color 1 but is not in C_1"}, ch);
      }
    }
  }

  SurplusGraph graph = build_surplus_graph(tri, cprime);
  if (graph.defect) return violation_result(*graph.defect, ch);
  if (graph.f0_edges.empty())
    return violation_result(Violation{-1, "no panchromatic facet on F_0"}, ch);
  auto path = surplus_path(tri, graph, cprime);
  if (!path)
    return violation_result(Violation{-1, "no chain from F_0 to F_2"}, ch);

  std::vector<std::uint8_t> in_c0(std::size_t(n), 0);
  for (long long v : inst.classes[0]) in_c0[std::size_t(v)] = 1;

  const long long r = (long long)path->cells.size();
  const int vid_bits = bits_for(n - 1);
  long long lo = 0, hi = r;
  while (hi - lo > 1) {
    const long long mid = (lo + hi) / 2;
    const long long u = path->edges[std::size_t(mid)].zero_vertex;
    std::string payload;
    for (int i = 0; i < vid_bits; ++i)
      payload.push_back(((std::uint64_t(u) >> (vid_bits - 1 - i)) & 1)
                            ? '1' : '0');
    ch.send_bits("P2", std::move(payload));
    const bool member = in_c0[std::size_t(u)] != 0;
    ch.send_bit("P1", member);
    if (member)
      lo = mid;  // true color 0
    else
      hi = mid;  // assumed color 2
  }

  SpernerRunResult result;
  result.ok = true;
  result.cell = path->cells[std::size_t(lo)];
  result.transcript = ch.take();
  return result;
}

// ---- Brouwer -> Sperner embedding ------------------------------------------------

int mu_color(std::span<const double> w, double tol) {
  if (w.empty()) throw std::invalid_argument("mu_color: empty input");
  double sum = 0.0;
  for (double v : w) sum += v;
  if (std::fabs(sum) > tol * double(w.size()) + tol)
    throw std::invalid_argument(
        "mu_color: coordinates must sum to zero (affine difference)");
  int best = 0;
  for (int i = 1; i < int(w.size()); ++i)
    if (w[std::size_t(i)] < w[std::size_t(best)]) best = i;
  return best;
}

std::pair<Vec, Vec> cross_section_coords(std::span<const double> x, int a,
                                         int b, double t_star, double tol) {
  if (int(x.size()) != a + b + 2)
    throw std::invalid_argument("cross_section_coords: dimension mismatch");
  double mass = 0.0;
  for (int i = a + 1; i < int(x.size()); ++i) mass += x[std::size_t(i)];
  if (std::fabs(mass - t_star) > tol)
    throw std::invalid_argument(
        "cross_section_coords: point is not on the separating hyperplane");
  Vec p(std::size_t(a) + 1), q(std::size_t(b) + 1);
  for (int i = 0; i <= a; ++i) p[std::size_t(i)] = x[std::size_t(i)] / (1.0 - t_star);
  for (int j = 0; j <= b; ++j)
    q[std::size_t(j)] = x[std::size_t(a + 1 + j)] / t_star;
  return {std::move(p), std::move(q)};
}

FuncPtr make_simplex_constant(int in_corners, Vec bary_value) {
  const int m = int(bary_value.size());
  return std::make_shared<LambdaFunc>(
      in_corners, m,
      [bary_value](std::span<const double>) { return bary_value; },
      [](NormKind) { return 0.0; }, "simplex_constant");
}

FuncPtr make_simplex_from_interval(const AnchorFunction& g) {
  if (g.in_dim() != 1 || g.out_dim() != 1)
    throw std::invalid_argument("make_simplex_from_interval: g must be 1-D");
  auto gp = std::make_shared<AnchorFunction>(g);
  const double lam = g.lambda();
  return std::make_shared<LambdaFunc>(
      2, 2,
      [gp](std::span<const double> q) {
        const double u[1] = {q[1]};
        const double v = gp->eval(u)[0];
        return Vec{1.0 - v, v};
      },
      [lam](NormKind) { return lam; }, "simplex_interval");
}

Vec SpernerEmbedding::h_point(const Triangulation& tri, long long cell) const {
  const int d = tri.d();
  const int k_res = tri.k();
  const int a = src.a;
  const long long m0 = k_res / 2;  // t* k = m0 + 1/2
  const auto verts = tri.cell_vertices(cell);
  std::vector<long long> massb(verts.size(), 0);
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const auto y = tri.vertex(verts[i]);
    long long s = 0;
    for (int j = a + 1; j <= d; ++j) s += y[std::size_t(j)];
    massb[i] = s;
  }
  Vec h(std::size_t(d) + 1, 0.0);
  int crossings = 0;
  for (std::size_t i = 0; i < verts.size(); ++i)
    for (std::size_t j = 0; j < verts.size(); ++j) {
      if (!(massb[i] <= m0 && massb[j] >= m0 + 1)) continue;
      const double s =
          (double(m0) + 0.5 - double(massb[i])) / double(massb[j] - massb[i]);
      const auto yu = tri.vertex(verts[i]);
      const auto yv = tri.vertex(verts[j]);
      for (int t = 0; t <= d; ++t) {
        const double cu = double(yu[std::size_t(t)]) / double(k_res);
        const double cv = double(yv[std::size_t(t)]) / double(k_res);
        h[std::size_t(t)] += cu + s * (cv - cu);
      }
      ++crossings;
    }
  if (crossings == 0)
    throw std::invalid_argument("h_point: cell does not cross the hyperplane");
  for (double& v : h) v /= double(crossings);
  return h;
}

std::pair<Vec, Vec> SpernerEmbedding::split_point(
    std::span<const double> x) const {
  return cross_section_coords(x, src.a, src.b, t_star);
}

Vec SpernerEmbedding::backmap_q(const Triangulation& tri,
                                long long cell) const {
  return split_point(h_point(tri, cell)).second;
}

SpernerEmbedding brouwer_to_sperner(const SimplexMapPair& src, int k) {
  if (src.a != src.b)
    throw std::invalid_argument("brouwer_to_sperner: requires a == b");
  if (!src.f_a || !src.f_b)
    throw std::invalid_argument("brouwer_to_sperner: null function");
  if (src.f_a->in_dim() != src.b + 1 || src.f_a->out_dim() != src.a + 1 ||
      src.f_b->in_dim() != src.a + 1 || src.f_b->out_dim() != src.b + 1)
    throw std::invalid_argument("brouwer_to_sperner: barycentric dims wrong");
  const int a = src.a, b = src.b;
  const int d = a + b + 1;
  const Triangulation tri = Triangulation::build(d, k);
  const long long n = tri.vertex_count();
  const long long m0 = k / 2;

  SpernerEmbedding emb;
  emb.src = src;
  emb.k = k;
  emb.t_star = (2.0 * double(m0) + 1.0) / (2.0 * double(k));

  // B-side mass numerator per vertex; never equals t* k by construction
  std::vector<std::int32_t> massb(std::size_t(n), 0);
  for (long long v = 0; v < n; ++v) {
    const auto y = tri.vertex(v);
    long long s = 0;
    for (int j = a + 1; j <= d; ++j) s += y[std::size_t(j)];
    massb[std::size_t(v)] = std::int32_t(s);
  }

  auto fallback_color = [&](long long v) -> int {
    const auto y = tri.vertex(v);
    const bool side_b = massb[std::size_t(v)] >= m0 + 1;
    const int first = side_b ? a + 1 : 0;
    const int last = side_b ? d : a;
    int best = -1;
    for (int i = first; i <= last; ++i)
      if (y[std::size_t(i)] > 0 &&
          (best < 0 || y[std::size_t(i)] > y[std::size_t(best)]))
        best = i;
    if (best < 0) throw std::logic_error("empty side palette");
    return best;
  };

  std::vector<std::int8_t> colors(std::size_t(n), -1);
  for (long long ci = 0; ci < tri.cell_count(); ++ci) {
    const auto verts = tri.cell_vertices(ci);
    std::int32_t lo = massb[std::size_t(verts[0])], hi = lo;
    for (auto v : verts) {
      lo = std::min(lo, massb[std::size_t(v)]);
      hi = std::max(hi, massb[std::size_t(v)]);
    }
    if (!(lo <= m0 && hi >= m0 + 1)) continue;  // cell does not cross H
    const Vec h = emb.h_point(tri, ci);
    const auto [p, q] = emb.split_point(h);
    const Vec fa = src.f_a->eval(q);
    const Vec fb = src.f_b->eval(p);
    Vec wa(std::size_t(a) + 1), wb(std::size_t(b) + 1);
    for (int i = 0; i <= a; ++i) wa[std::size_t(i)] = fa[std::size_t(i)] - p[std::size_t(i)];
    for (int j = 0; j <= b; ++j) wb[std::size_t(j)] = fb[std::size_t(j)] - q[std::size_t(j)];
    const int col_a = mu_color(wa);
    const int col_b = a + 1 + mu_color(wb);
    for (auto v : verts) {
      if (colors[std::size_t(v)] >= 0) continue;  // smaller cell already chose
      const int cand = massb[std::size_t(v)] >= m0 + 1 ? col_b : col_a;
      const auto y = tri.vertex(v);
      colors[std::size_t(v)] = std::int8_t(
          y[std::size_t(cand)] > 0 ? cand : fallback_color(v));
    }
  }
  for (long long v = 0; v < n; ++v)
    if (colors[std::size_t(v)] < 0)
      colors[std::size_t(v)] = std::int8_t(fallback_color(v));

  emb.instance.d = d;
  emb.instance.k = k;
  emb.instance.t = a + 1;
  emb.instance.split = SpernerInstance::Split::Prefix;
  emb.instance.classes.assign(std::size_t(d) + 1, {});
  for (long long v = 0; v < n; ++v)
    emb.instance.classes[std::size_t(colors[std::size_t(v)])].push_back(v);

  if (auto bad = validate_sperner(tri, emb.instance.classes))
    throw std::logic_error("brouwer_to_sperner: constructed coloring invalid at vertex " +
                           std::to_string(bad->vertex) + ": " + bad->reason);
  return emb;
}

double simplex_residual(const SimplexMapPair& src, std::span<const double> q) {
  const Vec p = src.f_a->eval(q);
  const Vec back = src.f_b->eval(p);
  return normalized_dist(back, q, NormKind::l2());
}

}  // namespace fpcc
