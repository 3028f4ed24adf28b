#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "fpcc/functions.hpp"
#include "fpcc/transcript.hpp"

namespace fpcc {

// Freudenthal (Kuhn) subdivision of the d-simplex at resolution k.
// Vertices are the lattice points y in Z^{d+1}, y_i >= 0, sum y_i = k
// (barycentric numerators), with ids assigned in ascending lexicographic
// order of the tuple; this order is bit-exact across platforms. Cells are
// identified by a base vertex plus a permutation of the d elementary
// moves M_a = e_a - e_{a-1}, and are indexed in (base id, permutation)
// order.
class Triangulation {
 public:
  // throws on k^d > 1e8 (size overflow)
  static Triangulation build(int d, int k);

  int d() const { return d_; }
  int k() const { return k_; }
  long long vertex_count() const { return (long long)nverts_; }
  long long cell_count() const { return (long long)cells_.size(); }

  std::span<const std::int32_t> vertex(long long vid) const;
  long long vid_from_coords(std::span<const std::int32_t> y) const;
  long long corner_vid(int i) const;

  // the d+1 vertex ids of a cell, path order w_0..w_d
  std::span<const std::int32_t> cell_vertices(long long ci) const;
  // neighbor across the facet omitting w_j, or -1 on the boundary
  long long neighbor(long long ci, int j) const;
  // base lattice point and move permutation of a cell
  std::vector<int> cell_base(long long ci) const;
  std::vector<int> cell_perm(long long ci) const;

  // {i : y_i > 0} of a vertex
  std::vector<int> support(long long vid) const;

 private:
  Triangulation() = default;
  int d_ = 0, k_ = 0;
  std::size_t nverts_ = 0;
  std::vector<std::int32_t> vert_coords_;  // nverts * (d+1)
  std::vector<std::int32_t> key_to_vid_;   // dense (k+1)^d lookup
  struct CellRef {
    std::int32_t base;
    std::uint32_t perm;  // 4 bits per move, first move in the high nibbles
  };
  std::vector<CellRef> cells_;
  std::vector<std::int32_t> cell_verts_;  // ncells * (d+1)
  std::vector<std::int32_t> neighbors_;   // ncells * (d+1), -1 = boundary

  std::uint64_t coords_key(std::span<const std::int32_t> y) const;
  long long cell_index(std::int32_t base, std::uint32_t perm) const;
};

struct Violation {
  long long vertex = -1;
  std::string reason;
};

// A coloring split across players: classes[i] lists the vertex ids of
// color i. `t` is the size of player A's palette. The split convention is
// carried explicitly: Prefix gives A colors {0..t-1}; Surplus gives A the
// middle colors {1..d-1} (the Sp^{d-1} form the binary-search protocol
// needs); Three is the d=2 one-class-per-player broadcast problem.
struct SpernerInstance {
  enum class Split { Prefix, Surplus, Three };
  int d = 1, k = 1, t = 1;
  Split split = Split::Prefix;
  std::vector<std::vector<long long>> classes;
};

// Checks the partition, corner colors, and the face-support condition;
// returns the first violation in vertex-id order.
std::optional<Violation> validate_sperner(
    const Triangulation& tri,
    const std::vector<std::vector<long long>>& classes);

// Total coloring array from classes; classes must already validate.
std::vector<std::int8_t> coloring_from_classes(
    const Triangulation& tri,
    const std::vector<std::vector<long long>>& classes);

// Uniformly random valid Sperner coloring (each vertex gets a uniform
// color from its minimal face support), returned as classes.
std::vector<std::vector<long long>> random_valid_coloring(
    const Triangulation& tri, std::uint64_t seed);

// c' = c mod d: color d becomes 0, everything else unchanged.
std::vector<std::int8_t> merge_coloring(const std::vector<std::int8_t>& c,
                                        int d);

// Exhaustive scan; ascending cell indices.
std::vector<long long> brute_force_panchromatic(
    const Triangulation& tri, const std::vector<std::int8_t>& colors);

// Path-and-cycle graph over cells induced by a surplus d-coloring: cells
// sharing a c'-panchromatic facet are adjacent, and the two terminals
// collect the panchromatic facets lying on F_0 (the facet of the simplex
// avoiding v_d) and on F_d (avoiding v_0).
struct SurplusGraph {
  static constexpr long long kTerm0 = -1;
  static constexpr long long kTermD = -2;
  struct Port {
    int facet = -1;         // which vertex of the cell the facet omits
    long long to = kTerm0;  // cell index or terminal
  };
  std::vector<std::array<Port, 2>> ports;  // per cell
  std::vector<std::uint8_t> degree;        // 0 or 2
  std::vector<std::pair<long long, int>> f0_edges, fd_edges;  // sorted
  std::optional<Violation> defect;  // structural inconsistency found
};

SurplusGraph build_surplus_graph(const Triangulation& tri,
                                 const std::vector<std::int8_t>& merged);

// A chain of cells from F_0 to F_d; edges[i] is the c'-panchromatic facet
// entered before cells[i] (edges.size() == cells.size() + 1). Each edge
// records the facet's unique c'-color-0 vertex.
struct SurplusPath {
  struct Edge {
    long long cell = -1;  // owning cell on the path
    int facet = -1;
    long long zero_vertex = -1;
  };
  std::vector<long long> cells;
  std::vector<Edge> edges;
};

// Deterministic sweep from f_0's incident edges in lexicographic order;
// the first walk that reaches f_d is the path (one always exists for a
// valid surplus coloring). `merged` is needed to tag each edge's unique
// c'-color-0 vertex.
std::optional<SurplusPath> surplus_path(const Triangulation& tri,
                                        const SurplusGraph& graph,
                                        const std::vector<std::int8_t>& merged);

struct SpernerRunResult {
  bool ok = false;
  long long cell = -1;
  std::optional<Violation> violation;
  Transcript transcript;
};

// Theorem-d4 binary search. A holds color classes {1..d-1}, B holds
// {0, d}; A reconstructs the merged coloring alone, builds the surplus
// path, and the players binary-search the path edges. Each round costs
// ceil(log2 r) + ceil(log2 n) + 1 bits.
SpernerRunResult run_surplus_protocol(const Triangulation& tri,
                                      const SpernerInstance& inst);

// Remark-sp0 case: A holds colors {0..d-1}, infers B's class as the
// complement, and solves locally; the transcript is one cell id.
SpernerRunResult run_single_missing_color_protocol(const Triangulation& tri,
                                                   const SpernerInstance& inst);

// Three-player broadcast version for d = 2: the holder of C_1 builds the
// surplus path alone and broadcasts vertex ids; the holder of C_0 answers
// membership bits.
SpernerRunResult run_three_player_protocol(const Triangulation& tri,
                                           const SpernerInstance& inst);

// Upper bound asserted on every run: (ceil(log2 r)+1) * (ceil(log2 r) +
// ceil(log2 n) + 1) with r the path length and n the vertex count.
long long surplus_bits_bound(long long path_len, long long nverts);

// ---- Brouwer -> Sperner embedding (Lemma ftocol machinery) ------------------

// Color index from barycentric-difference coordinates: w = sum lambda_i v_i
// with sum lambda_i = 0. Returns argmin_i lambda_i (smallest index on
// ties); mu_i = lambda_i - min_j lambda_j is then a conical representation
// of w over (v_i - center) with mu at the returned index zero.
int mu_color(std::span<const double> w, double tol = kDefaultTol);

// Point of the cross-section Delta^d on the hyperplane {B-mass = t*},
// split into (p, q) in Delta^a x Delta^b: p_i = x_i / (1 - t*),
// q_j = x_{a+1+j} / t*.
std::pair<Vec, Vec> cross_section_coords(std::span<const double> x, int a,
                                         int b, double t_star,
                                         double tol = kDefaultTol);

// Lipschitz pair on simplices, in barycentric coordinates:
// f_a: Delta^b -> Delta^a (in b+1 coords, out a+1), f_b the other way.
struct SimplexMapPair {
  int a = 1, b = 1;
  double lambda = 1.0;
  FuncPtr f_a, f_b;
};

FuncPtr make_simplex_constant(int in_corners, Vec bary_value);
// a = b = 1 wrapper: the 1-simplex is parametrized by u in [0,1] and g
// drives q = (1-u, u) -> (1-g(u), g(u)); the parametrization is an
// isometry for the normalized l2 norm, so the Lipschitz constant of g
// transfers exactly.
FuncPtr make_simplex_from_interval(const AnchorFunction& g);

struct SpernerEmbedding {
  SimplexMapPair src;
  int k = 1;
  double t_star = 0.5;
  SpernerInstance instance;  // prefix split with t = a+1

  // canonical point of a crossing cell: mean of its edge crossings with H
  Vec h_point(const Triangulation& tri, long long cell) const;
  std::pair<Vec, Vec> split_point(std::span<const double> x) const;
  // back-map of a panchromatic cell: q component of h(cell)
  Vec backmap_q(const Triangulation& tri, long long cell) const;
};

// Colors every vertex of the (a+b+1)-simplex triangulation: vertices of
// cells crossing H get the mu-rule color of f_A(q)-p (A side) or
// f_B(p)-q shifted by a+1 (B side), evaluated at the cell's canonical
// point; everything else falls back to the largest allowed barycentric
// coordinate. t* = (2*floor(k/2)+1)/(2k) keeps lattice vertices off H.
SpernerEmbedding brouwer_to_sperner(const SimplexMapPair& src, int k);

// normalized l2 residual ||f_b(f_a(q)) - q|| in barycentric coordinates
double simplex_residual(const SimplexMapPair& src, std::span<const double> q);

}  // namespace fpcc
