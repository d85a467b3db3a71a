#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "orbitred/codec.hpp"
#include "orbitred/marker.hpp"

namespace orbitred {

// Half-open box [lo, hi). Torus coordinates never appear in bounds.
struct Rect {
  RVec lo;
  RVec hi;
  std::size_t id = 0;

  std::size_t dim() const noexcept { return lo.dim(); }
  Rational edge(std::size_t i) const { return hi[i] - lo[i]; }
  bool contains(const RVec& x) const;
  bool intersects(const Rect& other) const;
  bool inside(const Window& w) const;
  RVec center() const;
  Rational volume() const;
  std::optional<Rect> clip(const Window& w) const;

  friend bool operator==(const Rect& a, const Rect& b) { return a.lo == b.lo && a.hi == b.hi && a.id == b.id; }
};

// Finite disjoint union of rects.
struct Polyhedron {
  std::vector<Rect> rects;

  bool contains(const RVec& x) const;
  // Coordinates on `axis` where membership changes across the hyperplane
  // x_axis = c, i.e. the i-faces (possibly disconnected), ascending.
  std::vector<Rational> face_coords(std::size_t axis) const;
};

// Bucket grid over rects for point location.
class RectLocator {
 public:
  RectLocator() = default;
  RectLocator(const std::vector<Rect>& rects, std::size_t dim);
  std::optional<std::size_t> locate(const RVec& x) const;

 private:
  std::vector<Rect> rects_;
  std::size_t dim_ = 0;
  Rational cell_;
  std::map<std::vector<long>, std::vector<std::size_t>> buckets_;
};

// Rects partitioning a window; `region[k]` is the region of rect k, so a
// region may be a union of several rects.
struct RegionPartition {
  Window window;
  std::vector<Rect> rects;
  std::vector<std::size_t> region;

  std::size_t region_count() const;
  std::vector<std::size_t> rects_of_region(std::size_t r) const;
};

struct PartitionAudit {
  bool disjoint = true;
  bool inside_window = true;
  bool covers = true;  // volumes sum to the window volume
  std::size_t rect_count = 0;
  std::vector<std::pair<std::size_t, std::size_t>> overlapping;  // capped
  bool ok() const { return disjoint && inside_window && covers; }
};
PartitionAudit audit_partition(const RegionPartition& p);

// Coordinates on `axis` of rect boundaries, excluding the window's own
// boundary, ascending and unique. A superset of the regions' i-faces.
std::vector<Rational> boundary_coords(const RegionPartition& p, std::size_t axis);

struct RegionConfig {
  Rational d;
  Rational epsilon;
  Rational D;
  Rational delta1;
  Rational delta2;
  std::size_t b = 1;
  Rational separation;
};

// Least constants satisfying the checked inequalities for dimension n:
// D = d ceil(d/eps), delta1 = 20 * 2^(3n+1) * D, delta2 = 4 delta1 + D.
RegionConfig default_region_config(std::size_t n, const Rational& d, const Rational& epsilon);
// eps <= d, D >= d ceil(d/eps), delta1 >= 20 * 2^(3n+1) * D, delta2 > 4 delta1.
void validate_config(const RegionConfig& cfg, std::size_t n);

// Cubes [m - delta1, m + delta1)^n around markers and the atoms of their
// membership arrangement.
struct Arrangement {
  std::vector<RVec> markers;
  std::vector<Rect> cubes;                    // cubes[k] belongs to markers[k]
  std::vector<Polyhedron> atoms;              // union = union of cubes
  std::vector<std::vector<std::size_t>> membership;  // cube ids per atom, ascending
};

// Atoms of an arbitrary family of half-open boxes, ordered by first cell.
Arrangement arrangement_of(std::vector<RVec> markers, std::vector<Rect> cubes);

Arrangement initial_rect_regions(const MarkerSet& markers, const Rational& delta1, const Window& window);

// Colour classes by iterated greedy_discrete at distance delta2: colour 0 is a
// maximal delta2-discrete subset, colour 1 one of the rest, and so on.
std::vector<std::size_t> coloring(const std::vector<RVec>& markers, const Rational& delta2);

struct FaceGapAudit {
  std::size_t atoms_checked = 0;
  std::size_t face_pairs_checked = 0;
  std::size_t violations = 0;
  std::optional<Rational> min_gap;  // least distance between distinct parallel faces of one atom
  Rational max_shift = 0;
  Rational shift_budget = 0;
  bool cubes_grow = true;  // each original cube is inside its adjusted cube
  bool ok(const Rational& D) const { return violations == 0 && cubes_grow && max_shift <= shift_budget && (!min_gap || *min_gap >= D); }
};

struct AdjustedArrangement {
  Arrangement arrangement;  // atoms of the shifted cubes
  std::vector<Rect> original_cubes;
  std::vector<std::size_t> order;  // processing order of cubes
  FaceGapAudit audit;
};

// Face shifting: cubes processed by colour then index; each face moves away
// from its centre by the least multiple of 2D keeping it >= D from every
// parallel face of processed cubes whose markers are within 5 delta1.
AdjustedArrangement adjust_faces(const Arrangement& arr, const RegionConfig& cfg, const std::vector<std::size_t>& colors);

FaceGapAudit audit_face_gaps(const Arrangement& adjusted, const std::vector<Rect>& original, const RegionConfig& cfg);

// Refinement of P by the hyperplanes through its faces. Output rects are
// ordered lexicographically by lo (last axis slowest).
std::vector<Rect> cut_polyhedron(const Polyhedron& p);

// Number of pieces along an edge of length l: least k >= 1 with l - k d < d.
Integer subdivision_count(const Rational& l, const Rational& d);
std::vector<Rect> subdivide_rect(const Rect& r, const Rational& d, const Rational& epsilon);

struct SquareStats {
  std::size_t markers = 0;
  std::size_t colors = 0;
  std::size_t atoms = 0;
  std::size_t cut_rects = 0;
  std::size_t marker_attempts = 0;
  Rational max_shift = 0;
};

// Nearly-square partition of a window, kept lazily as the cut rects of the
// adjusted arrangement together with the subdivision rule.
class SquarePartition {
 public:
  struct Piece {
    std::size_t cut = 0;
    std::vector<Integer> index;
    friend bool operator==(const Piece&, const Piece&) = default;
  };

  SquarePartition(Window window, RegionConfig cfg, std::vector<Rect> cut_rects, FaceGapAudit face_gaps, SquareStats stats);

  const Window& window() const noexcept { return window_; }
  const RegionConfig& config() const noexcept { return cfg_; }
  const std::vector<Rect>& cut_rects() const noexcept { return cuts_; }
  const FaceGapAudit& face_gaps() const noexcept { return face_gaps_; }
  const SquareStats& stats() const noexcept { return stats_; }

  // Piece containing x; x must lie in the window.
  Piece locate(const RVec& x) const;
  Rect piece_rect(const Piece& p) const;
  Rational piece_length(std::size_t cut, std::size_t axis) const;
  // Faces of the pieces on `axis` with coordinates in [lo, hi].
  std::vector<Rational> face_coords(std::size_t axis, const Rational& lo, const Rational& hi) const;

  // Pieces meeting the window, clipped to it; one region per piece.
  RegionPartition materialize() const;

 private:
  Window window_;
  RegionConfig cfg_;
  std::vector<Rect> cuts_;
  std::vector<std::vector<Integer>> counts_;
  FaceGapAudit face_gaps_;
  SquareStats stats_;
  RectLocator locator_;
};

SquarePartition build_square_partition(const Window& window, const RegionConfig& cfg, std::uint64_t seed);

// Existing face coordinates on `axis` within [lo, hi].
using FaceOracle = std::function<std::vector<Rational>(std::size_t axis, const Rational& lo, const Rational& hi)>;

// Grid of pitch 10d with origin `offset`; every grid hyperplane is moved by
// the first admissible shift in 0, +2s, -2s, +4s, ... with |shift| <= d/2,
// admissible meaning more than s from every existing parallel face.
// Shifted coordinates are computed on demand and cached.
class ShiftedGrid {
 public:
  ShiftedGrid(RVec offset, Rational d, Rational s, FaceOracle existing);

  std::size_t dim() const noexcept { return offset_.dim(); }
  const Rational& d() const noexcept { return d_; }
  const Rational& separation() const noexcept { return s_; }
  Rational face(std::size_t axis, const Integer& k) const;
  Rational shift(std::size_t axis, const Integer& k) const { return face(axis, k) - base(axis, k); }
  std::vector<Integer> cell_index(const RVec& x) const;
  Rect cell(const std::vector<Integer>& index) const;
  // Grid face indices whose shifted coordinate lies in [lo, hi].
  std::vector<Integer> faces_in(std::size_t axis, const Rational& lo, const Rational& hi) const;

 private:
  Rational base(std::size_t axis, const Integer& k) const;
  RVec offset_;
  Rational d_;
  Rational s_;
  FaceOracle existing_;
  mutable std::vector<std::map<Integer, Rational>> cache_;
};

// Seeded grid offset in [0, 10d)^n.
RVec grid_offset(std::size_t n, const Rational& d, std::uint64_t seed);

FaceOracle faces_of(const std::vector<RegionPartition>& partitions);

struct OrthogonalResult {
  RegionPartition partition;
  ShiftedGrid grid;
};

// Fresh 10d grid over the window, orthogonal to `existing` at separation
// cfg.separation. Raises PreconditionViolated if more than b partitions have
// faces in the window.
OrthogonalResult orthogonal_partition(const Window& window, const std::vector<RegionPartition>& existing,
                                      const Rational& d, std::size_t b, const RegionConfig& cfg, std::uint64_t seed);

struct SeparationAudit {
  std::size_t pairs_checked = 0;
  std::size_t violations = 0;
  std::optional<Rational> min_distance;
  bool ok(const Rational& s) const { return violations == 0 && (!min_distance || *min_distance > s); }
};
// Every boundary coordinate of `fresh` against every parallel boundary
// coordinate of each existing partition.
SeparationAudit audit_separation(const RegionPartition& fresh, const std::vector<RegionPartition>& existing,
                                 const Rational& s);

struct EdgeAudit {
  std::size_t interior_rects = 0;
  std::size_t violations = 0;
  std::optional<Rational> min_edge, max_edge;
  bool ok() const { return violations == 0; }
};
// Edges of rects lying fully inside the window (not touching its boundary)
// against [lo, hi) or [lo, hi] when `closed_hi`.
EdgeAudit audit_edges(const RegionPartition& p, const Rational& lo, const Rational& hi, bool closed_hi);

void to_json(json& j, const Rect& r);
void from_json(const json& j, Rect& r);
void to_json(json& j, const RegionPartition& p);
void from_json(const json& j, RegionPartition& p);
void to_json(json& j, const RegionConfig& c);
void from_json(const json& j, RegionConfig& c);
void to_json(json& j, const FaceGapAudit& a);
void to_json(json& j, const PartitionAudit& a);
void to_json(json& j, const SeparationAudit& a);
void to_json(json& j, const EdgeAudit& a);

}  // namespace orbitred
