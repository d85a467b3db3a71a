#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <tuple>
#include <vector>

#include "orbitred/action.hpp"
#include "orbitred/schedule.hpp"

namespace orbitred {

enum class AuditLevel { Fast, Full };

// One audited inequality, worst observed value against the bound.
struct Inequality {
  std::string clause;
  std::size_t i = 0;  // level whose step was audited (0 when not tied to one)
  std::size_t j = 0;
  std::string relation;  // ">", ">=", "<=", "<"
  std::optional<Rational> lhs;
  Rational rhs;
  std::size_t checks = 0;
  std::size_t violations = 0;
  // Unenforced clauses are reported only; see Hierarchy.
  bool enforced = true;
  bool ok() const { return violations == 0; }
};

struct Certificate {
  std::vector<Inequality> items;
  bool ok() const;
  // First failed enforced clause, if any.
  const Inequality* first_failure() const;
};

// The partitions R[i][j], 1 <= j <= i <= N, over one orbit window, built
// lazily per slice. The window lives in the real coordinates of the orbit;
// the E_j slice of x fixes every coordinate past the first min(j, dim).
//
// R[i][i] is a nearly-square partition at scale d_i. For j < i, R~[i][j] is a
// shifted 10 d_j grid on the slice, orthogonal to R~[k][j] for j < k < i, and
// x R[i][j] y iff the centres of their R~[i][j] cells are R[i][j+1]-related.
// Unwinding, the class of x is the R[i][i] piece reached by the chain
// x -> c_j -> c_{j+1} -> ... of cell centres.
//
// Not thread-safe: lookups fill caches.
class Hierarchy {
 public:
  struct ClassId {
    std::vector<Rational> slice;  // fixed coordinates of the level-i slice
    SquarePartition::Piece piece;
    friend bool operator==(const ClassId&, const ClassId&) = default;
  };

  Hierarchy(Window window, Schedule schedule, std::uint64_t seed);
  Hierarchy(const Hierarchy&) = delete;
  Hierarchy& operator=(const Hierarchy&) = delete;
  Hierarchy(Hierarchy&&) = default;
  Hierarchy& operator=(Hierarchy&&) = default;

  const Window& window() const noexcept { return window_; }
  const Schedule& schedule() const noexcept { return schedule_; }
  std::uint64_t seed() const noexcept { return seed_; }
  std::size_t levels() const noexcept { return schedule_.levels(); }
  std::size_t dim() const noexcept { return window_.dim(); }
  std::size_t geometry_dim(std::size_t j) const { return std::min(j, dim()); }
  // Margin d_N.
  bool in_safe_interior(const RVec& x) const;

  const SquarePartition& diagonal(std::size_t i, const RVec& x) const;
  const ShiftedGrid& tilde(std::size_t i, std::size_t j, const RVec& x) const;
  // x with its first min(j, dim) coordinates moved to the centre of its
  // R~[i][j] cell.
  RVec step(std::size_t i, std::size_t j, const RVec& x) const;
  ClassId class_of(std::size_t i, std::size_t j, const RVec& x) const;
  bool related(std::size_t i, std::size_t j, const RVec& x, const RVec& y) const;
  // The R[i][i] piece reached from x by the chain, extended by x's slice
  // coordinates; its midpoint is the level-i centre.
  Rect class_rect(std::size_t i, const RVec& x) const;
  RVec center(std::size_t i, const RVec& x) const;

  // R[i][j] on the slice of x, restricted to `box` (first min(j, dim) axes).
  RegionPartition materialize(std::size_t i, std::size_t j, const RVec& x, const Window& box) const;

  // Exact checks of the induction hypotheses on boxes around each point.
  Certificate certify(const std::vector<RVec>& points, AuditLevel level) const;

  std::size_t cached_slices() const noexcept { return diagonals_.size() + grids_.size(); }

 private:
  using SliceKey = std::tuple<std::size_t, std::size_t, std::vector<Rational>>;
  std::vector<Rational> slice_of(std::size_t j, const RVec& x) const;
  Window slice_window(std::size_t j) const;
  std::uint64_t slice_seed(const char* what, std::size_t i, std::size_t j, const std::vector<Rational>& key) const;

  Window window_;
  Schedule schedule_;
  std::uint64_t seed_;
  mutable std::map<SliceKey, std::unique_ptr<SquarePartition>> diagonals_;
  mutable std::map<SliceKey, std::unique_ptr<ShiftedGrid>> grids_;
};

struct BuiltHierarchy {
  Hierarchy hierarchy;
  Certificate certificate;
};

// Builds the hierarchy and audits it around the window centre and seeded
// interior points (2 for fast, 8 for full). Raises AuditFailed naming the
// first violated enforced clause.
BuiltHierarchy build_hierarchy(const Window& window, const Schedule& schedule, std::uint64_t seed,
                               AuditLevel level = AuditLevel::Fast);

// Midpoint of a single-rect region, preceded by `torus_dim` zero torus
// coordinates (the selector). Raises RegionNotRect when the region's rects do
// not form one box.
RVec center_of_region(const RegionPartition& p, std::size_t region, std::size_t torus_dim);

// Injective encoding of a finite list of rationals as one dyadic rational:
// each entry becomes a sign bit and Elias-gamma codes of |num| + 1 and den,
// the codes are concatenated (prefix-free, so the list is recoverable) and a
// final 1 is appended before reading the bits as a binary fraction.
Rational encode_rationals(const std::vector<Rational>& values);
std::vector<Rational> decode_rationals(const Rational& code);

struct ReductionTrace {
  std::string point_id;
  std::vector<OrbitPoint> phi;
  std::vector<Rational> encoded;
};

// phi_n(x) for n = 1..N: real part from the level-n centre, the first
// min(n, beta) torus coordinates zeroed. Raises PointOutsideSafeInterior.
ReductionTrace trace(const OrbitPoint& x, const Hierarchy& h, std::string point_id = {});

// Least 1-based n with a_m = b_m for all m >= n, or none. Raises
// LengthMismatch.
std::optional<std::size_t> eventual_agreement(const ReductionTrace& a, const ReductionTrace& b);

struct ClassLabel {
  std::size_t beta = 0;
  std::size_t gamma = 0;
  friend bool operator==(const ClassLabel&, const ClassLabel&) = default;
};
ReductionTrace tag_trace(const ReductionTrace& t, const ClassLabel& label);

// One hierarchy per orbit, seeded from the orbit's key so the construction is
// a function of the orbit alone.
class WitnessPipeline {
 public:
  WitnessPipeline(FreeQuotientModel model, Window window, Schedule schedule, std::uint64_t seed,
                  AuditLevel audit = AuditLevel::Fast);

  const FreeQuotientModel& model() const noexcept { return model_; }
  const Window& window() const noexcept { return window_; }
  const Schedule& schedule() const noexcept { return schedule_; }
  ClassLabel label() const { return {model_.beta(), model_.gamma()}; }

  const Hierarchy& hierarchy_for(const RVec& key) const;
  const Certificate& certificate_for(const RVec& key) const;
  ReductionTrace trace(const RVec& point, std::string point_id = {}) const;
  std::size_t orbits() const noexcept { return orbits_.size(); }

 private:
  FreeQuotientModel model_;
  Window window_;
  Schedule schedule_;
  std::uint64_t seed_;
  AuditLevel audit_;
  mutable std::map<std::vector<Rational>, std::unique_ptr<BuiltHierarchy>> orbits_;
};

void to_json(json& j, const Inequality& q);
void to_json(json& j, const Certificate& c);
void to_json(json& j, const ReductionTrace& t);
void to_json(json& j, const ClassLabel& l);

}  // namespace orbitred
