#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <vector>

#include "orbitred/codec.hpp"
#include "orbitred/vec.hpp"

namespace orbitred {

// Half-open box [lo, hi) in orbit coordinates.
struct Window {
  RVec lo;
  RVec hi;

  Window() = default;
  Window(RVec lo_, RVec hi_);
  static Window cube(std::size_t n, const Rational& lo, const Rational& hi);

  std::size_t dim() const noexcept { return lo.dim(); }
  Rational edge(std::size_t i) const { return hi[i] - lo[i]; }
  bool contains(const RVec& x) const;
  // x in the closed box [lo + margin, hi - margin].
  bool in_interior(const RVec& x, const Rational& margin) const;
  Window expanded(const Rational& r) const;

  friend bool operator==(const Window&, const Window&) = default;
};

struct MarkerSet {
  Rational d;
  std::vector<RVec> points;
  friend bool operator==(const MarkerSet&, const MarkerSet&) = default;
};

// Bucket grid for sup-norm neighbourhood queries.
class PointIndex {
 public:
  PointIndex(std::size_t dim, Rational cell);

  void insert(const RVec& p, std::size_t id);
  // Ids of inserted points q with rho(p, q) <= r.
  std::vector<std::size_t> within(const RVec& p, const Rational& r) const;
  // Whether some inserted point q has rho(p, q) <= r.
  bool any_within(const RVec& p, const Rational& r) const;

 private:
  struct KeyHash {
    std::size_t operator()(const std::vector<long>& k) const noexcept;
  };
  std::vector<long> key(const RVec& p) const;
  template <typename F>
  bool scan(const RVec& p, const Rational& r, F&& visit) const;

  std::size_t dim_;
  Rational cell_;
  std::unordered_map<std::vector<long>, std::vector<std::pair<std::size_t, RVec>>, KeyHash> buckets_;
};

// Scans in input order and keeps a point iff it is more than d (sup norm)
// from every point kept so far.
std::vector<RVec> greedy_discrete(const std::vector<RVec>& points, const Rational& d);

// Seeded rotated Halton sequence in the window, exact rationals.
class HaltonSequence {
 public:
  HaltonSequence(const Window& window, std::uint64_t seed);
  RVec next();

 private:
  Window window_;
  std::vector<Rational> shift_;
  std::uint64_t index_;
};

// First closed sub-box point of `box` (a closed box [lo, hi]) not within d of
// any marker, if any. Exact: the returned point is the centre of a cell of the
// arrangement of marker cubes, hence more than d from every marker.
std::optional<RVec> find_uncovered(const RVec& box_lo, const RVec& box_hi, const std::vector<RVec>& markers,
                                   const Rational& d);

struct MarkerBuildStats {
  std::size_t candidates = 0;
  std::size_t from_sequence = 0;
  std::size_t hole_fills = 0;
};

MarkerSet build_marker_set(const Window& window, const Rational& d, std::uint64_t seed,
                           MarkerBuildStats* stats = nullptr);

struct MarkerReport {
  bool discrete = true;
  bool covering = true;
  std::size_t pairs_checked = 0;
  std::size_t audit_points = 0;
  std::size_t discreteness_violations = 0;
  std::size_t covering_violations = 0;
  std::vector<std::pair<std::size_t, std::size_t>> close_pairs;  // witnesses, capped
  std::vector<RVec> uncovered;                                   // witnesses, capped
};

// Discreteness over all pairs; covering over the audit grid lo + (d/2) Z^n
// restricted to points at distance >= d from the window boundary.
MarkerReport verify_marker(const Window& window, const MarkerSet& markers);

void to_json(json& j, const Window& w);
void from_json(const json& j, Window& w);
void to_json(json& j, const MarkerSet& m);
void from_json(const json& j, MarkerSet& m);
void to_json(json& j, const MarkerReport& r);

}  // namespace orbitred
