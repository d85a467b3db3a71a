#pragma once

#include <vector>

#include "orbitred/region.hpp"

namespace orbitred {

// Scales d_1 < d_2 < ... < d_N with d_{k+1} = G d_k. Level k uses separation
// s_k = d_k / (4N); with at most N - 2 existing grids this always leaves an
// admissible shift among the 2N + 1 candidates of the orthogonal builder.
struct Schedule {
  Rational epsilon;
  std::vector<Rational> d;
  Integer growth = 1;
  Rational separation_fraction;

  std::size_t levels() const noexcept { return d.size(); }
  // Levels are 1-based throughout.
  const Rational& scale(std::size_t k) const { return d.at(k - 1); }
  Rational separation(std::size_t k) const { return separation_fraction * scale(k); }
  // 24 (d_1 + ... + d_{k-1}) + 2 epsilon.
  Rational required_separation(std::size_t k) const;
  RegionConfig region_config(std::size_t k, std::size_t dim) const;
};

// Raises UnsatisfiableConstraints unless d is strictly increasing, the
// separation fraction is 1/(4N), 0 < epsilon <= d_1, and every level k >= 2
// has separation(k) > required_separation(k).
void validate_schedule(const Schedule& s);

Schedule make_schedule(const Rational& base, std::size_t levels, const Rational& epsilon);

void to_json(json& j, const Schedule& s);
void from_json(const json& j, Schedule& s);

}  // namespace orbitred
