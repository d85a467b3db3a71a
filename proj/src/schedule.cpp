#include "orbitred/schedule.hpp"

namespace orbitred {

Rational Schedule::required_separation(std::size_t k) const {
  Rational sum = 0;
  for (std::size_t l = 1; l < k; ++l) sum += scale(l);
  return 24 * sum + 2 * epsilon;
}

RegionConfig Schedule::region_config(std::size_t k, std::size_t dim) const {
  RegionConfig c = default_region_config(dim, scale(k), epsilon);
  c.separation = separation(k);
  return c;
}

void validate_schedule(const Schedule& s) {
  auto bad = [](const std::string& m) { fail(ErrorCode::UnsatisfiableConstraints, "schedule: " + m); };
  if (s.d.empty()) bad("needs at least one level");
  if (!(s.epsilon > 0)) bad("epsilon must be positive");
  if (!(s.d[0] > 0)) bad("d_1 must be positive");
  if (s.epsilon > s.d[0]) bad("epsilon exceeds d_1");
  if (s.separation_fraction != make_rational(1, 4 * static_cast<long>(s.levels())))
    bad("separation fraction must be 1/(4N)");
  for (std::size_t k = 2; k <= s.levels(); ++k) {
    if (!(s.scale(k) > s.scale(k - 1))) bad("scales must increase strictly");
    if (!(s.separation(k) > s.required_separation(k)))
      bad("level " + std::to_string(k) + " separation " + to_string(s.separation(k)) + " does not exceed " +
          to_string(s.required_separation(k)));
  }
}

namespace {
Schedule with_growth(const Rational& base, std::size_t levels, const Rational& epsilon, const Integer& g) {
  Schedule s;
  s.epsilon = epsilon;
  s.growth = g;
  s.separation_fraction = make_rational(1, 4 * static_cast<long>(levels));
  Rational d = base;
  for (std::size_t k = 0; k < levels; ++k) {
    s.d.push_back(d);
    d *= Rational(g);
  }
  return s;
}

bool satisfied(const Schedule& s) {
  for (std::size_t k = 2; k <= s.levels(); ++k)
    if (!(s.separation(k) > s.required_separation(k))) return false;
  return true;
}
}  // namespace

Schedule make_schedule(const Rational& base, std::size_t levels, const Rational& epsilon) {
  if (levels == 0) fail(ErrorCode::UnsatisfiableConstraints, "schedule: levels must be at least 1");
  if (!(base > 0) || !(epsilon > 0) || epsilon > base)
    fail(ErrorCode::UnsatisfiableConstraints, "schedule: need 0 < epsilon <= base");
  if (levels == 1) {
    auto s = with_growth(base, 1, epsilon, 2);
    validate_schedule(s);
    return s;
  }
  // The left side of each inequality grows like G^(k-1) and the right like
  // G^(k-2), so once satisfied it stays satisfied: double, then bisect.
  Integer hi = 2;
  while (!satisfied(with_growth(base, levels, epsilon, hi))) {
    hi *= 2;
    if (hi > Integer(1) << 40) fail(ErrorCode::UnsatisfiableConstraints, "schedule: no growth factor found");
  }
  Integer lo = hi / 2;  // unsatisfied or < 2
  if (lo < 2) lo = 1;
  while (hi - lo > 1) {
    Integer mid = (lo + hi) / 2;
    if (satisfied(with_growth(base, levels, epsilon, mid)))
      hi = mid;
    else
      lo = mid;
  }
  auto s = with_growth(base, levels, epsilon, hi);
  validate_schedule(s);
  return s;
}

void to_json(json& j, const Schedule& s) {
  json levels = json::array();
  for (std::size_t k = 1; k <= s.levels(); ++k)
    levels.push_back({{"level", k},
                      {"d", s.scale(k)},
                      {"separation", s.separation(k)},
                      {"required", k >= 2 ? json(s.required_separation(k)) : json(nullptr)}});
  j = json{{"epsilon", s.epsilon},
           {"d", s.d},
           {"growth", to_string(Rational(s.growth))},
           {"separation_fraction", s.separation_fraction},
           {"levels", levels}};
}

void from_json(const json& j, Schedule& s) {
  s.epsilon = j.at("epsilon").get<Rational>();
  s.d = j.at("d").get<std::vector<Rational>>();
  Rational g = j.at("growth").get<Rational>();
  s.growth = g.get_num();
  s.separation_fraction = j.at("separation_fraction").get<Rational>();
  validate_schedule(s);
}

}  // namespace orbitred
