#include <doctest.h>

#include "orbitred/codec.hpp"
#include "orbitred/group.hpp"
#include "orbitred/linalg.hpp"
#include "support.hpp"

using namespace orbitred;
using orbitred::testing::Gen;

namespace {
Rational q(const char* s) { return parse_rational(s); }
GroupElement el(std::initializer_list<Rational> t, std::initializer_list<Rational> r) {
  return {TorusVec(t), RVec(r)};
}
}  // namespace

TEST_CASE("rational parsing and printing") {
  CHECK(q("3/6") == make_rational(1, 2));
  CHECK(q("-0.25") == make_rational(-1, 4));
  CHECK(q("7") == 7);
  CHECK(to_string(q("6/4")) == "3/2");
  CHECK(to_string(q("5")) == "5/1");
  CHECK(to_string(q("-2/4")) == "-1/2");
  CHECK_THROWS_AS(q("1/0"), Error);
  CHECK_THROWS_AS(q("abc"), Error);
  CHECK_THROWS_AS(q("1/-2"), Error);
  CHECK(floor_of(q("-1/2")) == -1);
  CHECK(frac(q("-1/4")) == q("3/4"));
}

TEST_CASE("seminorm") {
  CHECK(seminorm(el({q("0.3")}, {2, -5})) == 5);
  CHECK(seminorm(GroupElement::identity(2, 3)) == 0);
  CHECK(seminorm(el({q("0.9")}, {})) == 0);
}

TEST_CASE("group_add") {
  CHECK(group_add(el({q("0.7")}, {1}), el({q("0.6")}, {2})) == el({q("0.3")}, {3}));
  Gen gen(7);
  for (int i = 0; i < 100; ++i) {
    auto g = gen.element(2, 3);
    CHECK(group_add(g, GroupElement::identity(2, 3)) == g);
    CHECK(group_add(g, group_inverse(g)) == GroupElement::identity(2, 3));
  }
  CHECK_THROWS_AS(group_add(el({0}, {1}), el({}, {1})), Error);
}

TEST_CASE("rho_group") {
  CHECK(rho_group(el({0}, {3}), el({0}, {1})) == 2);
  auto g = el({q("1/3")}, {q("7/2"), -1});
  CHECK(rho_group(g, g) == 0);
  CHECK(rho_group(el({q("0.1")}, {4}), el({q("0.8")}, {4})) == 0);
  CHECK_THROWS_AS(rho_group(el({}, {1}), el({}, {1, 2})), Error);
}

TEST_CASE("group laws are exact on random triples") {
  Gen gen(11);
  for (int i = 0; i < 10000; ++i) {
    auto a = gen.element(2, 2), b = gen.element(2, 2), c = gen.element(2, 2);
    REQUIRE(group_add(group_add(a, b), c) == group_add(a, group_add(b, c)));
    REQUIRE(group_add(a, b) == group_add(b, a));
    REQUIRE(seminorm(group_add(a, b)) <= seminorm(a) + seminorm(b));
    REQUIRE(rho_group(a, b) == rho_group(b, a));
    REQUIRE(rho_group(a, c) <= rho_group(a, b) + rho_group(b, c));
  }
}

TEST_CASE("torus reduction is idempotent") {
  Gen gen(3);
  for (int i = 0; i < 200; ++i) {
    std::vector<Rational> raw{gen.rational(5, 7), gen.rational(5, 7)};
    TorusVec once(raw);
    TorusVec twice(std::vector<Rational>(once.coords().begin(), once.coords().end()));
    CHECK(once == twice);
    for (const auto& c : once.coords()) CHECK((c >= 0 && c < 1));
  }
}

TEST_CASE("RVec equality pads with zeros") {
  CHECK(RVec{1, 2} == RVec{1, 2, 0});
  CHECK_FALSE(RVec{1, 2} == RVec{1, 2, 1});
}

TEST_CASE("linear algebra over Q") {
  std::vector<RVec> vs{RVec{1, 1, 0}, RVec{2, 2, 0}, RVec{0, 0, 1}};
  CHECK(linalg::rank(vs) == 2);
  CHECK(linalg::in_span(RVec{3, 3, 5}, vs));
  CHECK_FALSE(linalg::in_span(RVec{1, 0, 0}, vs));
  std::vector<RVec> basis{RVec{1, 1}, RVec{0, 2}};
  auto c = linalg::solve_combination(RVec{q("1/2"), q("3/2")}, basis);
  REQUIRE(c);
  CHECK((*c)[0] == q("1/2"));
  CHECK((*c)[1] == q("1/2"));
}

TEST_CASE("json codec round-trips exact values") {
  Gen gen(5);
  for (int i = 0; i < 50; ++i) {
    auto g = gen.element(2, 3);
    json j = g;
    CHECK(j.get<GroupElement>() == g);
    CHECK(json::parse(j.dump()).get<GroupElement>() == g);
  }
  json j = RVec{q("1/2"), q("-3")};
  CHECK(j.dump() == R"(["1/2","-3/1"])");
}
