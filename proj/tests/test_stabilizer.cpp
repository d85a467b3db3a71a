#include <doctest.h>

#include "orbitred/hnf.hpp"
#include "orbitred/stabilizer.hpp"
#include "oracles.hpp"

using namespace orbitred;
using orbitred::testing::Gen;

namespace {
RVec v(std::initializer_list<Rational> c) { return RVec(c); }
Rational q(const char* s) { return parse_rational(s); }

StabilizerSpec half_lattice() {
  return {2, {}, {RVec::from_ints({1, 0}), RVec::from_ints({0, 1}), v({q("1/2"), q("1/2")})}};
}
StabilizerSpec diagonal_line_plus_e2() { return {3, {RVec::from_ints({1, 1, 0})}, {RVec::from_ints({0, 1, 0})}}; }
}  // namespace

TEST_CASE("validate_spec examples") {
  CHECK_NOTHROW(validate_spec(half_lattice()));
  CHECK_NOTHROW(validate_spec(diagonal_line_plus_e2()));
  try {
    validate_spec({2, {RVec::from_ints({1, 0})}, {RVec::from_ints({2, 0})}});
    FAIL("expected DependentLatticeGenerator");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DependentLatticeGenerator);
  }
  try {
    validate_spec({2, {RVec::from_ints({1, 0, 0})}, {}});
    FAIL("expected DimensionMismatch");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
}

TEST_CASE("member examples") {
  auto s = validate_spec(half_lattice());
  CHECK(member(v({q("1/2"), q("3/2")}), s));
  CHECK_FALSE(member(v({q("1/2"), 0}), s));
  CHECK(member(RVec(2), s));
  CHECK(member(RVec(3), validate_spec(diagonal_line_plus_e2())));
  CHECK(member(RVec(1), validate_spec({1, {}, {}})));
  auto d = validate_spec(diagonal_line_plus_e2());
  CHECK(member(v({q("7/3"), q("10/3"), 0}), d));
  CHECK_FALSE(member(v({q("7/3"), q("17/6"), 0}), d));
  CHECK_FALSE(member(RVec::from_ints({0, 0, 1}), d));
}

TEST_CASE("largest_subspace_basis and complementary_coords") {
  auto s = validate_spec({3, {RVec::from_ints({1, 1, 0}), RVec::from_ints({2, 2, 0}), RVec::from_ints({0, 0, 1})}, {}});
  auto u = largest_subspace_basis(s);
  REQUIRE(u.size() == 2);
  CHECK(u[0] == RVec::from_ints({1, 1, 0}));
  CHECK(u[1] == RVec::from_ints({0, 0, 1}));
  CHECK(largest_subspace_basis(validate_spec({3, {}, {}})).empty());
  CHECK(largest_subspace_basis(validate_spec({3, {RVec::unit(3, 0), RVec::unit(3, 1), RVec::unit(3, 2)}, {}})).size() == 3);

  CHECK(complementary_coords({RVec::from_ints({1, 1, 0})}, 3) == std::vector<std::size_t>{0, 2});
  CHECK(complementary_coords({}, 3) == std::vector<std::size_t>{0, 1, 2});
  CHECK(complementary_coords({RVec::unit(3, 0), RVec::unit(3, 1), RVec::unit(3, 2)}, 3).empty());
}

TEST_CASE("lattice_basis examples") {
  auto s = validate_spec(half_lattice());
  auto b = lattice_basis(s, {}, {0, 1});
  // Lower Hermite form: the first vector spans D ∩ R^1 = Z e1.
  REQUIRE(b.size() == 2);
  CHECK(b[0] == RVec::from_ints({1, 0}));
  CHECK(b[1] == v({q("1/2"), q("1/2")}));

  auto e = validate_spec({3, {RVec::from_ints({1, 1, 0})}, {}});
  CHECK(lattice_basis(e, e.u_basis(), e.complement_coords()).empty());

  // (0,1,0) = (1,1,0) - (1,0,0), so D = G ∩ span{e1, e3} is Z e1.
  auto d = validate_spec(diagonal_line_plus_e2());
  auto db = lattice_basis(d, d.u_basis(), d.complement_coords());
  REQUIRE(db.size() == 1);
  CHECK(db[0] == RVec::from_ints({1, 0, 0}));
}

TEST_CASE("complement_basis examples") {
  auto w = complement_basis({RVec::from_ints({1, 1, 0})}, {RVec::from_ints({0, 1, 0})}, 3);
  REQUIRE(w.size() == 1);
  CHECK(w[0] == RVec::unit(3, 2));
  CHECK(complement_basis({}, {}, 2) == std::vector<RVec>{RVec::unit(2, 0), RVec::unit(2, 1)});
  CHECK(complement_basis({RVec::unit(2, 0)}, {RVec::unit(2, 1)}, 2).empty());
}

TEST_CASE("decompose examples") {
  auto b = decompose({2, {}, {}});
  CHECK(b.alpha() == 0);
  CHECK(b.beta() == 0);
  CHECK(b.gamma() == 2);
  CHECK(b.w == std::vector<RVec>{RVec::unit(2, 0), RVec::unit(2, 1)});

  auto c = decompose(diagonal_line_plus_e2());
  CHECK(c.alpha() == 1);
  CHECK(c.beta() == 1);
  CHECK(c.gamma() == 1);
  CHECK(quotient_type(c) == QuotientType{1, 1});

  auto h = decompose(half_lattice());
  CHECK(quotient_type(h) == QuotientType{2, 0});
}

TEST_CASE("lower Hermite form shape") {
  Gen gen(11);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t cols = static_cast<std::size_t>(gen.integer(1, 5));
    std::vector<IntRow> rows(static_cast<std::size_t>(gen.integer(0, 6)), IntRow(cols));
    for (auto& r : rows)
      for (auto& x : r) x = gen.integer(-9, 9);
    auto h = lower_hermite_form(rows, cols);
    std::size_t prev = 0;
    for (std::size_t i = 0; i < h.size(); ++i) {
      std::size_t p = pivot_column(h[i]);
      if (i > 0) CHECK(p > prev);
      CHECK(h[i][p] > 0);
      for (std::size_t j = 0; j < i; ++j) {
        std::size_t pj = pivot_column(h[j]);
        CHECK(h[i][pj] >= 0);
        CHECK(h[i][pj] < h[j][pj]);
      }
      prev = p;
    }
    // Same lattice: every input row is an integer combination of the output.
    std::vector<RVec> hb;
    for (const auto& r : h) {
      RVec x(cols);
      for (std::size_t c = 0; c < cols; ++c) x[c] = Rational(r[c]);
      hb.push_back(x);
    }
    for (const auto& r : rows) {
      RVec x(cols);
      for (std::size_t c = 0; c < cols; ++c) x[c] = Rational(r[c]);
      CHECK(orbitred::testing::integer_combination_of_echelon(x, hb));
    }
  }
}

TEST_CASE("member agrees with brute force on random specs") {
  Gen gen(2024);
  for (int trial = 0; trial < 150; ++trial) {
    auto spec = orbitred::testing::random_spec(gen, 4, 5, 6, 3);
    auto stab = validate_spec(spec);
    orbitred::testing::BruteMember brute(spec, 3);
    RVec g(spec.n);
    for (const auto& l : spec.lattice_gens) g += Rational(gen.integer(-3, 3)) * l;
    for (const auto& u : spec.u_gens) g += gen.rational() * u;
    CHECK(member(g, stab));
    CHECK(brute(g));
    RVec off = g;
    off[static_cast<std::size_t>(gen.integer(0, static_cast<long>(spec.n) - 1))] += make_rational(1, 7919);
    CHECK(member(off, stab) == brute(off));
  }
}

TEST_CASE("decomposition round trips through JSON") {
  Gen gen(5);
  for (int trial = 0; trial < 50; ++trial) {
    auto spec = orbitred::testing::random_spec(gen, 5, 6, 10);
    auto b = decompose(spec);
    json j = b;
    CHECK(j.get<CanonicalBasis>() == b);
    json js = spec;
    auto back = js.get<StabilizerSpec>();
    CHECK(back.n == spec.n);
    CHECK(back.lattice_gens == spec.lattice_gens);
  }
  json bad = json::parse(R"({"n":1,"u":[],"v":[],"w":[["1/1"]],"gamma":2})");
  CHECK_THROWS_AS(bad.get<CanonicalBasis>(), Error);
}

TEST_CASE("member agrees with the determinantal-divisor oracle") {
  Gen gen(77);
  std::size_t members = 0;
  for (int trial = 0; trial < 300; ++trial) {
    auto spec = orbitred::testing::random_spec(gen, 4, 6, 8, 4);
    auto stab = validate_spec(spec);
    orbitred::testing::DivisorMember exact(spec);
    RVec g(spec.n);
    for (const auto& l : spec.lattice_gens) g += Rational(gen.integer(-20, 20)) * l;
    for (const auto& u : spec.u_gens) g += gen.rational() * u;
    if (trial % 2) g += make_rational(1, gen.integer(1, 4)) * gen.rvec(spec.n, 2, 1);
    members += exact(g) ? 1 : 0;
    CHECK(member(g, stab) == exact(g));
  }
  CHECK(members > 150);
}
