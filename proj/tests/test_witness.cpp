#include <doctest.h>

#include <chrono>

#include "orbitred/stabilizer.hpp"
#include "orbitred/witness.hpp"
#include "support.hpp"

using namespace orbitred;
using orbitred::testing::Gen;

namespace {
Rational q(const char* s) { return parse_rational(s); }

RegionPartition one_region(std::vector<Rect> rects, Window w) {
  RegionPartition p;
  p.window = std::move(w);
  for (auto& r : rects) {
    r.id = p.rects.size();
    p.rects.push_back(r);
    p.region.push_back(0);
  }
  return p;
}

ReductionTrace raw(std::vector<Rational> e) {
  ReductionTrace t;
  t.encoded = std::move(e);
  return t;
}

// Real directions = window dimension, one torus direction, one transverse
// coordinate.
FreeQuotientModel model_for(std::size_t gamma) {
  StabilizerSpec spec;
  spec.n = gamma + 1;
  spec.lattice_gens = {RVec::unit(gamma + 1, 0)};
  return FreeQuotientModel(decompose(spec), 1);
}

Rational uniform(Gen& gen, const Rational& lo, const Rational& hi) {
  return lo + (hi - lo) * make_rational(static_cast<long>(gen.engine()() >> 44), 1L << 20);
}

RVec sample_point(Gen& gen, const FreeQuotientModel& m, const Window& w, const Rational& margin, const RVec& key) {
  RVec real(w.dim());
  for (std::size_t a = 0; a < w.dim(); ++a) real[a] = uniform(gen, w.lo[a] + margin, w.hi[a] - margin);
  return m.point(OrbitPoint{key, GroupElement{gen.torus(m.beta()), real}});
}
}  // namespace

TEST_CASE("make_schedule examples") {
  auto s = make_schedule(1, 3, q("1/2"));
  REQUIRE(s.levels() == 3);
  CHECK(s.d[0] == 1);
  for (std::size_t k = 2; k <= 3; ++k) {
    Rational sum = 0;
    for (std::size_t l = 0; l + 1 < k; ++l) sum += s.d[l];
    CHECK(s.d[k - 1] / 12 > 24 * sum + 1);
    CHECK(s.d[k - 1] > s.d[k - 2]);
  }
  // Minimal growth: one less breaks the level-2 inequality.
  CHECK(s.growth == 301);
  CHECK_FALSE(Rational(300) / 12 > 25);

  auto one = make_schedule(5, 1, 5);
  CHECK(one.d == std::vector<Rational>{5});
  CHECK_NOTHROW(validate_schedule(one));
  auto again = make_schedule(1, 3, q("1/2"));
  CHECK(json(again) == json(s));
  CHECK(json(s).get<Schedule>().d == s.d);

  CHECK_THROWS_AS(make_schedule(1, 0, q("1/2")), Error);
  CHECK_THROWS_AS(make_schedule(1, 3, 2), Error);
  auto broken = s;
  broken.d[2] = broken.d[1] + 1;
  CHECK_THROWS_AS(validate_schedule(broken), Error);
}

TEST_CASE("make_schedule inequalities on random inputs") {
  Gen gen(77);
  for (int t = 0; t < 40; ++t) {
    Rational base = make_rational(gen.integer(1, 50), gen.integer(1, 5));
    Rational eps = base * make_rational(gen.integer(1, 8), 8);
    std::size_t levels = static_cast<std::size_t>(gen.integer(1, 5));
    auto s = make_schedule(base, levels, eps);
    for (std::size_t k = 2; k <= levels; ++k) CHECK(s.separation(k) > s.required_separation(k));
    if (levels >= 2) {
      // Minimality of the growth factor.
      Schedule smaller = s;
      Rational d = base;
      for (std::size_t k = 0; k < levels; ++k, d *= Rational(s.growth - 1)) smaller.d[k] = d;
      smaller.growth = s.growth - 1;
      if (smaller.growth >= 2) CHECK_THROWS_AS(validate_schedule(smaller), Error);
    }
  }
}

TEST_CASE("center_of_region") {
  Window w = Window::cube(2, 0, 20);
  auto p = one_region({Rect{RVec::from_ints({0, 2}), RVec::from_ints({10, 4}), 0}}, w);
  CHECK(center_of_region(p, 0, 0) == RVec::from_ints({5, 3}));
  CHECK(center_of_region(p, 0, 1) == RVec::from_ints({0, 5, 3}));
  auto split = one_region({Rect{RVec::from_ints({0, 0}), RVec::from_ints({1, 2}), 0},
                           Rect{RVec::from_ints({1, 0}), RVec::from_ints({3, 2}), 0}},
                          w);
  CHECK(center_of_region(split, 0, 0) == RVec{q("3/2"), 1});
  auto ell = one_region({Rect{RVec::from_ints({0, 0}), RVec::from_ints({2, 1}), 0},
                         Rect{RVec::from_ints({0, 1}), RVec::from_ints({1, 2}), 0}},
                        w);
  CHECK_THROWS_AS(center_of_region(ell, 0, 0), Error);
  Gen gen(5);
  for (int t = 0; t < 200; ++t) {
    RVec lo = gen.rvec(2), hi = lo;
    for (std::size_t a = 0; a < 2; ++a) hi[a] += make_rational(gen.integer(1, 40), gen.integer(1, 6));
    auto r = one_region({Rect{lo, hi, 0}}, Window(lo, hi));
    RVec c = center_of_region(r, 0, 0);
    for (std::size_t a = 0; a < 2; ++a) CHECK(c[a] - lo[a] == hi[a] - c[a]);
  }
}

TEST_CASE("rational list encoding is injective") {
  Gen gen(8);
  std::vector<std::vector<Rational>> seen;
  std::vector<Rational> codes;
  for (int t = 0; t < 400; ++t) {
    std::vector<Rational> v(static_cast<std::size_t>(gen.integer(0, 4)));
    for (auto& x : v) x = gen.rational(1000, 50);
    Rational c = encode_rationals(v);
    CHECK(c > 0);
    CHECK(c < 1);
    CHECK(decode_rationals(c) == v);
    for (std::size_t k = 0; k < seen.size(); ++k) CHECK((codes[k] == c) == (seen[k] == v));
    seen.push_back(v);
    codes.push_back(c);
  }
  CHECK(encode_rationals({}) == q("1/2"));
  CHECK(encode_rationals({0}) != encode_rationals({0, 0}));
  CHECK_THROWS_AS(decode_rationals(q("1/3")), Error);
}

TEST_CASE("eventual_agreement examples") {
  auto a = raw({1, 2, 3});
  CHECK(eventual_agreement(a, a) == 1u);
  CHECK_FALSE(eventual_agreement(a, raw({4, 5, 6})).has_value());
  CHECK(eventual_agreement(a, raw({9, 2, 3})) == 2u);
  CHECK(eventual_agreement(a, raw({9, 9, 3})) == 3u);
  CHECK_FALSE(eventual_agreement(a, raw({1, 2, 4})).has_value());
  CHECK(eventual_agreement(raw({}), raw({})) == 1u);
  CHECK_THROWS_AS(eventual_agreement(a, raw({1, 2})), Error);
  try {
    eventual_agreement(a, raw({1}));
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LengthMismatch);
  }
}

TEST_CASE("tag_trace separates labels") {
  auto a = raw({1, 2, 3});
  auto b = raw({7, 2, 3});
  ClassLabel l1{1, 1}, l2{0, 2}, l3{1, 2};
  CHECK_FALSE(eventual_agreement(tag_trace(a, l1), tag_trace(a, l2)).has_value());
  CHECK_FALSE(eventual_agreement(tag_trace(a, l1), tag_trace(a, l3)).has_value());
  CHECK(eventual_agreement(tag_trace(a, l1), tag_trace(b, l1)) == eventual_agreement(a, b));
  CHECK(eventual_agreement(tag_trace(a, l2), tag_trace(a, l2)) == 1u);
  // Mixed corpus: every cross-label pair disagrees at every level.
  std::vector<ClassLabel> labels{{0, 1}, {1, 1}, {0, 2}, {2, 0}, {1, 2}};
  Gen gen(2);
  std::vector<std::pair<ReductionTrace, ClassLabel>> corpus;
  for (int t = 0; t < 30; ++t) {
    auto tr = raw({gen.rational(), gen.rational(), gen.rational()});
    auto l = labels[static_cast<std::size_t>(gen.integer(0, 4))];
    corpus.emplace_back(tag_trace(t % 3 == 0 ? a : tr, l), l);
  }
  for (std::size_t x = 0; x < corpus.size(); ++x)
    for (std::size_t y = 0; y < corpus.size(); ++y)
      if (!(corpus[x].second == corpus[y].second))
        for (std::size_t k = 0; k < 3; ++k) CHECK(corpus[x].first.encoded[k] != corpus[y].first.encoded[k]);
}

TEST_CASE("hierarchy with one level is the nearly-square partition") {
  auto s = make_schedule(10, 1, 3);
  auto built = build_hierarchy(Window::cube(1, 0, 1000), s, 4);
  const auto& h = built.hierarchy;
  CHECK(built.certificate.ok());
  Gen gen(1);
  for (int t = 0; t < 50; ++t) {
    RVec x{uniform(gen, 10, 990)};
    Rect r = h.class_rect(1, x);
    CHECK(r.contains(x));
    CHECK(r.edge(0) >= 10);
    CHECK(r.edge(0) < 13);
    CHECK(h.center(1, x) == r.center());
    // A region centre is its own image.
    CHECK(h.center(1, r.center()) == r.center());
  }
}

TEST_CASE("hierarchy certificates with two levels") {
  auto s = make_schedule(1, 2, q("1/2"));
  for (std::size_t n = 1; n <= 2; ++n) {
    Window w = Window::cube(n, 0, 4 * s.d[1] + 40);
    auto built = build_hierarchy(w, s, 9 + n, AuditLevel::Full);
    CHECK(built.certificate.ok());
    bool saw_iv = false;
    for (const auto& item : built.certificate.items) {
      if (item.clause == "iv:face_distance") {
        saw_iv = true;
        CHECK(item.checks > 0);
        CHECK(*item.lhs <= 12);
      }
      if (item.enforced) CHECK(item.ok());
    }
    CHECK(saw_iv);
  }
}

TEST_CASE("pulled-back partition faces track the coarser partition") {
  // Independent check of conclusion (ii) in 1-D: every R[2][1] face is within
  // 12 d_1 of an R[2][2] face, using materialized partitions only.
  auto s = make_schedule(1, 2, q("1/2"));
  Window w = Window::cube(1, 0, 4 * s.d[1]);
  Hierarchy h(w, s, 21);
  RVec x{2 * s.d[1]};
  Window box(RVec{Rational(s.d[1] / 2)}, RVec{Rational(7 * s.d[1] / 2)});
  auto fine = h.materialize(2, 1, x, box);
  auto coarse = h.materialize(2, 2, x, box);
  CHECK(audit_partition(fine).ok());
  CHECK(audit_partition(coarse).ok());
  auto faces = [](const RegionPartition& p) {
    std::vector<Rational> out;
    for (std::size_t k = 0; k + 1 < p.rects.size(); ++k)
      for (std::size_t l = 0; l < p.rects.size(); ++l)
        if (p.rects[l].lo[0] == p.rects[k].hi[0] && p.region[l] != p.region[k]) out.push_back(p.rects[k].hi[0]);
    return out;
  };
  auto ff = faces(fine);
  auto cf = faces(coarse);
  CHECK_FALSE(ff.empty());
  for (const auto& f : ff) {
    bool near = false;
    for (const auto& c : cf) near = near || abs_of(f - c) <= 12;
    CHECK(near);
  }
  // Regions of R[2][1] are unions of whole grid cells with edges in [9, 12].
  for (const auto& r : fine.rects)
    if (r.lo[0] > box.lo[0] && r.hi[0] < box.hi[0]) {
      CHECK(r.edge(0) >= 9);
      CHECK(r.edge(0) <= 12);
    }
}

TEST_CASE("traces: fixed points, class factoring, errors") {
  auto s = make_schedule(1, 2, q("1/2"));
  auto model = model_for(1);
  Window w = Window::cube(1, 0, 4 * s.d[1]);
  WitnessPipeline pipe(model, w, s, 3);
  Gen gen(31);
  RVec key{q("1/3")};
  const auto& h = pipe.hierarchy_for(key);
  for (int t = 0; t < 30; ++t) {
    RVec x = sample_point(gen, model, w, s.d[1], key);
    auto tx = pipe.trace(x);
    REQUIRE(tx.phi.size() == 2);
    CHECK(tx.phi[0].key == key);
    CHECK(tx.phi[1].offset.torus.is_zero());
    CHECK(w.contains(tx.phi[1].offset.real));
    // A point in the same R[2][1] class has the same phi_2.
    auto cx = model.chart(x);
    RVec y_real = h.class_rect(1, cx.offset.real).center();
    if (h.related(2, 1, cx.offset.real, y_real) && h.in_safe_interior(y_real)) {
      auto ty = trace(OrbitPoint{key, cx.offset}, h);
      auto tz = trace(OrbitPoint{key, GroupElement{cx.offset.torus, y_real}}, h);
      CHECK(ty.encoded[1] == tz.encoded[1]);
    }
    // phi_1 of the level-1 centre is itself.
    OrbitPoint centre{key, GroupElement{TorusVec(1), tx.phi[0].offset.real}};
    CHECK(trace(centre, h).phi[0] == centre);
  }
  OrbitPoint edge{key, GroupElement{TorusVec(1), RVec{1}}};
  try {
    trace(edge, h);
    FAIL("expected PointOutsideSafeInterior");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::PointOutsideSafeInterior);
  }
  CHECK_THROWS_AS(WitnessPipeline(model_for(2), w, s, 0), Error);
}

TEST_CASE("same-orbit pairs agree, cross-orbit pairs never do") {
  auto s = make_schedule(1, 3, q("1/2"));
  for (std::size_t n = 1; n <= 2; ++n) {
    auto start = std::chrono::steady_clock::now();
    auto model = model_for(n);
    Window w = Window::cube(n, 0, 4 * s.d[2]);
    WitnessPipeline pipe(model, w, s, 17 + n);
    Gen gen(100 + n);
    std::size_t pairs = n == 1 ? 20 : 4;
    std::vector<std::size_t> agree_at(4, 0);
    for (std::size_t p = 0; p < pairs; ++p) {
      RVec key{make_rational(gen.integer(0, 3), 1)};
      RVec x = sample_point(gen, model, w, s.d[2] + 1, key);
      GroupElement g{gen.torus(model.beta()), RVec(n)};
      for (std::size_t a = 0; a < n; ++a) g.real[a] = uniform(gen, -1, 1);
      RVec y = model.act(g, x);
      auto k = eventual_agreement(pipe.trace(x), pipe.trace(y));
      CHECK(k.has_value());
      if (k) ++agree_at[*k];
      RVec other = sample_point(gen, model, w, s.d[2], RVec{key[0] + q("1/2")});
      CHECK_FALSE(eventual_agreement(pipe.trace(x), pipe.trace(other)).has_value());
    }
    MESSAGE("n=" << n << " agree at 1/2/3: " << agree_at[1] << "/" << agree_at[2] << "/" << agree_at[3] << " ms="
                 << std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count());
  }
}

TEST_CASE("witness pipeline is deterministic") {
  auto s = make_schedule(1, 2, q("1/2"));
  auto model = model_for(2);
  Window w = Window::cube(2, 0, 4 * s.d[1]);
  Gen g1(4), g2(4);
  WitnessPipeline a(model, w, s, 6), b(model, w, s, 6);
  for (int t = 0; t < 3; ++t) {
    RVec x = sample_point(g1, model, w, s.d[1], RVec{1});
    RVec y = sample_point(g2, model, w, s.d[1], RVec{1});
    CHECK(json(a.trace(x, "p")).dump() == json(b.trace(y, "p")).dump());
  }
  CHECK(json(a.certificate_for(RVec{1})).dump() == json(b.certificate_for(RVec{1})).dump());
}
