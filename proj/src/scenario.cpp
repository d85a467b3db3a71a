#include "orbitred/scenario.hpp"

#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

#include "orbitred/seed.hpp"
#include "orbitred/stabilizer.hpp"
#include "orbitred/svg.hpp"

namespace orbitred {

namespace {

[[noreturn]] void bad_config(const std::string& what) { fail(ErrorCode::ConfigParseError, what); }

// Field access that reports the offending key instead of a bare JSON error.
template <class T>
T field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) bad_config(std::string("missing field \"") + key + "\"");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    bad_config(std::string("field \"") + key + "\": " + e.what());
  } catch (const Error& e) {
    bad_config(std::string("field \"") + key + "\": " + e.what());
  }
}

template <class T>
T field_or(const json& j, const char* key, T fallback) {
  return j.contains(key) ? field<T>(j, key) : fallback;
}

Window window_field(const json& j) {
  const json& w = j.contains("window") ? j.at("window") : json();
  if (!w.is_object()) bad_config("missing field \"window\"");
  try {
    return w.get<Window>();
  } catch (const json::exception& e) {
    bad_config(std::string("field \"window\": ") + e.what());
  } catch (const Error& e) {
    bad_config(std::string("field \"window\": ") + e.what());
  }
}

Rational positive(const json& j, const char* key) {
  Rational v = field<Rational>(j, key);
  if (!(v > 0)) bad_config(std::string("field \"") + key + "\" must be positive");
  return v;
}

void only_keys(const json& j, std::initializer_list<const char*> keys) {
  for (const auto& [k, v] : j.items()) {
    bool known = false;
    for (const char* a : keys) known = known || k == a;
    if (!known) bad_config("unknown field \"" + k + "\"");
  }
}

Rational uniform(std::mt19937_64& rng, const Rational& lo, const Rational& hi) {
  return lo + (hi - lo) * make_rational(static_cast<long>(rng() >> 44), 1L << 20);
}

// ---- decompose ----

json run_decompose(const json& cfg, ScenarioOutput& out) {
  only_keys(cfg, {"kind", "seed", "specs"});
  auto specs = field<std::vector<json>>(cfg, "specs");
  if (specs.empty()) bad_config("\"specs\" must not be empty");
  json results = json::array();
  for (std::size_t k = 0; k < specs.size(); ++k) {
    StabilizerSpec spec;
    try {
      spec = specs[k].get<StabilizerSpec>();
    } catch (const json::exception& e) {
      bad_config("specs[" + std::to_string(k) + "]: " + e.what());
    }
    auto stab = validate_spec(spec);
    auto basis = decompose(spec);
    auto back = as_stabilizer(basis);
    std::size_t into = 0, from = 0;
    for (const auto& x : basis.u) into += member(x, stab) ? 1 : 0;
    for (const auto& x : basis.v) into += member(x, stab) ? 1 : 0;
    for (const auto& x : spec.u_gens) from += member(x, back) ? 1 : 0;
    for (const auto& x : spec.lattice_gens) from += member(x, back) ? 1 : 0;
    bool ok = into == basis.u.size() + basis.v.size() && from == spec.u_gens.size() + spec.lattice_gens.size() &&
              basis.alpha() + basis.beta() + basis.gamma() == spec.n;
    out.ok = out.ok && ok;
    auto qt = quotient_type(basis);
    results.push_back({{"spec", spec},
                       {"basis", basis},
                       {"quotient_type", {{"beta", qt.beta}, {"gamma", qt.gamma}}},
                       {"audit",
                        {{"basis_in_stabilizer", into},
                         {"generators_in_span", from},
                         {"dimension_sum", basis.alpha() + basis.beta() + basis.gamma()},
                         {"ok", ok}}}});
  }
  return {{"results", results}};
}

// ---- markers ----

json run_markers(const json& cfg, std::uint64_t seed, ScenarioOutput& out) {
  only_keys(cfg, {"kind", "seed", "window", "d", "runs"});
  Window w = window_field(cfg);
  Rational d = positive(cfg, "d");
  auto runs = field_or<std::size_t>(cfg, "runs", 1);
  if (runs == 0) bad_config("\"runs\" must be at least 1");
  json list = json::array();
  for (std::size_t r = 0; r < runs; ++r) {
    std::uint64_t s = mix_seed(seed, r);
    MarkerBuildStats stats;
    auto m = build_marker_set(w, d, s, &stats);
    auto report = verify_marker(w, m);
    out.ok = out.ok && report.discrete && report.covering;
    if (r == 0 && w.dim() == 2) out.figure = Figure{w, {}, m};
    list.push_back({{"run", r},
                    {"seed", std::to_string(s)},
                    {"markers", m},
                    {"report", report},
                    {"stats",
                     {{"candidates", stats.candidates},
                      {"from_sequence", stats.from_sequence},
                      {"hole_fills", stats.hole_fills}}}});
  }
  return {{"runs", list}};
}

// ---- square-regions ----

RegionConfig region_config_field(const json& cfg, std::size_t n) {
  Rational d = positive(cfg, "d");
  Rational eps = positive(cfg, "epsilon");
  RegionConfig c = default_region_config(n, d, eps);
  if (cfg.contains("overrides")) {
    const json& o = cfg.at("overrides");
    only_keys(o, {"D", "delta1", "delta2", "separation"});
    c.D = field_or<Rational>(o, "D", c.D);
    c.delta1 = field_or<Rational>(o, "delta1", c.delta1);
    c.delta2 = field_or<Rational>(o, "delta2", c.delta2);
    c.separation = field_or<Rational>(o, "separation", c.separation);
  }
  try {
    validate_config(c, n);
  } catch (const Error& e) {
    bad_config(e.what());
  }
  return c;
}

json run_square(const json& cfg, std::uint64_t seed, ScenarioOutput& out) {
  only_keys(cfg, {"kind", "seed", "window", "d", "epsilon", "overrides"});
  Window w = window_field(cfg);
  RegionConfig c = region_config_field(cfg, w.dim());
  auto sq = build_square_partition(w, c, seed);
  auto part = sq.materialize();
  auto pa = audit_partition(part);
  auto ea = audit_edges(part, c.d, c.d + c.epsilon, false);
  bool gaps_ok = sq.face_gaps().ok(c.D);
  out.ok = pa.ok() && ea.ok() && gaps_ok;
  if (w.dim() == 2) out.figure = Figure{w, {part}, std::nullopt};
  const auto& st = sq.stats();
  return {{"config", c},
          {"partition", part},
          {"stats",
           {{"markers", st.markers},
            {"colors", st.colors},
            {"atoms", st.atoms},
            {"cut_rects", st.cut_rects},
            {"marker_attempts", st.marker_attempts},
            {"max_shift", st.max_shift}}},
          {"audits", {{"partition", pa}, {"edges", ea}, {"face_gaps", sq.face_gaps()}, {"face_gaps_ok", gaps_ok}}}};
}

// ---- orthogonal ----

json run_orthogonal(const json& cfg, std::uint64_t seed, ScenarioOutput& out) {
  only_keys(cfg, {"kind", "seed", "window", "d", "b", "separation", "existing"});
  Window w = window_field(cfg);
  std::size_t n = w.dim();
  Rational d = positive(cfg, "d");
  Rational s = positive(cfg, "separation");
  auto b = field_or<std::size_t>(cfg, "b", 3);
  auto specs = field_or<std::vector<json>>(cfg, "existing", {});
  std::vector<RegionPartition> existing;
  json described = json::array();
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const json& e = specs[k];
    auto type = field<std::string>(e, "type");
    std::uint64_t es = mix_seed(seed, k + 1);
    if (type == "square") {
      only_keys(e, {"type", "d", "epsilon", "overrides"});
      existing.push_back(build_square_partition(w, region_config_field(e, n), es).materialize());
    } else if (type == "grid") {
      only_keys(e, {"type", "d"});
      RegionConfig c = default_region_config(n, positive(e, "d"), positive(e, "d"));
      c.separation = s;
      existing.push_back(orthogonal_partition(w, {}, positive(e, "d"), 0, c, es).partition);
    } else {
      bad_config("existing[" + std::to_string(k) + "]: type must be \"square\" or \"grid\"");
    }
    described.push_back({{"spec", e}, {"rects", existing.back().rects.size()}});
  }
  RegionConfig c = default_region_config(n, d, d);
  c.separation = s;
  auto res = orthogonal_partition(w, existing, d, b, c, mix_seed(seed, 0));
  auto pa = audit_partition(res.partition);
  auto sa = audit_separation(res.partition, existing, s);
  auto ea = audit_edges(res.partition, 9 * d, 12 * d, true);
  out.ok = pa.ok() && sa.ok(s) && ea.ok();
  if (n == 2) {
    Figure f{w, {}, std::nullopt};
    RegionPartition merged;
    merged.window = w;
    for (const auto& p : existing)
      for (std::size_t k = 0; k < p.rects.size(); ++k) {
        merged.rects.push_back(p.rects[k]);
        merged.region.push_back(merged.region.size());
      }
    f.layers = {merged, res.partition};
    out.figure = f;
  }
  return {{"existing", described},
          {"partition", res.partition},
          {"audits", {{"partition", pa}, {"separation", sa}, {"edges", ea}}}};
}

// ---- witness ----

json run_witness(const json& cfg, std::uint64_t seed, AuditLevel audit, ScenarioOutput& out) {
  only_keys(cfg, {"kind", "seed", "model", "window", "schedule", "pairs", "keys"});
  const json& m = cfg.contains("model") ? cfg.at("model") : json();
  if (!m.is_object()) bad_config("missing field \"model\"");
  only_keys(m, {"spec", "transverse_dim"});
  auto spec = field<StabilizerSpec>(m, "spec");
  auto p = field_or<std::size_t>(m, "transverse_dim", 1);
  FreeQuotientModel model(decompose(spec), p);
  Window w = window_field(cfg);
  const json& sj = cfg.contains("schedule") ? cfg.at("schedule") : json();
  if (!sj.is_object()) bad_config("missing field \"schedule\"");
  only_keys(sj, {"base", "levels", "epsilon"});
  Schedule schedule;
  try {
    schedule = make_schedule(field<Rational>(sj, "base"), field<std::size_t>(sj, "levels"), field<Rational>(sj, "epsilon"));
  } catch (const Error& e) {
    bad_config(std::string("schedule: ") + e.what());
  }
  const json& pj = cfg.contains("pairs") ? cfg.at("pairs") : json::object();
  only_keys(pj, {"same_orbit", "cross_orbit", "radius"});
  auto same = field_or<std::size_t>(pj, "same_orbit", 10);
  auto cross = field_or<std::size_t>(pj, "cross_orbit", 10);
  Rational radius = field_or<Rational>(pj, "radius", schedule.scale(1));
  if (radius < 0) bad_config("\"radius\" must be non-negative");
  if (cross > 0 && p == 0) bad_config("cross-orbit pairs need transverse_dim >= 1");
  std::vector<RVec> keys = field_or<std::vector<RVec>>(cfg, "keys", {});
  if (keys.empty())
    for (long k = 0; k < 3; ++k) keys.push_back(RVec(std::vector<Rational>(p, make_rational(k, 2))));
  for (const auto& k : keys)
    if (k.dim() != p) bad_config("orbit keys must have transverse_dim coordinates");
  if (cross > 0 && keys.size() < 2) bad_config("cross-orbit pairs need at least two keys");
  if (w.dim() != model.gamma())
    bad_config("window dimension " + std::to_string(w.dim()) + " differs from gamma = " + std::to_string(model.gamma()));

  WitnessPipeline pipe(model, w, schedule, seed, audit);
  const std::size_t levels = schedule.levels();
  const Rational margin = w.dim() ? schedule.scale(levels) + radius : Rational(0);
  for (std::size_t a = 0; a < w.dim(); ++a)
    if (!(w.edge(a) > 2 * margin)) bad_config("window too small for the safe interior and radius");
  std::mt19937_64 rng(mix_seed(seed, "witness-pairs"));
  auto point_in = [&](const RVec& key) {
    RVec real(w.dim());
    for (std::size_t a = 0; a < w.dim(); ++a) real[a] = uniform(rng, w.lo[a] + margin, w.hi[a] - margin);
    std::vector<Rational> t(model.beta());
    for (auto& c : t) c = uniform(rng, 0, 1);
    return model.point(OrbitPoint{key, GroupElement{TorusVec(std::move(t)), real}});
  };

  json traces = json::array();
  std::vector<ReductionTrace> all;
  auto traced = [&](const RVec& x) {
    std::string id = "p" + std::to_string(all.size());
    all.push_back(pipe.trace(x, id));
    traces.push_back({{"point", x}, {"trace", all.back()}});
    return all.size() - 1;
  };
  auto agreement_json = [](const std::optional<std::size_t>& a) { return a ? json(*a) : json(nullptr); };

  std::vector<std::size_t> per_level(levels + 1, 0), eventual(levels + 2, 0);
  json same_list = json::array();
  bool all_agree = true;
  for (std::size_t k = 0; k < same; ++k) {
    const RVec& key = keys[static_cast<std::size_t>(rng() % keys.size())];
    RVec x = point_in(key);
    GroupElement g{TorusVec(std::vector<Rational>(model.beta())), RVec(model.gamma())};
    std::vector<Rational> t(model.beta());
    for (auto& c : t) c = uniform(rng, 0, 1);
    g.torus = TorusVec(std::move(t));
    for (std::size_t a = 0; a < model.gamma(); ++a) g.real[a] = uniform(rng, -radius, radius);
    RVec y = model.act(g, x);
    std::size_t ix = traced(x), iy = traced(y);
    auto e = eventual_agreement(all[ix], all[iy]);
    all_agree = all_agree && e.has_value();
    ++eventual[e ? *e : levels + 1];
    for (std::size_t n = 1; n <= levels; ++n) per_level[n] += all[ix].encoded[n - 1] == all[iy].encoded[n - 1] ? 1 : 0;
    same_list.push_back({{"x", all[ix].point_id}, {"y", all[iy].point_id}, {"agreement", agreement_json(e)}});
  }
  json cross_list = json::array();
  std::size_t cross_agree = 0;
  for (std::size_t k = 0; k < cross; ++k) {
    std::size_t a = static_cast<std::size_t>(rng() % keys.size());
    std::size_t b = (a + 1 + static_cast<std::size_t>(rng() % (keys.size() - 1))) % keys.size();
    std::size_t ix = traced(point_in(keys[a])), iy = traced(point_in(keys[b]));
    auto e = eventual_agreement(all[ix], all[iy]);
    cross_agree += e ? 1 : 0;
    cross_list.push_back({{"x", all[ix].point_id}, {"y", all[iy].point_id}, {"agreement", agreement_json(e)}});
  }
  // Tag every trace with this model's label and with a different label: no
  // tagged pair across labels may eventually agree.
  ClassLabel label = pipe.label();
  ClassLabel other{label.beta + 1, label.gamma};
  std::size_t tagged_pairs = 0, tagged_agree = 0;
  std::vector<ReductionTrace> mine, theirs;
  for (const auto& t : all) {
    mine.push_back(tag_trace(t, label));
    theirs.push_back(tag_trace(t, other));
  }
  for (const auto& a : mine)
    for (const auto& b : theirs) {
      ++tagged_pairs;
      tagged_agree += eventual_agreement(a, b) ? 1 : 0;
    }

  json certs = json::array();
  bool certs_ok = true;
  if (model.gamma() > 0)
    for (const auto& k : keys) {
      const auto& c = pipe.certificate_for(k);
      certs_ok = certs_ok && c.ok();
      certs.push_back({{"key", k}, {"certificate", c}});
    }

  json conv = json::array();
  for (std::size_t n = 1; n <= levels; ++n) conv.push_back({{"level", n}, {"agreeing_pairs", per_level[n]}});
  json ev = json::object();
  for (std::size_t n = 1; n <= levels; ++n) ev[std::to_string(n)] = eventual[n];
  ev["none"] = eventual[levels + 1];

  out.ok = all_agree && cross_agree == 0 && tagged_agree == 0 && certs_ok;
  if (w.dim() == 2 && levels >= 2) {
    const auto& h = pipe.hierarchy_for(keys.front());
    RVec mid(2);
    for (std::size_t a = 0; a < 2; ++a) mid[a] = (w.lo[a] + w.hi[a]) / 2;
    Rational half = 30 * schedule.scale(levels - 1);
    Window box(RVec{mid[0] - half, mid[1] - half}, RVec{mid[0] + half, mid[1] + half});
    Figure f{box, {h.materialize(levels, levels, mid, box)}, std::nullopt};
    if (h.geometry_dim(levels - 1) == 2) f.layers.push_back(h.materialize(levels, levels - 1, mid, box));
    out.figure = f;
  }
  return {{"model", {{"basis", model.basis()}, {"transverse_dim", p}}},
          {"label", label},
          {"schedule", schedule},
          {"window", w},
          {"radius", radius},
          {"same_orbit", same_list},
          {"cross_orbit", cross_list},
          {"convergence", conv},
          {"eventual_agreement", ev},
          {"cross_label", {{"pairs", tagged_pairs}, {"agreements", tagged_agree}}},
          {"certificates", certs},
          {"traces", traces}};
}

}  // namespace

json load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) fail(ErrorCode::ConfigParseError, "cannot read config " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  try {
    return json::parse(ss.str());
  } catch (const json::exception& e) {
    fail(ErrorCode::ConfigParseError, std::string("config is not valid JSON: ") + e.what());
  }
}

ScenarioOutput run_scenario(const json& config, const RunOptions& options) {
  auto start = std::chrono::steady_clock::now();
  if (!config.is_object()) bad_config("config must be a JSON object");
  auto kind = field<std::string>(config, "kind");
  std::uint64_t seed = options.seed ? *options.seed : field_or<std::uint64_t>(config, "seed", 0);
  ScenarioOutput out;
  json outputs;
  if (kind == "decompose")
    outputs = run_decompose(config, out);
  else if (kind == "markers")
    outputs = run_markers(config, seed, out);
  else if (kind == "square-regions")
    outputs = run_square(config, seed, out);
  else if (kind == "orthogonal")
    outputs = run_orthogonal(config, seed, out);
  else if (kind == "witness")
    outputs = run_witness(config, seed, options.audit, out);
  else
    bad_config("unknown kind \"" + kind + "\"");
  out.result = {{"schema", kResultSchema},
                {"kind", kind},
                {"seed", std::to_string(seed)},
                {"audit_level", options.audit == AuditLevel::Full ? "full" : "fast"},
                {"ok", out.ok},
                {"outputs", std::move(outputs)}};
  auto ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
  out.timing = {{"total_ms", ms}};
  return out;
}

std::string render_figure(const Figure& f) { return svg_document(f.window, f.layers, f.markers); }

json error_json(const Error& e) {
  return {{"schema", kResultSchema}, {"ok", false}, {"error", {{"code", to_string(e.code())}, {"message", e.what()}}}};
}

}  // namespace orbitred
