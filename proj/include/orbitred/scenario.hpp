#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "orbitred/witness.hpp"

namespace orbitred {

struct RunOptions {
  std::optional<std::uint64_t> seed;  // overrides the config's "seed"
  AuditLevel audit = AuditLevel::Fast;
};

// What --svg draws for a scenario, when it has a 2-D picture.
struct Figure {
  Window window;
  std::vector<RegionPartition> layers;
  std::optional<MarkerSet> markers;
};

struct ScenarioOutput {
  json result;  // deterministic: {"schema": 1, "kind", "seed", "audit_level", "ok", "outputs"}
  json timing;  // wall-clock figures, kept apart from `result`
  std::optional<Figure> figure;
  bool ok = true;
};

inline constexpr int kResultSchema = 1;

// Parses a config file; raises ConfigParseError.
json load_config(const std::string& path);
// Validates the parameters for the config's kind, then runs it. Parameter
// problems raise ConfigParseError; module errors propagate.
ScenarioOutput run_scenario(const json& config, const RunOptions& options = {});

std::string render_figure(const Figure& f);

json error_json(const Error& e);

}  // namespace orbitred
