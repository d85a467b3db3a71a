// Command-line runner: `orbitred run <config.json> [--seed N] [--out FILE]
// [--audit-level fast|full] [--svg FILE] [--timing FILE]`.
//
// Exit codes: 0 all audits passed, 1 an audit failed (result still written),
// 2 configuration or input error (error JSON written instead of a result).

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "orbitred/scenario.hpp"
#include "orbitred/svg.hpp"

namespace {

void emit(const orbitred::json& j, const std::string& path) {
  std::string text = j.dump(2) + "\n";
  if (path.empty() || path == "-")
    std::cout << text;
  else
    orbitred::write_text_file(path, text);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Orbit equivalence reduction toolkit"};
  app.require_subcommand(1);
  auto* run = app.add_subcommand("run", "Run a scenario config");
  std::string config_path, out_path, svg_path, timing_path;
  std::optional<std::uint64_t> seed;
  std::string level = "fast";
  run->add_option("config", config_path, "Scenario config (JSON)")->required();
  run->add_option("--seed", seed, "Override the config seed");
  run->add_option("--out", out_path, "Result JSON path (default stdout)");
  run->add_option("--audit-level", level, "Certificate audit depth")->check(CLI::IsMember({"fast", "full"}));
  run->add_option("--svg", svg_path, "Write a figure for 2-D scenarios");
  run->add_option("--timing", timing_path, "Write wall-clock timings here");
  CLI11_PARSE(app, argc, argv);

  try {
    orbitred::RunOptions opts;
    opts.seed = seed;
    opts.audit = level == "full" ? orbitred::AuditLevel::Full : orbitred::AuditLevel::Fast;
    auto out = orbitred::run_scenario(orbitred::load_config(config_path), opts);
    emit(out.result, out_path);
    if (!timing_path.empty()) emit(out.timing, timing_path);
    if (!svg_path.empty()) {
      if (out.figure)
        orbitred::write_text_file(svg_path, orbitred::render_figure(*out.figure));
      else
        std::cerr << "note: no 2-D figure for this scenario; --svg ignored\n";
    }
    if (!out.ok) std::cerr << "audit failed; see result JSON\n";
    return out.ok ? 0 : 1;
  } catch (const orbitred::Error& e) {
    emit(orbitred::error_json(e), out_path);
    std::cerr << "error: " << orbitred::to_string(e.code()) << ": " << e.what() << "\n";
    return 2;
  }
}
