// Command-line front end: deterministic single-trial simulation, replicated
// Monte Carlo studies, power curves, and the acceptance check battery.
//
// Exit codes: 0 success, 1 check failure, 2 configuration error.

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rru/acceptance.hpp"
#include "rru/io.hpp"
#include "rru/montecarlo.hpp"
#include "rru/urn.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;

int fail_config(const std::vector<std::string>& violations) {
  std::fprintf(stderr, "configuration error:\n");
  for (const auto& v : violations) std::fprintf(stderr, "  - %s\n", v.c_str());
  return kExitConfigError;
}

void emit(rru::RunManifest& manifest, const fs::path& out_dir, const std::string& name,
          const std::string& contents) {
  rru::write_file((out_dir / name).string(), contents);
  manifest.file_checksums[name] = rru::fnv1a_hex(contents);
}

void finish_manifest(rru::RunManifest& manifest, const fs::path& out_dir) {
  rru::write_file((out_dir / "run_manifest.json").string(), rru::run_manifest_json(manifest));
}

int cmd_simulate(const std::string& config_path, std::uint64_t seed, const std::string& out) {
  rru::ParsedConfig parsed = rru::load_config(config_path);
  auto violations = rru::validate_config(parsed.cfg);
  if (!violations.empty()) return fail_config(violations);
  rru::TruthSet truth = rru::truth_from(parsed.cfg);
  rru::TrialPath path = rru::run_trial(parsed.cfg, seed, &truth);

  fs::create_directories(out);
  rru::RunManifest manifest{"simulate", config_path, out, "1", {}};
  emit(manifest, out, "trajectory.csv", rru::trajectory_csv(path));
  emit(manifest, out, "summary.json", rru::trial_summary_json(path, parsed.alpha));
  finish_manifest(manifest, out);
  return kExitOk;
}

int cmd_mc(const std::string& config_path, std::uint64_t replicates, std::uint64_t base_seed,
           double alpha_override, const std::string& out) {
  rru::ParsedConfig parsed = rru::load_config(config_path);
  auto violations = rru::validate_config(parsed.cfg);
  if (!violations.empty()) return fail_config(violations);

  rru::StudyPlan plan;
  plan.cfg = parsed.cfg;
  plan.replicates = replicates;
  plan.base_seed = base_seed;
  plan.alpha = alpha_override > 0.0 ? alpha_override : parsed.alpha;
  plan.subsequence_check = true;
  rru::StudyReport report = rru::run_study(plan);

  fs::create_directories(out);
  rru::RunManifest manifest{"mc", config_path, out, "1", {}};
  emit(manifest, out, "replicates.csv", rru::study_csv(report));
  emit(manifest, out, "aggregate.json", rru::study_aggregate_json(report));
  finish_manifest(manifest, out);
  return kExitOk;
}

int cmd_power(const std::string& config_path, const std::vector<double>& effects,
              std::uint64_t replicates, std::uint64_t base_seed, double alpha_override,
              const std::string& out) {
  rru::ParsedConfig parsed = rru::load_config(config_path);
  auto violations = rru::validate_config(parsed.cfg);
  if (!violations.empty()) return fail_config(violations);
  if (effects.empty()) return fail_config({"effects: at least one effect size is required"});

  rru::StudyPlan plan;
  plan.cfg = parsed.cfg;
  plan.replicates = replicates;
  plan.base_seed = base_seed;
  plan.alpha = alpha_override > 0.0 ? alpha_override : parsed.alpha;
  std::vector<rru::PowerRow> rows = rru::power_curve(plan, effects);

  fs::create_directories(out);
  rru::RunManifest manifest{"power", config_path, out, "1", {}};
  emit(manifest, out, "power.csv", rru::power_table_csv(rows));
  finish_manifest(manifest, out);
  return kExitOk;
}

int cmd_check(const std::string& manifest_path, const std::string& out, bool list_only) {
  rru::ToleranceManifest tolerances;
  if (!manifest_path.empty()) tolerances = rru::load_tolerance_manifest(manifest_path);
  if (list_only) {
    for (const auto& [id, name] : rru::acceptance_criteria_names())
      std::printf("%2d  %s\n", id, name.c_str());
    return kExitOk;
  }
  std::vector<rru::CriterionResult> results = rru::run_acceptance(tolerances);
  bool all_pass = true;
  std::string text;
  for (const auto& r : results) {
    all_pass = all_pass && r.pass;
    char line[1024];
    std::snprintf(line, sizeof line, "[%s] %2d %-32s %s\n", r.pass ? "PASS" : "FAIL", r.id,
                  r.name.c_str(), r.detail.c_str());
    std::fputs(line, stdout);
    text += line;
  }
  if (!out.empty()) {
    fs::create_directories(out);
    rru::RunManifest manifest{"check", manifest_path, out, tolerances.version, {}};
    rru::write_file((fs::path(out) / "acceptance.txt").string(), text);
    manifest.file_checksums["acceptance.txt"] = rru::fnv1a_hex(text);
    finish_manifest(manifest, fs::path(out));
  }
  return all_pass ? kExitOk : kExitCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomly reinforced urn simulation and inference laboratory"};
  app.require_subcommand(1);

  std::string config_path, out_dir = "out", tol_manifest;
  std::uint64_t seed = 0, replicates = 100;
  double alpha = 0.0;  // 0 = take from config
  std::vector<double> effects;
  bool list_only = false;

  auto* simulate = app.add_subcommand("simulate", "Run one trial and emit its trajectory");
  simulate->add_option("--config", config_path, "design config JSON")->required();
  simulate->add_option("--seed", seed, "trial seed");
  simulate->add_option("--out", out_dir, "output directory");

  auto* mc = app.add_subcommand("mc", "Run a replicated Monte Carlo study");
  mc->add_option("--config", config_path, "design config JSON")->required();
  mc->add_option("--replicates", replicates, "number of replicates");
  mc->add_option("--seed", seed, "base seed");
  mc->add_option("--alpha", alpha, "test level (overrides config)");
  mc->add_option("--out", out_dir, "output directory");

  auto* power = app.add_subcommand("power", "Empirical power across effect sizes");
  power->add_option("--config", config_path, "design config JSON (effect-0 template)")->required();
  power->add_option("--effects", effects, "effect sizes (mean shifts for arm B)");
  power->add_option("--replicates", replicates, "replicates per effect");
  power->add_option("--seed", seed, "base seed");
  power->add_option("--alpha", alpha, "test level (overrides config)");
  power->add_option("--out", out_dir, "output directory");

  auto* check = app.add_subcommand("check", "Run the acceptance criteria battery");
  check->add_option("--manifest", tol_manifest, "tolerance manifest JSON (default: built-in v1)");
  check->add_option("--out", out_dir, "output directory for the verdict file");
  check->add_flag("--list", list_only, "list criteria without running");
  bool check_no_out = true;
  check->callback([&] { check_no_out = check->count("--out") == 0; });

  CLI11_PARSE(app, argc, argv);

  try {
    if (simulate->parsed()) return cmd_simulate(config_path, seed, out_dir);
    if (mc->parsed()) return cmd_mc(config_path, replicates, seed, alpha, out_dir);
    if (power->parsed()) return cmd_power(config_path, effects, replicates, seed, alpha, out_dir);
    if (check->parsed())
      return cmd_check(tol_manifest, check_no_out ? std::string() : out_dir, list_only);
  } catch (const rru::ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return kExitConfigError;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCheckFailure;
  }
  return kExitOk;
}
