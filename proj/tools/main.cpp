// agrinav: generate synthetic navigation benchmarks, decompose instructions,
// run policies over episodes, and aggregate the scores.

#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "agrinav/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Instruction-following navigation evaluation harness"};
  app.require_subcommand(1);

  std::string out_dir;
  std::string dataset_dir;
  std::string format = "table";
  std::string config_path;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int parallelism = 0;
  bool strict = false;
  bool resume = false;

  // gen
  auto* gen = app.add_subcommand("gen", "generate a synthetic episode dataset");
  std::string spec_path;
  int episodes = 0;
  gen->add_option("--spec", spec_path, "generator spec JSON file");
  gen->add_option("--out", out_dir, "output dataset directory")->required();
  gen->add_option("--seed", seed, "override the spec seed");
  gen->add_option("--episodes", episodes, "override the spec episode count");

  // stats
  auto* stats = app.add_subcommand("stats", "dataset statistics");
  stats->add_option("--dataset", dataset_dir, "dataset directory")->required();
  stats->add_option("--format", format, "table|csv");

  // validate
  auto* validate = app.add_subcommand("validate", "validate every episode manifest");
  validate->add_option("--dataset", dataset_dir, "dataset directory")->required();

  // decompose
  auto* decompose = app.add_subcommand("decompose", "decompose one instruction into subtasks");
  std::string instruction;
  std::string stl_template;
  decompose->add_option("instruction", instruction, "the instruction text")->required();
  decompose->add_option("--stl-template", stl_template, "decomposition prompt template file");
  decompose->add_flag("--strict", strict, "flagged principles become errors");

  // eval
  auto* eval = app.add_subcommand("eval", "run a policy over a dataset and score it");
  std::string policy = "oracle";
  std::string dm_template;
  eval->add_option("--dataset", dataset_dir, "dataset directory")->required();
  eval->add_option("--policy", policy, "vlm|vlm_no_stl|random|oracle");
  eval->add_option("--out", out_dir, "output directory for runs, results and reports")
      ->required();
  eval->add_option("--config", config_path, "kinematics config JSON file");
  eval->add_option("--stl-template", stl_template, "decomposition prompt template file");
  eval->add_option("--dm-template", dm_template, "decision prompt template file");
  eval->add_option("--seed", seed, "policy seed (random)");
  eval->add_option("--parallelism", parallelism, "episode-level worker count (0 = auto)");
  eval->add_option("--format", format, "table|csv|json");
  eval->add_flag("--strict", strict, "strict decomposition validation");
  eval->add_flag("--resume", resume, "skip episodes that already have results");

  // report
  auto* report = app.add_subcommand("report", "re-render the report from result files");
  report->add_option("--results", dataset_dir, "eval output (or results) directory")
      ->required();
  report->add_option("--format", format, "table|csv|json");

  CLI11_PARSE(app, argc, argv);

  if (gen->parsed()) {
    seed_set = gen->count("--seed") > 0;
    return agrinav::cmd_gen(spec_path, out_dir,
                            seed_set ? std::optional<std::uint64_t>(seed) : std::nullopt,
                            episodes > 0 ? std::optional<int>(episodes) : std::nullopt,
                            std::cout, std::cerr);
  }
  if (stats->parsed()) {
    return agrinav::cmd_stats(dataset_dir, format, std::cout, std::cerr);
  }
  if (validate->parsed()) {
    return agrinav::cmd_validate(dataset_dir, std::cout, std::cerr);
  }
  if (decompose->parsed()) {
    return agrinav::cmd_decompose(instruction, strict, stl_template, nullptr, std::cout,
                                  std::cerr);
  }
  if (eval->parsed()) {
    agrinav::RunManifest manifest;
    manifest.dataset_dir = dataset_dir;
    manifest.policy_kind = policy;
    manifest.kinematics_config_path = config_path;
    manifest.decompose_template_path = stl_template;
    manifest.decision_template_path = dm_template;
    manifest.out_dir = out_dir;
    manifest.parallelism = parallelism;
    manifest.seed = seed;
    manifest.strict = strict;
    manifest.resume = resume;
    manifest.format = format;
    return agrinav::cmd_eval(manifest, nullptr, std::cout, std::cerr);
  }
  if (report->parsed()) {
    return agrinav::cmd_report(dataset_dir, format, std::cout, std::cerr);
  }
  return 2;
}
