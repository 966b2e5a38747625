#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "critpts/cli.hpp"

namespace {

using namespace critpts;

void emit(const cli::Output& out, const std::string& path) {
  if (path.empty()) std::cout << out.text;
  else write_text_file(path, out.text);
}

int fail(const json& error) {
  std::cerr << error.dump() << "\n";
  return cli::Usage;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Critical points protocol toolkit"};
  app.require_subcommand(1);
  std::string out_path;

  cli::GenOptions gen;
  auto* gen_cmd = app.add_subcommand("gen", "Write a seeded separable dataset");
  gen_cmd->add_option("--seed", gen.seed)->required();
  gen_cmd->add_option("--points", gen.points)->required();
  gen_cmd->add_option("--dim", gen.dim)->required();
  gen_cmd->add_option("--margin", gen.margin)->required();
  gen_cmd->add_option("--shape", gen.shape, "linear or xor")->capture_default_str();
  gen_cmd->add_option("--out", out_path);

  std::string data, strategy = "truthful", court = "bob", mode = "exhaustive";
  auto* critical_cmd = app.add_subcommand("critical", "Critical points of the true positives");
  critical_cmd->add_option("--data", data)->required();
  critical_cmd->add_option("--out", out_path);

  auto* protocol_cmd = app.add_subcommand("protocol", "Run the protocol and write its transcript");
  protocol_cmd->add_option("--data", data)->required();
  protocol_cmd->add_option("--strategy", strategy, "truthful | hide:K | extra:K | report:FILE")->capture_default_str();
  protocol_cmd->add_option("--court", court, "bob | inverted")->capture_default_str();
  protocol_cmd->add_option("--out", out_path);

  auto* audit_cmd = app.add_subcommand("audit", "Audit correctness and truthfulness over reports");
  audit_cmd->add_option("--data", data)->required();
  audit_cmd->add_option("--mode", mode, "exhaustive | sample:SEED:TRIALS")->capture_default_str();
  audit_cmd->add_option("--court", court, "bob | inverted")->capture_default_str();
  audit_cmd->add_option("--out", out_path);

  cli::MlOptions ml;
  auto* ml_cmd = app.add_subcommand("ml", "Compare the single-party and multi-party pipelines");
  ml_cmd->add_option("--universe", ml.universe)->required();
  ml_cmd->add_option("--seed", ml.seed)->required();
  ml_cmd->add_option("--m", ml.m)->required();
  ml_cmd->add_option("--learner", ml.learner, "svm | control | kernel:SPEC")->capture_default_str();
  ml_cmd->add_option("--strategy", ml.strategy, "truthful | hide:K | extra:K | report:FILE")->capture_default_str();
  ml_cmd->add_option("--out", out_path);

  cli::GridOptions grid;
  auto* grid_cmd = app.add_subcommand("safe-grid", "Sample Safe(S+, S-) on a grid as CSV");
  grid_cmd->add_option("--data", grid.data)->required();
  grid_cmd->add_option("--xmin", grid.xmin)->capture_default_str();
  grid_cmd->add_option("--xmax", grid.xmax)->capture_default_str();
  grid_cmd->add_option("--ymin", grid.ymin)->capture_default_str();
  grid_cmd->add_option("--ymax", grid.ymax)->capture_default_str();
  grid_cmd->add_option("--step", grid.step)->capture_default_str();
  grid_cmd->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(cli::error_json("Usage", e.what()));
  }

  try {
    cli::Output out;
    if (*gen_cmd) out = cli::cmd_gen(gen);
    else if (*critical_cmd) out = cli::cmd_critical(data);
    else if (*protocol_cmd) out = cli::cmd_protocol(data, strategy, court);
    else if (*audit_cmd) out = cli::cmd_audit(data, mode, court);
    else if (*ml_cmd) out = cli::cmd_ml(ml);
    else out = cli::cmd_safe_grid(grid);
    emit(out, out_path);
    return out.exit_code;
  } catch (const Error& e) {
    return fail(cli::error_json(e));
  } catch (const std::exception& e) {
    return fail(cli::error_json("Internal", e.what()));
  }
}
