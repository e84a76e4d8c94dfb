#include <CLI11.hpp>

#include <iostream>
#include <string>

#include "swapquad/experiment.hpp"

namespace {

struct CommonFlags {
  std::string config;
  std::string out;
  std::string format;
  int threads = 0;
  std::string subtraction;
  std::string correction;
  int newton_steps = 0;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--config", flags.config, "experiment config file")->required();
  cmd->add_option("--out", flags.out, "output path (overrides config)");
  cmd->add_option("--format", flags.format, "csv|json (overrides config)");
  cmd->add_option("--threads", flags.threads, "worker threads");
  cmd->add_option("--subtraction", flags.subtraction, "on|off|auto");
  cmd->add_option("--correction", flags.correction, "on|off");
  cmd->add_option("--newton-steps", flags.newton_steps, "Newton refinements");
}

swapquad::ExperimentConfig load_config(const CommonFlags& flags) {
  auto cfg = swapquad::ExperimentConfig::parse_file(flags.config);
  if (!flags.out.empty()) cfg.set("output.path", flags.out);
  if (!flags.format.empty()) cfg.set("output.format", flags.format);
  if (flags.threads > 0) cfg.set("strategy.threads", std::to_string(flags.threads));
  if (!flags.subtraction.empty()) cfg.set("strategy.subtraction", flags.subtraction);
  if (!flags.correction.empty()) cfg.set("strategy.correction", flags.correction);
  if (flags.newton_steps > 0) {
    cfg.set("strategy.newton_steps", std::to_string(flags.newton_steps));
  }
  return cfg;
}

int emit_result(const swapquad::ExperimentConfig& cfg,
                const swapquad::ResultTable& table) {
  const std::string path = cfg.get("output.path", "");
  const std::string format = cfg.get("output.format", "csv");
  if (path.empty()) {
    if (format == "csv") {
      swapquad::emit_csv(table, std::cout);
    } else {
      swapquad::emit_json(table, std::cout);
    }
  } else {
    swapquad::emit(table, path, format);
    std::cerr << "wrote " << table.rows.size() << " rows to " << path << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"swapquad: close evaluation of 2D layer potentials"};
  app.require_subcommand(1);

  CommonFlags kc, fm, sl, tc, so, ev;
  CLI::App* kernel = app.add_subcommand(
      "kernel-convergence", "classic vs modified rule on canonical kernels");
  add_common(kernel, kc);
  CLI::App* field = app.add_subcommand("field-map", "error map over a grid");
  add_common(field, fm);
  CLI::App* slice = app.add_subcommand("slice", "near-boundary slice or corner sector");
  add_common(slice, sl);
  CLI::App* conv = app.add_subcommand("target-convergence", "error vs n at one target");
  add_common(conv, tc);
  CLI::App* solve_cmd = app.add_subcommand("solve", "solve the BIE and dump the density");
  add_common(solve_cmd, so);
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate the potential at points");
  add_common(eval_cmd, ev);

  CLI11_PARSE(app, argc, argv);

  try {
    if (kernel->parsed()) {
      const auto cfg = load_config(kc);
      return emit_result(cfg, swapquad::run_kernel_convergence(cfg));
    }
    if (field->parsed()) {
      const auto cfg = load_config(fm);
      return emit_result(cfg, swapquad::run_field_map(cfg));
    }
    if (slice->parsed()) {
      const auto cfg = load_config(sl);
      return emit_result(cfg, swapquad::run_slice(cfg));
    }
    if (conv->parsed()) {
      const auto cfg = load_config(tc);
      return emit_result(cfg, swapquad::run_target_convergence(cfg));
    }
    if (solve_cmd->parsed()) {
      const auto cfg = load_config(so);
      return emit_result(cfg, swapquad::run_solve(cfg));
    }
    if (eval_cmd->parsed()) {
      const auto cfg = load_config(ev);
      return emit_result(cfg, swapquad::run_eval(cfg));
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
