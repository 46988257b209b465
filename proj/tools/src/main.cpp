#include <CLI11.hpp>
#include <iostream>

#include "ritzcli/runner.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::int64_t seed = -1;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "run configuration file");
  cmd->add_option("--seed", args.seed, "override [train] seed");
  cmd->add_option("--out", args.out_dir, "override [output] dir");
}

ritzcli::RunConfig load(const CommonArgs& args) {
  ritzcli::RunConfig cfg = args.config_path.empty()
                               ? ritzcli::RunConfig{}
                               : ritzcli::parse_config_file(args.config_path);
  if (args.seed >= 0) cfg.train.seed = static_cast<std::uint64_t>(args.seed);
  if (!args.out_dir.empty()) cfg.output.dir = args.out_dir;
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"deep Ritz experiment runner"};
  app.require_subcommand(1);

  CommonArgs grad_args, train_args, study_args, pou_args, bounds_args;
  double bounds_n = 0.0;
  int bounds_d = 0;
  bool corrupt = false;

  CLI::App* grad = app.add_subcommand("grad-check",
                                      "finite-difference and property suites");
  add_common(grad, grad_args);
  grad->add_flag("--corrupt-gradients", corrupt,
                 "negative-control hook: perturb the analytic gradient");

  CLI::App* train = app.add_subcommand("train", "end-to-end PGD solve");
  add_common(train, train_args);

  CLI::App* study = app.add_subcommand("study", "error-vs-n rate study");
  add_common(study, study_args);

  CLI::App* pou = app.add_subcommand("pou-check",
                                     "partition-of-unity bound sweeps");
  add_common(pou, pou_args);

  CLI::App* bounds = app.add_subcommand("bounds",
                                        "theoretical hyperparameters and norms");
  add_common(bounds, bounds_args);
  bounds->add_option("--n", bounds_n, "override [bounds] n");
  bounds->add_option("--d", bounds_d, "override [bounds] d");

  CLI11_PARSE(app, argc, argv);

  try {
    if (grad->parsed()) {
      ritzcli::RunConfig cfg = load(grad_args);
      if (corrupt) cfg.gradcheck.corrupt = true;
      return ritzcli::cmd_grad_check(cfg, std::cout);
    }
    if (train->parsed()) {
      return ritzcli::cmd_train(load(train_args), std::cout);
    }
    if (study->parsed()) {
      return ritzcli::cmd_study(load(study_args), std::cout);
    }
    if (pou->parsed()) {
      return ritzcli::cmd_pou_check(load(pou_args), std::cout);
    }
    if (bounds->parsed()) {
      ritzcli::RunConfig cfg = load(bounds_args);
      if (bounds_n > 0.0) cfg.bounds.n = bounds_n;
      if (bounds_d > 0) cfg.bounds.d = bounds_d;
      return ritzcli::cmd_bounds(cfg, std::cout);
    }
  } catch (const ritzcli::ConfigError& err) {
    std::cerr << "config error: " << err.what() << "\n";
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  }
  return 0;
}
