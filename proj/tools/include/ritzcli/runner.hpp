#pragma once

#include <iosfwd>

#include "ritzcli/config.hpp"
#include "ritzcli/registry.hpp"

namespace ritzcli {

/// Subcommand entry points. Each writes its artifacts into cfg.output.dir,
/// logs a human-readable summary, and returns the process exit code
/// (0 iff every configured check passed).
int cmd_grad_check(const RunConfig& cfg, std::ostream& log);
int cmd_train(const RunConfig& cfg, std::ostream& log);
int cmd_study(const RunConfig& cfg, std::ostream& log);
int cmd_pou_check(const RunConfig& cfg, std::ostream& log);
int cmd_bounds(const RunConfig& cfg, std::ostream& log);

}  // namespace ritzcli
