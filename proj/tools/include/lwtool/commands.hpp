#pragma once

#include <ostream>

#include "lwtool/job.hpp"

namespace lwtool {

// Each command writes its artifacts under cfg.out and a summary to `out`;
// diagnostics go to `err`. The return value is an ExitCode.
int cmd_build(const JobConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_riccati(const JobConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_example(const JobConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_verify(const JobConfig& cfg, std::ostream& out, std::ostream& err);
int cmd_export(const JobConfig& cfg, std::ostream& out, std::ostream& err);

int run_job(const JobConfig& cfg, std::ostream& out, std::ostream& err);

// Full command-line entry point (argv[0] is the program name).
int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace lwtool
