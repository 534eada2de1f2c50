#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lw/domain.hpp"

namespace lwtool {

enum ExitCode : int { kPass = 0, kConfigError = 1, kVerificationFailure = 2 };

struct JobConfig {
  std::string command;  // build, riccati, example, verify, export
  // build
  std::string a, b, mu = "auto";
  std::optional<lw::Rect> domain;
  int nu = 0, nv = 0;
  std::optional<lw::Complex> w0;
  std::vector<lw::Complex> punctures;
  bool avoid_cut = false;
  // riccati
  std::string problem;
  std::optional<lw::Complex> k;
  std::string theta;
  // example
  std::string key;
  // verify / export
  std::string input;
  std::string projection = "drop_x0";
  // outputs and tolerances
  std::string out;
  std::string tier;  // analytic, integrated or fd; overrides LW_TOL_TIER
};

// Value parsers shared by the command line and config files. All throw
// lw::Error(Config).
lw::Rect parse_rect(const std::string& text);        // "u0,u1,v0,v1"
std::pair<int, int> parse_res(const std::string& text);  // "NuxNv" or "N"
lw::Complex parse_complex(const std::string& text);  // "re,im" or "re"

// Reads the [job] table of a TOML file into `cfg`. Keys listed in
// `set_on_command_line` are skipped, so command-line values win.
void apply_config(std::istream& in, JobConfig& cfg, const std::vector<std::string>& set_on_command_line);

}  // namespace lwtool
