#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "lw/surface.hpp"
#include "lw/verify.hpp"
#include "lwtool/export.hpp"

namespace lwtool {

struct ExampleResult {
  lw::SurfaceGrid grid;
  lw::VerificationReport report;
  nlohmann::ordered_json details = nlohmann::ordered_json::object();  // non-numeric facts (classification, data)
  Projection projection = Projection::DropX0;                         // natural OBJ projection
};

const std::vector<std::string>& example_keys();

// Builds the named example through the library pipelines. `res` overrides the
// default nodes per axis (0 keeps it). Throws lw::Error(Config) for unknown keys.
ExampleResult run_example(const std::string& key, int res = 0);

}  // namespace lwtool
