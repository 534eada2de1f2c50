#include "lwtool/job.hpp"

#include <algorithm>
#include <charconv>
#include <istream>

#include <fmt/format.h>

#include "CLI11.hpp"
#include "lw/errors.hpp"

namespace lwtool {

namespace {

std::vector<double> split_numbers(const std::string& text, const char* what) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    const std::string item = CLI::detail::trim_copy(text.substr(pos, end - pos));
    double x = 0.0;
    const auto r = std::from_chars(item.data(), item.data() + item.size(), x);
    if (item.empty() || r.ec != std::errc() || r.ptr != item.data() + item.size()) {
      throw lw::Error(lw::Errc::Config, fmt::format("bad {} '{}'", what, text));
    }
    out.push_back(x);
    pos = end + 1;
  }
  return out;
}

std::string join(const std::vector<std::string>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
  return s;
}

}  // namespace

lw::Rect parse_rect(const std::string& text) {
  const auto v = split_numbers(text, "domain");
  if (v.size() != 4 || !(v[0] < v[1]) || !(v[2] < v[3])) {
    throw lw::Error(lw::Errc::Config, fmt::format("domain must be u0,u1,v0,v1 with u0<u1 and v0<v1, got '{}'", text));
  }
  return {v[0], v[1], v[2], v[3]};
}

std::pair<int, int> parse_res(const std::string& text) {
  const auto x = text.find_first_of("xX");
  const auto num = [&](const std::string& s) {
    int n = 0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), n);
    if (s.empty() || r.ec != std::errc() || r.ptr != s.data() + s.size() || n < 3) {
      throw lw::Error(lw::Errc::Config, fmt::format("resolution must be NuxNv with N >= 3, got '{}'", text));
    }
    return n;
  };
  if (x == std::string::npos) {
    const int n = num(text);
    return {n, n};
  }
  return {num(text.substr(0, x)), num(text.substr(x + 1))};
}

lw::Complex parse_complex(const std::string& text) {
  const auto v = split_numbers(text, "complex number");
  if (v.size() == 1) return {v[0], 0.0};
  if (v.size() == 2) return {v[0], v[1]};
  throw lw::Error(lw::Errc::Config, fmt::format("complex number must be 're' or 're,im', got '{}'", text));
}

void apply_config(std::istream& in, JobConfig& cfg, const std::vector<std::string>& set_on_command_line) {
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigTOML().from_config(in);
  } catch (const CLI::Error& e) {
    throw lw::Error(lw::Errc::Config, fmt::format("config file: {}", e.what()));
  }
  const auto skip = [&](const std::string& key) {
    return std::find(set_on_command_line.begin(), set_on_command_line.end(), key) != set_on_command_line.end();
  };
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;  // section markers
    if (item.parents.size() != 1 || item.parents[0] != "job") {
      throw lw::Error(lw::Errc::Config, fmt::format("config key '{}' is outside the [job] table", item.fullname()));
    }
    const std::string& key = item.name;
    if (skip(key)) continue;
    const std::string value = join(item.inputs);
    if (key == "command") cfg.command = value;
    else if (key == "a") cfg.a = value;
    else if (key == "b") cfg.b = value;
    else if (key == "mu") cfg.mu = value;
    else if (key == "domain") cfg.domain = parse_rect(value);
    else if (key == "res") std::tie(cfg.nu, cfg.nv) = parse_res(value);
    else if (key == "w0") cfg.w0 = parse_complex(value);
    else if (key == "avoid_cut") cfg.avoid_cut = value == "true" || value == "1";
    else if (key == "punctures") {
      cfg.punctures.clear();
      for (const auto& p : item.inputs) cfg.punctures.push_back(parse_complex(p));
    }
    else if (key == "problem") cfg.problem = value;
    else if (key == "k") cfg.k = parse_complex(value);
    else if (key == "theta") cfg.theta = value;
    else if (key == "key") cfg.key = value;
    else if (key == "input") cfg.input = value;
    else if (key == "projection") cfg.projection = value;
    else if (key == "out") cfg.out = value;
    else if (key == "tier") cfg.tier = value;
    else throw lw::Error(lw::Errc::Config, fmt::format("unknown config key '{}'", key));
  }
}

}  // namespace lwtool
