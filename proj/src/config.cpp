#include "rodsed/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rodsed/error.hpp"

namespace rodsed {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) parts.push_back(trim(item));
  return parts;
}

double parse_real(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  double x = 0.0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc{} || p != t.data() + t.size() || t.empty())
    throw Error(ErrorKind::config, key + ": not a number: '" + v + "'");
  return x;
}

int parse_int(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  int x = 0;
  const auto [p, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (ec != std::errc{} || p != t.data() + t.size() || t.empty())
    throw Error(ErrorKind::config, key + ": not an integer: '" + v + "'");
  return x;
}

bool parse_bool(const std::string& key, const std::string& v) {
  const std::string t = trim(v);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw Error(ErrorKind::config, key + ": not a boolean: '" + v + "'");
}

}  // namespace

Preset parse_preset(const std::string& name) {
  if (name == "shear-accuracy") return Preset::shear_accuracy;
  if (name == "shear-adaptive") return Preset::shear_adaptive;
  if (name == "droplet-2d") return Preset::droplet_2d;
  throw Error(ErrorKind::config, "unknown preset '" + name + "' (shear-accuracy, shear-adaptive, droplet-2d)");
}

const char* to_string(Preset preset) {
  switch (preset) {
    case Preset::shear_accuracy: return "shear-accuracy";
    case Preset::shear_adaptive: return "shear-adaptive";
    case Preset::droplet_2d: return "droplet-2d";
  }
  return "?";
}

ResolutionMap ExperimentConfig::resolution() const {
  if (regions.empty()) return ResolutionMap::uniform(x_left, x_right, order);
  return ResolutionMap(regions);
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(ErrorKind::config, what); };
  if (!(x_right > x_left)) fail("x_right must exceed x_left");
  if (cells < 4) fail("cells must be >= 4");
  if (two_dimensional()) {
    if (!(z_right > z_left)) fail("z_right must exceed z_left");
    if (cells_z < 4) fail("cells_z must be >= 4");
    if (!regions.empty()) fail("resolution regions are only supported in 1D");
  }
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) fail("t_end must be finite and >= 0");
  if (!(cfl > 0.0 && cfl <= 1.0)) fail("cfl must be in (0, 1]");
  if (!(dt_max > 0.0)) fail("dt_max must be > 0");
  if (order < 1) fail("order must be >= 1");
  try {
    params.validate();
    if (!two_dimensional()) resolution().validate(grid1d());
  } catch (const Error& e) {
    fail(e.what());
  }
  for (double t : output_times)
    if (!(t >= 0.0 && t <= t_end)) fail("output times must lie in [0, t_end]");
  if (!std::is_sorted(output_times.begin(), output_times.end())) fail("output times must be sorted");
}

ExperimentConfig preset_config(Preset preset) {
  ExperimentConfig c;
  c.preset = preset;
  switch (preset) {
    case Preset::shear_accuracy:
      c.cells = 512;
      c.t_end = 30.0;
      c.params = {0.01, 1.0, 1.0};
      c.order = 1;
      break;
    case Preset::shear_adaptive:
      c.cells = 1000;
      c.t_end = 50.0;
      c.params = {0.01, 1.0, 1.0};
      c.order = 1;
      break;
    case Preset::droplet_2d:
      c.cells = 128;
      c.cells_z = 128;
      c.t_end = 15.0;
      c.params = {0.1, 1.0, 1.0};
      c.order = 4;
      break;
  }
  return c;
}

std::vector<Region> parse_regions(const std::string& text) {
  std::vector<Region> regions;
  for (const std::string& item : split(text, ',')) {
    if (item.empty()) continue;
    const auto f = split(item, ':');
    if (f.size() != 3) throw Error(ErrorKind::config, "region '" + item + "' is not a:b:order");
    regions.push_back({parse_real("regions", f[0]), parse_real("regions", f[1]), parse_int("regions", f[2])});
  }
  return regions;
}

std::vector<double> parse_real_list(const std::string& text) {
  std::vector<double> out;
  for (const std::string& item : split(text, ','))
    if (!item.empty()) out.push_back(parse_real("list", item));
  return out;
}

std::vector<int> parse_int_list(const std::string& text) {
  std::vector<int> out;
  for (const std::string& item : split(text, ','))
    if (!item.empty()) out.push_back(parse_int("list", item));
  return out;
}

void apply_setting(ExperimentConfig& c, const std::string& raw_key, const std::string& value) {
  const std::string key = trim(raw_key);
  if (key == "preset") {
    c = preset_config(parse_preset(trim(value)));
  } else if (key == "x_left") {
    c.x_left = parse_real(key, value);
  } else if (key == "x_right") {
    c.x_right = parse_real(key, value);
  } else if (key == "cells" || key == "grid") {
    c.cells = parse_int(key, value);
    if (key == "grid") c.cells_z = c.cells;
  } else if (key == "z_left") {
    c.z_left = parse_real(key, value);
  } else if (key == "z_right") {
    c.z_right = parse_real(key, value);
  } else if (key == "cells_z") {
    c.cells_z = parse_int(key, value);
  } else if (key == "t_end") {
    c.t_end = parse_real(key, value);
  } else if (key == "cfl") {
    c.cfl = parse_real(key, value);
  } else if (key == "dt_max") {
    c.dt_max = parse_real(key, value);
  } else if (key == "D_r") {
    c.params.D_r = parse_real(key, value);
  } else if (key == "delta") {
    c.params.delta = parse_real(key, value);
  } else if (key == "Re") {
    c.params.Re = parse_real(key, value);
  } else if (key == "order") {
    c.order = parse_int(key, value);
  } else if (key == "regions") {
    c.regions = parse_regions(value);
  } else if (key == "limiter") {
    try {
      c.limiter = parse_limiter(trim(value));
    } catch (const Error& e) {
      throw Error(ErrorKind::config, e.what());
    }
  } else if (key == "gradient_timing") {
    const std::string v = trim(value);
    if (v == "current")
      c.timing = GradientTiming::current;
    else if (v == "latest")
      c.timing = GradientTiming::latest_computed;
    else
      throw Error(ErrorKind::config, "gradient_timing must be 'current' or 'latest'");
  } else if (key == "output_times") {
    c.output_times = parse_real_list(value);
  } else if (key == "out") {
    c.out = trim(value);
  } else if (key == "write_indicator") {
    c.write_indicator = parse_bool(key, value);
  } else {
    throw Error(ErrorKind::config, "unknown setting '" + key + "'");
  }
}

void apply_config_text(ExperimentConfig& config, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorKind::config, origin + ":" + std::to_string(number) + ": expected key = value");
    if (trim(line.substr(0, eq)) == "preset") continue;  // chosen before the file is applied
    try {
      apply_setting(config, line.substr(0, eq), line.substr(eq + 1));
    } catch (const Error& e) {
      throw Error(ErrorKind::config, origin + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, "cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

void apply_config_file(ExperimentConfig& config, const std::string& path) {
  apply_config_text(config, read_text(path), path);
}

std::string preset_in_config_file(const std::string& path) {
  std::istringstream in(read_text(path));
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq != std::string::npos && trim(line.substr(0, eq)) == "preset") return trim(line.substr(eq + 1));
  }
  return {};
}

}  // namespace rodsed
