#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "stochlab/errors.hpp"
#include "stochlab/experiment.hpp"

namespace stochlab::experiment {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::optional<double> parse_real(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc{} || r.ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

// Integers may be written as 1e7; the value must be integral and fit in 53 bits.
std::optional<long long> parse_integer(std::string_view s) {
  s = trim(s);
  long long v = 0;
  const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec == std::errc{} && r.ptr == s.data() + s.size()) return v;
  const auto d = parse_real(s);
  if (!d || std::floor(*d) != *d || std::abs(*d) > 9007199254740992.0) return std::nullopt;
  return static_cast<long long>(*d);
}

std::optional<bool> parse_bool(std::string_view s) {
  s = trim(s);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  return std::nullopt;
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  while (true) {
    const auto comma = s.find(',');
    out.push_back(trim(s.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    s.remove_prefix(comma + 1);
  }
  return out;
}

const std::string& raw(const ExperimentConfig& c, const std::string& key) {
  const auto it = c.params.find(key);
  if (it == c.params.end()) throw ArgumentError("missing parameter '" + key + "'");
  return it->second;
}

[[noreturn]] void bad(const std::string& key, const std::string& value, const char* what) {
  throw ArgumentError("parameter '" + key + "' = '" + value + "' is not " + what);
}

std::string describe_bounds(const ParamSpec& p) {
  std::ostringstream os;
  if (p.min && p.max) os << "in " << (p.min_exclusive ? "(" : "[") << *p.min << ", " << *p.max << "]";
  else if (p.min) os << (p.min_exclusive ? "> " : ">= ") << *p.min;
  else if (p.max) os << "<= " << *p.max;
  return os.str();
}

bool in_bounds(const ParamSpec& p, double v) {
  if (p.min && (p.min_exclusive ? !(v > *p.min) : !(v >= *p.min))) return false;
  if (p.max && !(v <= *p.max)) return false;
  return true;
}

void check_param(const ParamSpec& p, const std::string& value, std::vector<std::string>& out) {
  const auto fail = [&](const std::string& what) {
    out.push_back(p.key + ": " + what + " (got '" + value + "')");
  };
  switch (p.type) {
    case ParamType::integer: {
      const auto v = parse_integer(value);
      if (!v) return fail("must be an integer");
      if (!in_bounds(p, static_cast<double>(*v))) fail("must be " + describe_bounds(p));
      return;
    }
    case ParamType::real: {
      const auto v = parse_real(value);
      if (!v) return fail("must be a finite number");
      if (!in_bounds(p, *v)) fail("must be " + describe_bounds(p));
      return;
    }
    case ParamType::boolean:
      if (!parse_bool(value)) fail("must be true or false");
      return;
    case ParamType::text:
      if (!p.choices.empty() && std::find(p.choices.begin(), p.choices.end(), value) == p.choices.end()) {
        std::string list;
        for (const auto& c : p.choices) list += (list.empty() ? "" : ", ") + c;
        fail("must be one of " + list);
      }
      return;
    case ParamType::real_list:
    case ParamType::integer_list: {
      if (trim(value).empty()) return fail("must be a non-empty comma-separated list");
      for (auto item : split_list(value)) {
        std::optional<double> v;
        if (p.type == ParamType::integer_list) {
          const auto i = parse_integer(item);
          if (i) v = static_cast<double>(*i);
        } else {
          v = parse_real(item);
        }
        if (!v) return fail(p.type == ParamType::integer_list ? "must list integers" : "must list numbers");
        if (!in_bounds(p, *v)) return fail("every entry must be " + describe_bounds(p));
      }
      return;
    }
  }
}

}  // namespace

long long ExperimentConfig::integer(const std::string& key) const {
  const auto& v = raw(*this, key);
  const auto r = parse_integer(v);
  if (!r) bad(key, v, "an integer");
  return *r;
}

double ExperimentConfig::real(const std::string& key) const {
  const auto& v = raw(*this, key);
  const auto r = parse_real(v);
  if (!r) bad(key, v, "a number");
  return *r;
}

bool ExperimentConfig::flag(const std::string& key) const {
  const auto& v = raw(*this, key);
  const auto r = parse_bool(v);
  if (!r) bad(key, v, "a boolean");
  return *r;
}

const std::string& ExperimentConfig::text(const std::string& key) const { return raw(*this, key); }

std::vector<double> ExperimentConfig::reals(const std::string& key) const {
  const auto& v = raw(*this, key);
  std::vector<double> out;
  for (auto item : split_list(v)) {
    const auto r = parse_real(item);
    if (!r) bad(key, v, "a list of numbers");
    out.push_back(*r);
  }
  return out;
}

std::vector<long long> ExperimentConfig::integers(const std::string& key) const {
  const auto& v = raw(*this, key);
  std::vector<long long> out;
  for (auto item : split_list(v)) {
    const auto r = parse_integer(item);
    if (!r) bad(key, v, "a list of integers");
    out.push_back(*r);
  }
  return out;
}

const ExperimentDef* find_experiment(std::string_view name) {
  for (const auto& def : registry())
    if (def.name == name) return &def;
  return nullptr;
}

std::vector<std::string> experiment_names() {
  std::vector<std::string> out;
  for (const auto& def : registry()) out.push_back(def.name);
  return out;
}

namespace {

std::string supported_list() {
  std::string list;
  for (const auto& n : experiment_names()) list += (list.empty() ? "" : ", ") + n;
  return list;
}

}  // namespace

ExperimentConfig default_config(std::string_view name) {
  const ExperimentDef* def = find_experiment(name);
  if (!def)
    throw ArgumentError("unknown experiment '" + std::string(name) + "'; supported: " + supported_list());
  ExperimentConfig c;
  c.experiment = def->name;
  for (const auto& p : def->params) c.params[p.key] = p.default_value;
  return c;
}

void apply_override(std::string_view assignment, ExperimentConfig& config) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos)
    throw ArgumentError("expected key=value, got '" + std::string(assignment) + "'");
  const std::string key(trim(assignment.substr(0, eq)));
  const std::string value(trim(assignment.substr(eq + 1)));
  if (key.empty()) throw ArgumentError("empty key in '" + std::string(assignment) + "'");
  if (key == "seed") {
    const auto s = parse_integer(value);
    std::uint64_t seed = 0;
    const auto r = std::from_chars(value.data(), value.data() + value.size(), seed);
    if (r.ec == std::errc{} && r.ptr == value.data() + value.size()) config.seed = seed;
    else if (s && *s >= 0) config.seed = static_cast<std::uint64_t>(*s);
    else throw ArgumentError("seed must be an unsigned 64-bit integer, got '" + value + "'");
  } else if (key == "out") {
    config.output_dir = value;
  } else {
    config.params[key] = value;
  }
}

void apply_config_text(std::string_view text, ExperimentConfig& config) {
  std::string section;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = trim(text.substr(0, nl));
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (line.empty() || line[0] == '#' || line[0] == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ArgumentError("config line " + std::to_string(line_no) + ": unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      continue;
    }
    if (line.find('=') == std::string_view::npos)
      throw ArgumentError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key(trim(line.substr(0, line.find('='))));
    if (section.empty() || section == "run") {
      if (key != "seed" && key != "out")
        throw ArgumentError("config line " + std::to_string(line_no) + ": only seed and out belong outside an experiment section");
      apply_override(line, config);
    } else if (section == config.experiment) {
      apply_override(line, config);
    }
  }
}

void apply_manifest(std::string_view json_text, ExperimentConfig& config) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("manifest is not valid JSON: ") + e.what());
  }
  try {
    const auto& echo = j.at("config");
    const std::string name = echo.at("experiment").get<std::string>();
    if (name != config.experiment)
      throw ArgumentError("manifest is for experiment '" + name + "', not '" + config.experiment + "'");
    config.seed = echo.at("seed").get<std::uint64_t>();
    for (const auto& [key, value] : echo.at("parameters").items())
      config.params[key] = value.get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(std::string("manifest is missing fields: ") + e.what());
  }
}

void apply_config_file(const std::filesystem::path& file, ExperimentConfig& config) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw ArgumentError("cannot read config file '" + file.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') apply_manifest(text, config);
  else apply_config_text(text, config);
}

std::vector<std::string> validate(const ExperimentConfig& config) {
  std::vector<std::string> out;
  const ExperimentDef* def = find_experiment(config.experiment);
  if (!def) {
    out.push_back("experiment: unknown '" + config.experiment + "'; supported: " + supported_list());
    return out;
  }
  for (const auto& [key, value] : config.params) {
    const auto it = std::find_if(def->params.begin(), def->params.end(),
                                 [&](const ParamSpec& p) { return p.key == key; });
    if (it == def->params.end()) out.push_back(key + ": unknown parameter for '" + def->name + "'");
  }
  for (const auto& p : def->params) {
    const auto it = config.params.find(p.key);
    if (it == config.params.end()) {
      out.push_back(p.key + ": missing");
      continue;
    }
    check_param(p, it->second, out);
  }
  if (config.output_dir.empty()) out.push_back("out: must not be empty");
  if (out.empty() && def->check) {
    try {
      def->check(config, out);
    } catch (const std::exception& e) {
      out.push_back(std::string("configuration: ") + e.what());
    }
  }
  return out;
}

}  // namespace stochlab::experiment
