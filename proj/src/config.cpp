// Copyright 2026 The syndeepc Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "syndeepc/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "syndeepc/error.hpp"

namespace syndeepc {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

template <typename T, typename F>
T convert(const std::string& key, const std::string& text, F&& f) {
  std::size_t used = 0;
  T v{};
  try {
    v = f(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (text.empty() || used != text.size()) {
    throw ConfigError("config: `" + key + "` expects a number, got `" + text + "`");
  }
  return v;
}

}  // namespace

Config Config::defaults() {
  Config c;
  c.values_ = {
      {"system.kind", "quadcopter"},  // quadcopter | double-integrator | file
      {"system.model_file", ""},
      {"system.Ts", "0.05"},
      {"horizon.Ki", "1"},
      {"horizon.K", "30"},
      {"data.N", "214"},
      {"noise.kind", "gaussian"},  // none | gaussian
      {"noise.variance", "0.0078125"},
      {"noise.sigma", ""},  // overrides noise.variance when set
      {"input.lower", "-0.7007"},
      {"input.upper", "0.2993"},
      {"cost.c", "200"},
      {"cost.rho", "1e5"},
      {"cost.weights", ""},  // per output channel; empty: the reference channels
      {"reference.kind", "figure8"},  // figure8 | constant
      {"reference.period", "20"},
      {"reference.amplitude", "1"},
      {"reference.altitude", "1"},
      {"reference.value", "0"},
      {"robust.eps_beta", "1e-3"},
      {"robust.mode", "robust"},  // robust | softened | deterministic
      {"compress.S", "0"},        // 0: full data
      {"compress.norm", "one"},
      {"compress.init", "kmeans++"},
      {"compress.max_iters", "200"},
      {"compress.tol", "1e-6"},
      {"compress.gamma", "0"},
      {"compress.hull_guard", "true"},
      {"run.steps", "200"},
      {"run.seed", "1"},
      {"sweep.S", "8,23,46,92,184"},
      {"sweep.jobs", "1"},
      {"output.dir", "out"},
  };
  return c;
}

Config Config::parse(std::istream& is) {
  Config c = defaults();
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config line " + std::to_string(lineno) + ": expected `key = value`");
    }
    c.set(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return c;
}

Config Config::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  return parse(in);
}

void Config::set(const std::string& key, const std::string& value) {
  if (!known(key)) throw ConfigError("config: unknown key `" + key + "`");
  values_[key] = value;
}

void Config::apply_override(const std::string& assignment) {
  std::string s = assignment;
  if (s.rfind("--", 0) == 0) s = s.substr(2);
  const auto eq = s.find('=');
  if (eq == std::string::npos) throw ConfigError("override `" + assignment + "` lacks `=`");
  set(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
}

const std::string& Config::get(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("config: unknown key `" + key + "`");
  return it->second;
}

double Config::get_double(const std::string& key) const {
  return convert<double>(key, get(key),
                         [](const std::string& s, std::size_t* n) { return std::stod(s, n); });
}

long Config::get_int(const std::string& key) const {
  return convert<long>(key, get(key),
                       [](const std::string& s, std::size_t* n) { return std::stol(s, n); });
}

std::uint64_t Config::get_u64(const std::string& key) const {
  const std::string& s = get(key);
  if (!s.empty() && s[0] == '-') throw ConfigError("config: `" + key + "` must be nonnegative");
  return convert<std::uint64_t>(
      key, s, [](const std::string& t, std::size_t* n) { return std::stoull(t, n); });
}

bool Config::get_bool(const std::string& key) const {
  const std::string& s = get(key);
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("config: `" + key + "` expects true/false, got `" + s + "`");
}

std::vector<double> Config::get_list(const std::string& key) const {
  std::vector<double> out;
  std::stringstream ss(get(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    out.push_back(convert<double>(
        key, item, [](const std::string& s, std::size_t* n) { return std::stod(s, n); }));
  }
  return out;
}

void Config::write(std::ostream& os) const {
  for (const auto& [k, v] : values_) os << k << " = " << v << '\n';
}

std::string Config::hash() const {
  std::ostringstream os;
  write(os);
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : os.str()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace syndeepc
