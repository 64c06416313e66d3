#include "mhdreg/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "mhdreg/errors.hpp"
#include "parse_util.hpp"

namespace mhdreg {
namespace {

double real_value(const std::string& key, std::string_view value) {
  const auto v = detail::parse_real(value);
  if (!v || !std::isfinite(*v)) throw ConfigError(key, "expected a finite number, got '" + std::string(value) + "'");
  return *v;
}

long long int_value(const std::string& key, std::string_view value) {
  const auto v = detail::parse_integer(value);
  if (!v) throw ConfigError(key, "expected an integer, got '" + std::string(value) + "'");
  return *v;
}

bool bool_value(const std::string& key, std::string_view value) {
  const std::string v(detail::trim(value));
  if (v == "true" || v == "1" || v == "on" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "off" || v == "no") return false;
  throw ConfigError(key, "expected true or false, got '" + v + "'");
}

double positive(const std::string& key, double v) {
  if (!(v > 0.0)) throw ConfigError(key, "must be positive");
  return v;
}

double nonnegative(const std::string& key, double v) {
  if (!(v >= 0.0)) throw ConfigError(key, "must be >= 0");
  return v;
}

std::vector<CriterionSpec> criteria_value(const std::string& key, std::string_view value) {
  std::vector<CriterionSpec> out;
  std::string item;
  std::istringstream in{std::string(value)};
  while (std::getline(in, item, ',')) {
    const auto t = detail::trim(item);
    if (t.empty()) continue;
    try {
      out.push_back(CriterionSpec::parse(t));
    } catch (const Error& e) {
      throw ConfigError(key, e.what());
    }
  }
  return out;
}

}  // namespace

RunConfig parse_run_config(std::string_view text) {
  RunConfig cfg;
  using Setter = std::function<void(const std::string&, std::string_view)>;
  const std::map<std::string, Setter> setters = {
      {"grid_n",
       [&](const std::string& k, std::string_view v) {
         const long long n = int_value(k, v);
         if (n < 4 || n % 2 != 0 || n > 4096) throw ConfigError(k, "must be an even integer in [4, 4096]");
         cfg.grid_n = static_cast<int>(n);
       }},
      {"box_length", [&](const std::string& k, std::string_view v) { cfg.box_length = positive(k, real_value(k, v)); }},
      {"dt", [&](const std::string& k, std::string_view v) { cfg.solver.dt = positive(k, real_value(k, v)); }},
      {"t_end", [&](const std::string& k, std::string_view v) { cfg.solver.t_end = nonnegative(k, real_value(k, v)); }},
      {"nu", [&](const std::string& k, std::string_view v) { cfg.solver.nu = nonnegative(k, real_value(k, v)); }},
      {"eta", [&](const std::string& k, std::string_view v) { cfg.solver.eta = nonnegative(k, real_value(k, v)); }},
      {"dealias", [&](const std::string& k, std::string_view v) { cfg.solver.dealias = bool_value(k, v); }},
      {"form",
       [&](const std::string& k, std::string_view v) {
         try {
           cfg.solver.form = parse_form(detail::trim(v));
         } catch (const Error& e) {
           throw ConfigError(k, e.what());
         }
       }},
      {"init",
       [&](const std::string& k, std::string_view v) {
         try {
           cfg.init = parse_init_kind(detail::trim(v));
         } catch (const Error& e) {
           throw ConfigError(k, e.what());
         }
       }},
      {"init_amplitude", [&](const std::string& k, std::string_view v) { cfg.init_params.amplitude = real_value(k, v); }},
      {"init_epsilon", [&](const std::string& k, std::string_view v) { cfg.init_params.epsilon = real_value(k, v); }},
      {"init_kmax", [&](const std::string& k, std::string_view v) { cfg.init_params.k_max = positive(k, real_value(k, v)); }},
      {"init_energy", [&](const std::string& k, std::string_view v) { cfg.init_params.energy = positive(k, real_value(k, v)); }},
      {"init_checkpoint",
       [&](const std::string& k, std::string_view v) {
         const auto t = detail::trim(v);
         if (t.empty()) throw ConfigError(k, "empty path");
         cfg.init_params.checkpoint_path = std::string(t);
       }},
      {"seed",
       [&](const std::string& k, std::string_view v) {
         const long long s = int_value(k, v);
         if (s < 0) throw ConfigError(k, "must be >= 0");
         cfg.seed = static_cast<std::uint64_t>(s);
       }},
      {"criteria", [&](const std::string& k, std::string_view v) { cfg.criteria = criteria_value(k, v); }},
      {"sample_every",
       [&](const std::string& k, std::string_view v) {
         const long long n = int_value(k, v);
         if (n < 1 || n > 1000000000) throw ConfigError(k, "must be >= 1");
         cfg.sample_every = static_cast<int>(n);
       }},
      {"checkpoint_every",
       [&](const std::string& k, std::string_view v) {
         const long long n = int_value(k, v);
         if (n < 0 || n > 1000000000) throw ConfigError(k, "must be >= 0");
         cfg.checkpoint_every = static_cast<int>(n);
       }},
      {"out_dir",
       [&](const std::string& k, std::string_view v) {
         const auto t = detail::trim(v);
         if (t.empty()) throw ConfigError(k, "empty path");
         cfg.out_dir = std::string(t);
       }},
  };

  std::set<std::string> seen;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = detail::trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError(std::string(body), "expected 'key = value'");
    }
    const std::string key(detail::trim(body.substr(0, eq)));
    const auto value = detail::trim(body.substr(eq + 1));
    if (key.empty()) throw ConfigError("", "missing key before '='");
    const auto it = setters.find(key);
    if (it == setters.end()) throw ConfigError(key, "unknown key");
    if (!seen.insert(key).second) throw ConfigError(key, "given more than once");
    if (value.empty()) throw ConfigError(key, "missing value");
    it->second(key, value);
  }

  if (cfg.solver.form == Form::elsasser && cfg.solver.nu != cfg.solver.eta) {
    throw ConfigError("form", "elsasser requires nu == eta");
  }
  if (cfg.init == InitKind::checkpoint && cfg.init_params.checkpoint_path.empty()) {
    throw ConfigError("init_checkpoint", "required when init = checkpoint");
  }
  if (cfg.init == InitKind::random_bandlimited && cfg.init_params.k_max < 1.0) {
    throw ConfigError("init_kmax", "must be >= 1 for random_bandlimited");
  }
  return cfg;
}

RunConfig load_run_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_run_config(buf.str());
}

}  // namespace mhdreg
