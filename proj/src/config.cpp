#include "perron/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "perron/error.hpp"
#include "perron/expr.hpp"
#include "perron/ladder.hpp"

namespace perron {
namespace {

using nlohmann::json;

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

double as_real(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(key, "must be finite");
  return x;
}

int as_int(const json& v, const std::string& key) {
  if (!v.is_number_integer()) throw ConfigError(key, "expected an integer");
  return v.get<int>();
}

cplx as_complex(const json& v, const std::string& key) {
  if (v.is_number()) return as_real(v, key);
  if (v.is_array() && v.size() == 2) return {as_real(v[0], key), as_real(v[1], key)};
  throw ConfigError(key, "expected a number or [re, im]");
}

json complex_json(cplx c) { return json::array({c.real(), c.imag()}); }

// key -> setter; the value arrives already parsed as JSON.
using Setter = void (*)(RunConfig&, const json&, const std::string&);

const std::vector<std::pair<std::string, Setter>>& setters() {
  static const std::vector<std::pair<std::string, Setter>> table = {
      {"order", [](RunConfig& c, const json& v, const std::string& k) { c.order = as_int(v, k); }},
      {"coefficients",
       [](RunConfig& c, const json& v, const std::string& k) {
         if (!v.is_array()) throw ConfigError(k, "expected an array");
         c.coefficients.clear();
         for (std::size_t i = 0; i < v.size(); ++i)
           c.coefficients.push_back(as_complex(v[i], k + "[" + std::to_string(i) + "]"));
       }},
      {"perturbations",
       [](RunConfig& c, const json& v, const std::string& k) {
         if (!v.is_array()) throw ConfigError(k, "expected an array of strings");
         c.perturbations.clear();
         for (std::size_t i = 0; i < v.size(); ++i) {
           if (!v[i].is_string()) throw ConfigError(k + "[" + std::to_string(i) + "]", "expected a string");
           c.perturbations.push_back(v[i].get<std::string>());
         }
       }},
      {"t0", [](RunConfig& c, const json& v, const std::string& k) { c.t0 = as_real(v, k); }},
      {"t_end", [](RunConfig& c, const json& v, const std::string& k) { c.t_end = as_real(v, k); }},
      {"step", [](RunConfig& c, const json& v, const std::string& k) { c.step = as_real(v, k); }},
      {"lambda",
       [](RunConfig& c, const json& v, const std::string& k) {
         if (v.is_string()) {
           const std::string s = v.get<std::string>();
           if (s.rfind("index:", 0) != 0) throw ConfigError(k, "expected \"index:k\" or [re, im]");
           try {
             std::size_t used = 0;
             c.lambda.index = std::stoi(s.substr(6), &used);
             if (used != s.size() - 6) throw std::invalid_argument(s);
           } catch (const std::exception&) {
             throw ConfigError(k, "bad index in \"" + s + "\"");
           }
           c.lambda.by_index = true;
         } else {
           c.lambda.by_index = false;
           c.lambda.value = as_complex(v, k);
         }
       }},
      {"quad.panel_order",
       [](RunConfig& c, const json& v, const std::string& k) { c.quad.panel_order = as_int(v, k); }},
      {"quad.panel_width",
       [](RunConfig& c, const json& v, const std::string& k) { c.quad.panel_width = as_real(v, k); }},
      {"quad.tail_tol", [](RunConfig& c, const json& v, const std::string& k) { c.quad.tail_tol = as_real(v, k); }},
      {"picard.tol", [](RunConfig& c, const json& v, const std::string& k) { c.picard.tol = as_real(v, k); }},
      {"picard.max_iter",
       [](RunConfig& c, const json& v, const std::string& k) { c.picard.max_iter = as_int(v, k); }},
      {"picard.M", [](RunConfig& c, const json& v, const std::string& k) { c.ball_M = as_real(v, k); }},
      {"ladder.depth", [](RunConfig& c, const json& v, const std::string& k) { c.ladder_depth = as_int(v, k); }},
      {"beta", [](RunConfig& c, const json& v, const std::string& k) { c.beta = as_real(v, k); }},
      {"horizon", [](RunConfig& c, const json& v, const std::string& k) { c.horizon = as_real(v, k); }},
      {"seed",
       [](RunConfig& c, const json& v, const std::string& k) {
         if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
           throw ConfigError(k, "expected a non-negative integer");
         c.seed = v.get<std::uint64_t>();
       }},
      {"output.csv_dir",
       [](RunConfig& c, const json& v, const std::string& k) {
         if (!v.is_string()) throw ConfigError(k, "expected a string");
         c.csv_dir = v.get<std::string>();
       }},
      {"output.json",
       [](RunConfig& c, const json& v, const std::string& k) {
         if (!v.is_string()) throw ConfigError(k, "expected a string");
         c.json_path = v.get<std::string>();
       }},
  };
  return table;
}

void validate(const RunConfig& c, const std::set<std::string>& seen) {
  for (const char* k : {"order", "coefficients", "perturbations", "t0", "t_end"})
    if (!seen.count(k)) throw ConfigError(k, "missing required key");
  if (c.order < 2) throw ConfigError("order", "must be at least 2");
  if (c.order > static_cast<int>(kMaxArity)) throw ConfigError("order", "must not exceed " + std::to_string(kMaxArity));
  if (static_cast<int>(c.coefficients.size()) != c.order)
    throw ConfigError("coefficients", "expected " + std::to_string(c.order) + " entries a_0..a_{n-1}, got " +
                                          std::to_string(c.coefficients.size()));
  if (static_cast<int>(c.perturbations.size()) != c.order)
    throw ConfigError("perturbations", "expected " + std::to_string(c.order) + " expressions r_0..r_{n-1}, got " +
                                           std::to_string(c.perturbations.size()));
  if (!(c.t_end > c.t0)) throw ConfigError("t_end", "must exceed t0");
  if (!(c.step > 0.0)) throw ConfigError("step", "must be positive");
  if ((c.t_end - c.t0) / c.step > 5e6) throw ConfigError("step", "grid would exceed 5e6 nodes");
  if (c.lambda.by_index && (c.lambda.index < 0 || c.lambda.index >= c.order))
    throw ConfigError("lambda", "index out of range 0.." + std::to_string(c.order - 1));
  if (!(c.picard.tol > 0.0)) throw ConfigError("picard.tol", "must be positive");
  if (c.picard.max_iter < 1) throw ConfigError("picard.max_iter", "must be at least 1");
  if (c.ball_M && !(*c.ball_M > 0.0)) throw ConfigError("picard.M", "must be positive");
  if (c.ladder_depth < 1 || c.ladder_depth > kMaxLadderDepth)
    throw ConfigError("ladder.depth", "must be in 1.." + std::to_string(kMaxLadderDepth));
  if (c.beta && !(*c.beta > 0.0)) throw ConfigError("beta", "must be positive");
  if (c.horizon && !(*c.horizon > c.t0)) throw ConfigError("horizon", "must exceed t0");
  c.quad.validate();
}

}  // namespace

const char* tool_version() { return PERRON_VERSION; }

RunConfig parse_config(std::string_view text) {
  RunConfig c;
  std::set<std::string> seen;
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view raw = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    std::string line = trim(raw);
    if (line.empty() || line[0] == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("line " + std::to_string(line_no), "expected `key = value`");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string val = trim(std::string_view(line).substr(eq + 1));
    const auto& tab = setters();
    auto it = std::find_if(tab.begin(), tab.end(), [&](const auto& p) { return p.first == key; });
    if (it == tab.end()) throw ConfigError(key.empty() ? "line " + std::to_string(line_no) : key, "unknown key");
    if (!seen.insert(key).second) throw ConfigError(key, "given twice");
    json v;
    try {
      v = json::parse(val);
    } catch (const json::parse_error& e) {
      throw ConfigError(key, std::string("value is not valid JSON: ") + e.what());
    }
    it->second(c, v, key);
  }
  validate(c, seen);
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

nlohmann::json RunConfig::to_json() const {
  json j = json::object();
  j["order"] = order;
  json a = json::array();
  for (cplx v : coefficients) a.push_back(complex_json(v));
  j["coefficients"] = a;
  j["perturbations"] = perturbations;
  j["t0"] = t0;
  j["t_end"] = t_end;
  j["step"] = step;
  j["lambda"] = lambda.by_index ? json("index:" + std::to_string(lambda.index)) : complex_json(lambda.value);
  j["quad"] = {{"panel_order", quad.panel_order}, {"panel_width", quad.panel_width}, {"tail_tol", quad.tail_tol}};
  j["picard"] = {{"tol", picard.tol}, {"max_iter", picard.max_iter}, {"M", ball_M ? json(*ball_M) : json(nullptr)}};
  j["ladder"] = {{"depth", ladder_depth}};
  j["beta"] = beta ? json(*beta) : json(nullptr);
  j["horizon"] = horizon ? json(*horizon) : json(nullptr);
  j["seed"] = seed;
  j["output"] = {{"csv_dir", csv_dir}, {"json", json_path}};
  return j;
}

std::string RunConfig::hash() const {
  json j = to_json();
  j.erase("output");  // where results go does not change them
  const std::string s = j.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

PerturbedODE RunConfig::ode() const {
  PerturbedODE o;
  o.a = coefficients;
  o.t0 = t0;
  for (std::size_t i = 0; i < perturbations.size(); ++i) {
    const std::string key = "perturbations[" + std::to_string(i) + "]";
    try {
      Expr e = parse_expr(perturbations[i]);
      // evaluability is only checked at t0; later failures surface as EvalError
      (void)e.evaluate(t0);
      o.r.push_back(std::move(e));
    } catch (const ParseError& e) {
      throw ConfigError(key, std::string(e.what()) + " at offset " + std::to_string(e.offset()));
    } catch (const EvalError& e) {
      throw ConfigError(key, e.what());
    }
  }
  return o;
}

cplx RunConfig::select_lambda(const std::vector<cplx>& sorted_roots) const {
  if (lambda.by_index) return sorted_roots.at(static_cast<std::size_t>(lambda.index));
  return lambda.value;
}

}  // namespace perron
