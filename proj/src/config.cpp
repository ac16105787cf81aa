#include "glvortex/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "glvortex/error.hpp"

namespace glvortex {

namespace {

using json = nlohmann::json;

void flatten(const json& node, const std::string& prefix, std::map<std::string, json>& out) {
  for (auto it = node.begin(); it != node.end(); ++it) {
    const std::string key = prefix.empty() ? it.key() : prefix + "." + it.key();
    if (it->is_object()) {
      flatten(*it, key, out);
    } else {
      if (out.count(key)) throw ConfigError(key, "given more than once");
      out[key] = *it;
    }
  }
}

double as_number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ConfigError(key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError(key, "expected a finite number");
  return d;
}

long long as_integer(const json& v, const std::string& key) {
  if (v.is_number_integer()) return v.get<long long>();
  if (v.is_number_float()) {
    const double d = v.get<double>();
    if (std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15) return static_cast<long long>(d);
  }
  throw ConfigError(key, "expected an integer");
}

std::vector<PhaseTerm> parse_psi(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError(key, "expected a list of [frequency, amplitude, phase] triples");
  std::vector<PhaseTerm> terms;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string tk = key + "[" + std::to_string(k) + "]";
    const json& t = v[k];
    if (!t.is_array() || t.size() < 2 || t.size() > 3) {
      throw ConfigError(tk, "expected [frequency, amplitude] or [frequency, amplitude, phase]");
    }
    PhaseTerm term;
    const long long f = as_integer(t[0], tk + "[0]");
    if (f < 1) throw ConfigError(tk + "[0]", "frequency must be a positive integer");
    term.frequency = static_cast<int>(f);
    term.amplitude = as_number(t[1], tk + "[1]");
    term.phase = t.size() == 3 ? as_number(t[2], tk + "[2]") : 0.0;
    terms.push_back(term);
  }
  return terms;
}

std::vector<std::array<double, 2>> parse_points(const json& v, const std::string& key) {
  if (!v.is_array()) throw ConfigError(key, "expected a list of [x, y] points");
  std::vector<std::array<double, 2>> pts;
  for (std::size_t k = 0; k < v.size(); ++k) {
    const std::string pk = key + "[" + std::to_string(k) + "]";
    if (!v[k].is_array() || v[k].size() != 2) throw ConfigError(pk, "expected [x, y]");
    const double x = as_number(v[k][0], pk + "[0]"), y = as_number(v[k][1], pk + "[1]");
    if (!(x > 0.0 && x < 1.0 && y > 0.0 && y < 1.0)) throw ConfigError(pk, "point must lie inside the unit square");
    pts.push_back({x, y});
  }
  return pts;
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError("", std::string("invalid JSON: ") + e.what());
  }
  if (!doc.is_object()) throw ConfigError("", "top level must be an object");
  std::map<std::string, json> keys;
  flatten(doc, "", keys);

  std::set<std::string> used;
  auto take = [&](const std::string& key) -> const json* {
    auto it = keys.find(key);
    if (it == keys.end()) return nullptr;
    used.insert(key);
    return &it->second;
  };
  auto require = [&](const std::string& key) -> const json& {
    const json* v = take(key);
    if (!v) throw ConfigError(key, "missing required key");
    return *v;
  };

  RunConfig cfg;
  {
    const long long n = as_integer(require("grid.n_cells"), "grid.n_cells");
    if (n < 4 || n % 2 != 0 || n > 4096) throw ConfigError("grid.n_cells", "must be an even integer in [4, 4096]");
    cfg.n_cells = static_cast<int>(n);
  }
  const long long n = as_integer(require("problem.n"), "problem.n");
  if (n < 1 || n > 64) throw ConfigError("problem.n", "must be an integer in [1, 64]");
  const json& comps = require("problem.components");
  if (!comps.is_array()) throw ConfigError("problem.components", "expected a list of component objects");
  if (static_cast<long long>(comps.size()) != n) {
    throw ConfigError("problem.components", "expected " + std::to_string(n) + " entries to match problem.n");
  }
  bool any_points = false;
  for (std::size_t j = 0; j < comps.size(); ++j) {
    const std::string ck = "problem.components[" + std::to_string(j) + "]";
    const json& c = comps[j];
    if (!c.is_object()) throw ConfigError(ck, "expected an object");
    for (auto it = c.begin(); it != c.end(); ++it) {
      if (it.key() != "degree" && it.key() != "psi" && it.key() != "offset" && it.key() != "vortices") {
        throw ConfigError(ck + "." + it.key(), "unknown key");
      }
    }
    if (!c.contains("degree")) throw ConfigError(ck + ".degree", "missing required key");
    BoundaryMap m;
    const long long d = as_integer(c["degree"], ck + ".degree");
    if (d < 0 || d > 64) throw ConfigError(ck + ".degree", "must be an integer in [0, 64]");
    m.degree = static_cast<int>(d);
    if (c.contains("psi")) m.psi = parse_psi(c["psi"], ck + ".psi");
    if (c.contains("offset")) m.offset = as_number(c["offset"], ck + ".offset");
    cfg.boundary.maps.push_back(m);
    std::vector<std::array<double, 2>> pts;
    if (c.contains("vortices")) {
      pts = parse_points(c["vortices"], ck + ".vortices");
      if (static_cast<long long>(pts.size()) != d) {
        throw ConfigError(ck + ".vortices", "expected one point per unit of degree");
      }
      any_points = true;
    }
    cfg.vortex_points.push_back(std::move(pts));
  }
  if (!any_points) cfg.vortex_points.clear();

  const double h = 1.0 / cfg.n_cells;
  if (const json* v = take("solver.tol")) {
    const double t = as_number(*v, "solver.tol");
    if (!(t > 0.0)) throw ConfigError("solver.tol", "must be positive");
    cfg.solve.tol_residual = t;
  }
  if (const json* v = take("solver.max_iters")) {
    const long long m = as_integer(*v, "solver.max_iters");
    if (m < 1 || m > std::numeric_limits<int>::max()) throw ConfigError("solver.max_iters", "must be a positive integer");
    cfg.solve.max_iters = static_cast<int>(m);
  }
  if (const json* v = take("solver.dt0")) {
    const double t = as_number(*v, "solver.dt0");
    if (!(t > 0.0)) throw ConfigError("solver.dt0", "must be positive");
    cfg.solve.dt0 = t;
  }
  if (const json* v = take("solver.seed")) {
    const long long s = as_integer(*v, "solver.seed");
    if (s < 0) throw ConfigError("solver.seed", "must be a nonnegative integer");
    cfg.solve.seed = static_cast<std::uint64_t>(s);
  }
  if (const json* v = take("solver.growth")) {
    const double g = as_number(*v, "solver.growth");
    if (!(g >= 1.0 && g <= 10.0)) throw ConfigError("solver.growth", "must lie in [1, 10]");
    cfg.solve.growth = g;
  }
  if (const json* v = take("solver.init")) {
    if (!v->is_string()) throw ConfigError("solver.init", "expected a string");
    cfg.init = v->get<std::string>();
    if (cfg.init != "multistart" && cfg.init != "harmonic" && cfg.init != "vortex_product" && cfg.init != "random") {
      throw ConfigError("solver.init", "expected one of multistart, harmonic, vortex_product, random");
    }
  }
  if (const json* v = take("beta.tol")) {
    const double t = as_number(*v, "beta.tol");
    if (!(t > 0.0)) throw ConfigError("beta.tol", "must be positive");
    cfg.beta.tol = t;
  }
  if (const json* v = take("beta.max_iters")) {
    const long long m = as_integer(*v, "beta.max_iters");
    if (m < 1 || m > std::numeric_limits<int>::max()) throw ConfigError("beta.max_iters", "must be a positive integer");
    cfg.beta.max_iters = static_cast<int>(m);
  }

  const json* schedule = take("sweep.eps_schedule");
  const json* gstart = take("sweep.geometric.start");
  const json* gratio = take("sweep.geometric.ratio");
  const json* gcount = take("sweep.geometric.count");
  const bool geometric = gstart || gratio || gcount;
  if (schedule && geometric) throw ConfigError("sweep", "give either eps_schedule or geometric, not both");
  if (schedule) {
    if (!schedule->is_array() || schedule->empty()) {
      throw ConfigError("sweep.eps_schedule", "expected a nonempty list of numbers");
    }
    for (std::size_t k = 0; k < schedule->size(); ++k) {
      cfg.eps_schedule.push_back(as_number((*schedule)[k], "sweep.eps_schedule[" + std::to_string(k) + "]"));
    }
  } else if (geometric) {
    if (!gstart) throw ConfigError("sweep.geometric.start", "missing required key");
    if (!gcount) throw ConfigError("sweep.geometric.count", "missing required key");
    const double start = as_number(*gstart, "sweep.geometric.start");
    const double ratio = gratio ? as_number(*gratio, "sweep.geometric.ratio") : 0.5;
    const long long count = as_integer(*gcount, "sweep.geometric.count");
    if (!(ratio > 0.0 && ratio < 1.0)) throw ConfigError("sweep.geometric.ratio", "must lie in (0, 1)");
    if (count < 1 || count > 64) throw ConfigError("sweep.geometric.count", "must be an integer in [1, 64]");
    double e = start;
    for (long long k = 0; k < count; ++k, e *= ratio) cfg.eps_schedule.push_back(e);
  }
  for (std::size_t k = 0; k < cfg.eps_schedule.size(); ++k) {
    const std::string key = schedule ? "sweep.eps_schedule[" + std::to_string(k) + "]" : "sweep.geometric";
    if (!(cfg.eps_schedule[k] > 0.0)) throw ConfigError(key, "eps must be positive");
    if (k > 0 && !(cfg.eps_schedule[k] < cfg.eps_schedule[k - 1])) {
      throw ConfigError(key, "eps schedule must be strictly decreasing");
    }
    if (cfg.eps_schedule[k] < 2.0 * h) {
      char buf[160];
      std::snprintf(buf, sizeof buf, "eps = %.6g is below 2h = %.6g; the record will be flagged under-resolved",
                    cfg.eps_schedule[k], 2.0 * h);
      cfg.warnings.push_back(buf);
    }
  }

  if (const json* v = take("diagnostics.margin")) {
    cfg.margin = as_number(*v, "diagnostics.margin");
    if (cfg.margin < 2.0 * h - 1e-12 || cfg.margin >= 0.5) {
      throw ConfigError("diagnostics.margin", "must lie in [2h, 0.5)");
    }
  }
  if (const json* v = take("diagnostics.trace")) {
    if (!v->is_boolean()) throw ConfigError("diagnostics.trace", "expected true or false");
    cfg.trace = v->get<bool>();
  }
  if (const json* v = take("output.dir")) {
    if (!v->is_string() || v->get<std::string>().empty()) throw ConfigError("output.dir", "expected a nonempty string");
    cfg.output_dir = v->get<std::string>();
  }

  for (const auto& [key, value] : keys) {
    if (!used.count(key)) throw ConfigError(key, "unknown key");
  }
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read config file " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string resolved_json(const RunConfig& c) {
  json doc = json::object();
  doc["grid.n_cells"] = c.n_cells;
  doc["problem.n"] = c.boundary.n();
  json comps = json::array();
  for (std::size_t j = 0; j < c.boundary.maps.size(); ++j) {
    json comp = {{"degree", c.boundary.maps[j].degree}};
    json psi = json::array();
    for (const PhaseTerm& t : c.boundary.maps[j].psi) psi.push_back({t.frequency, t.amplitude, t.phase});
    comp["psi"] = psi;
    comp["offset"] = c.boundary.maps[j].offset;
    if (j < c.vortex_points.size() && !c.vortex_points[j].empty()) {
      json pts = json::array();
      for (const auto& p : c.vortex_points[j]) pts.push_back({p[0], p[1]});
      comp["vortices"] = pts;
    }
    comps.push_back(comp);
  }
  doc["problem.components"] = comps;
  const double h = 1.0 / c.n_cells;
  doc["solver.tol"] = c.solve.tol_residual ? *c.solve.tol_residual : std::max(1e-8, 1e-4 * h * h);
  doc["solver.max_iters"] = c.solve.max_iters;
  if (c.solve.dt0) doc["solver.dt0"] = *c.solve.dt0;
  doc["solver.seed"] = c.solve.seed;
  doc["solver.growth"] = c.solve.growth;
  doc["solver.init"] = c.init;
  doc["beta.tol"] = c.beta.tol;
  doc["beta.max_iters"] = c.beta.max_iters;
  if (!c.eps_schedule.empty()) doc["sweep.eps_schedule"] = c.eps_schedule;
  doc["diagnostics.margin"] = c.margin;
  doc["diagnostics.trace"] = c.trace;
  doc["output.dir"] = c.output_dir;
  return doc.dump(2) + "\n";
}

}  // namespace glvortex
