// Copyright 2026 The resetlb Authors
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

#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "resetlb/cli.hpp"

namespace resetlb::cli {
namespace {

Json model_defaults(const std::string& model) {
  Json d;
  d["model"] = model;
  d["unit"] = "";
  d["seed"] = 1;
  d["output"] = "";
  d["sweep"] = Json::array();
  if (model == "spingas") {
    d["spingas"] = {{"rows", 6},  {"cols", 6},           {"n_env", 8},   {"psi", 0.1},
                    {"phi", 0.001}, {"exchange_prob", 0.0}, {"steps", 500}, {"runs", 1000}};
    return d;
  }
  d["n_qubits"] = 2;
  d["hamiltonian"] = {{"kind", "ising"}, {"g", 0.0},  {"omega", 0.0}, {"b", 0.0},     {"cx", 0.7},
                      {"cy", 0.3},       {"cz", 1.0}, {"cfield", 0.5}, {"custom", nullptr}};
  if (model == "gas") {
    d["noise"] = {{"B", 0.0}, {"C", 0.0}, {"s", 0.5}, {"gamma", 0.0}};
  } else {
    d["bath"] = {{"gamma", 1.0}, {"beta", 1.0}};
  }
  d["reset"] = {{"r", 0.0}, {"state", "plus"}, {"purity", 1.0}};
  d["evolve"] = {{"t_max", 1.0},
                 {"points", 11},
                 {"initial", {{"kind", "reset"}, {"phi", 0.0}, {"state", "plus"}}}};
  d["measures"] = {{"lambda", 2.0}, {"n_min", 0}, {"n_max", 5}, {"allow_large", false}};
  return d;
}

// Leaves whose value may be a string or an array.
bool is_flexible_leaf(const std::string& path) {
  return path == "hamiltonian.custom" || path == "reset.state" || path == "evolve.initial.state";
}

void merge_into(Json& target, const Json& input, const std::string& prefix) {
  if (!input.is_object()) throw ConfigError("'" + prefix + "' must be an object");
  for (const auto& [key, value] : input.items()) {
    const std::string path = prefix.empty() ? key : prefix + "." + key;
    if (!target.contains(key)) throw ConfigError("unknown config key '" + path + "'");
    Json& slot = target[key];
    if (path == "sweep") {
      if (!value.is_array()) throw ConfigError("'sweep' must be an array");
      slot = value;
    } else if (slot.is_object()) {
      merge_into(slot, value, path);
    } else if (is_flexible_leaf(path)) {
      if (!(value.is_string() || value.is_array() || value.is_null())) {
        throw ConfigError("'" + path + "' must be a name or an array");
      }
      slot = value;
    } else if (slot.is_number()) {
      if (!value.is_number()) throw ConfigError("'" + path + "' must be a number");
      if (slot.is_number_integer() && !value.is_number_integer()) {
        throw ConfigError("'" + path + "' must be an integer");
      }
      // Real-valued leaves stay real so sweeps over them are not rounded.
      slot = slot.is_number_float() ? Json(value.get<double>()) : value;
    } else if (slot.is_string()) {
      if (!value.is_string()) throw ConfigError("'" + path + "' must be a string");
      slot = value;
    } else if (slot.is_boolean()) {
      if (!value.is_boolean()) throw ConfigError("'" + path + "' must be a boolean");
      slot = value;
    } else {
      slot = value;
    }
  }
}

std::vector<std::string> split_path(const std::string& path) {
  std::vector<std::string> parts;
  std::stringstream ss(path);
  std::string part;
  while (std::getline(ss, part, '.')) parts.push_back(part);
  return parts;
}

Json* find_path(Json& root, const std::string& path) {
  Json* node = &root;
  for (const std::string& part : split_path(path)) {
    if (!node->is_object() || !node->contains(part)) return nullptr;
    node = &(*node)[part];
  }
  return node;
}

const Json& at_path(const Json& root, const std::string& path) {
  const Json* node = &root;
  for (const std::string& part : split_path(path)) node = &node->at(part);
  return *node;
}

double number_at(const Json& root, const std::string& path) { return at_path(root, path).get<double>(); }

int int_at(const Json& root, const std::string& path) {
  const double v = number_at(root, path);
  if (v != std::floor(v)) throw ConfigError("'" + path + "' must be an integer");
  return static_cast<int>(v);
}

SweepAxis parse_axis(const Json& j, const Json& resolved) {
  if (!j.is_object()) throw ConfigError("sweep axes must be objects");
  SweepAxis axis;
  std::string scale = "linear";
  bool have_min = false;
  bool have_max = false;
  for (const auto& [key, value] : j.items()) {
    if (key == "param" && value.is_string()) {
      axis.param = value.get<std::string>();
    } else if (key == "min" && value.is_number()) {
      axis.min = value.get<double>();
      have_min = true;
    } else if (key == "max" && value.is_number()) {
      axis.max = value.get<double>();
      have_max = true;
    } else if (key == "points" && value.is_number_integer()) {
      axis.points = value.get<int>();
    } else if (key == "scale" && value.is_string()) {
      scale = value.get<std::string>();
    } else {
      throw ConfigError("invalid sweep axis key '" + key + "'");
    }
  }
  if (axis.param.empty()) throw ConfigError("sweep axis needs 'param'");
  Json copy = resolved;
  const Json* target = find_path(copy, axis.param);
  if (target == nullptr || !target->is_number() || axis.param == "seed") {
    throw ConfigError("sweep axis '" + axis.param + "' does not name a numeric parameter");
  }
  if (!have_min) throw ConfigError("sweep axis '" + axis.param + "' needs 'min'");
  if (!have_max) axis.max = axis.min;
  if (axis.points < 1) throw ConfigError("sweep axis '" + axis.param + "' needs points >= 1");
  if (scale != "linear" && scale != "log") {
    throw ConfigError("sweep scale must be 'linear' or 'log', got '" + scale + "'");
  }
  axis.log = scale == "log";
  if (axis.log && !(axis.min > 0.0 && axis.max > 0.0)) {
    throw ConfigError("log sweep '" + axis.param + "' needs positive bounds");
  }
  return axis;
}

// Path of the parameter a unit name refers to, per model.
std::string unit_path(const std::string& model, const std::string& unit) {
  if (model == "spingas") return unit == "step" ? "" : "?";
  if (unit == "g") return "hamiltonian.g";
  if (unit == "gamma") return model == "gas" ? "noise.gamma" : "bath.gamma";
  if (unit == "B" && model == "gas") return "noise.B";
  return "?";
}

Eigen::Vector2cd named_ket(const std::string& name) {
  const double h = 1.0 / std::sqrt(2.0);
  const cplx i(0, 1);
  static const std::map<std::string, Eigen::Vector2cd> kets = {
      {"zero", Eigen::Vector2cd(1, 0)},     {"one", Eigen::Vector2cd(0, 1)},
      {"plus", Eigen::Vector2cd(h, h)},     {"minus", Eigen::Vector2cd(h, -h)},
      {"plus_i", Eigen::Vector2cd(h, i * h)}, {"minus_i", Eigen::Vector2cd(h, -i * h)},
  };
  const auto it = kets.find(name);
  if (it == kets.end()) throw ConfigError("unknown state name '" + name + "'");
  return it->second;
}

// A single-qubit state from a name or a Bloch vector, shrunk by `purity`.
Matrix2 qubit_state(const Json& j, double purity, const std::string& path) {
  if (!(purity >= 0.0 && purity <= 1.0)) throw ConfigError("purity must lie in [0, 1]");
  if (j.is_string()) return mixed_state(purity, named_ket(j.get<std::string>()));
  if (j.is_array() && j.size() == 3 && j[0].is_number() && j[1].is_number() && j[2].is_number()) {
    const double b1 = j[0].get<double>() * purity;
    const double b2 = j[1].get<double>() * purity;
    const double b3 = j[2].get<double>() * purity;
    try {
      return bloch_state(b1, b2, b3);
    } catch (const std::invalid_argument& e) {
      throw ConfigError("'" + path + "': " + e.what());
    }
  }
  throw ConfigError("'" + path + "' must be a state name or a Bloch vector [b1, b2, b3]");
}

Matrix custom_matrix(const Json& j) {
  if (!j.is_array() || j.empty()) throw ConfigError("'hamiltonian.custom' must be a square array");
  const auto d = static_cast<Eigen::Index>(j.size());
  Matrix m(d, d);
  for (Eigen::Index r = 0; r < d; ++r) {
    const Json& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != d) {
      throw ConfigError("'hamiltonian.custom' must be a square array");
    }
    for (Eigen::Index c = 0; c < d; ++c) {
      const Json& e = row[static_cast<std::size_t>(c)];
      if (e.is_number()) {
        m(r, c) = e.get<double>();
      } else if (e.is_array() && e.size() == 2 && e[0].is_number() && e[1].is_number()) {
        m(r, c) = cplx(e[0].get<double>(), e[1].get<double>());
      } else {
        throw ConfigError("'hamiltonian.custom' entries must be numbers or [re, im]");
      }
    }
  }
  return m;
}

}  // namespace

std::vector<double> SweepAxis::values() const {
  std::vector<double> out;
  if (points == 1) return {min};
  for (int k = 0; k < points; ++k) {
    const double f = static_cast<double>(k) / (points - 1);
    out.push_back(log ? std::exp(std::log(min) + f * (std::log(max) - std::log(min)))
                      : min + (max - min) * k / (points - 1));
  }
  // Pin the endpoints exactly.
  out.front() = min;
  out.back() = max;
  return out;
}

ExperimentConfig parse_config(const Json& input) {
  if (!input.is_object()) throw ConfigError("config must be a JSON object");
  if (!input.contains("model") || !input["model"].is_string()) {
    throw ConfigError("config needs a 'model' string");
  }
  const std::string model = input["model"].get<std::string>();
  if (model != "gas" && model != "strongly_coupled" && model != "spingas") {
    throw ConfigError("unknown model '" + model + "' (expected gas, strongly_coupled or spingas)");
  }
  if (!input.contains("unit")) throw ConfigError("config needs a 'unit' naming the unit rate");

  ExperimentConfig cfg;
  cfg.resolved = model_defaults(model);
  merge_into(cfg.resolved, input, "");
  cfg.model = model;
  cfg.unit = cfg.resolved["unit"].get<std::string>();
  cfg.output = cfg.resolved["output"].get<std::string>();
  const Json& seed = cfg.resolved["seed"];
  if (!seed.is_number_integer() || (!seed.is_number_unsigned() && seed.get<std::int64_t>() < 0)) {
    throw ConfigError("'seed' must be a non-negative integer");
  }
  cfg.seed = seed.get<std::uint64_t>();

  for (const Json& axis : cfg.resolved["sweep"]) cfg.sweep.push_back(parse_axis(axis, cfg.resolved));
  for (std::size_t a = 0; a < cfg.sweep.size(); ++a) {
    for (std::size_t b = 0; b < a; ++b) {
      if (cfg.sweep[a].param == cfg.sweep[b].param) {
        throw ConfigError("sweep axis '" + cfg.sweep[a].param + "' given twice");
      }
    }
  }

  const std::string upath = unit_path(model, cfg.unit);
  if (upath == "?") throw ConfigError("unit '" + cfg.unit + "' is not a rate of model '" + model + "'");
  if (!upath.empty()) {
    bool swept = false;
    for (const SweepAxis& a : cfg.sweep) swept = swept || a.param == upath;
    if (!swept && number_at(cfg.resolved, upath) != 1.0) {
      throw ConfigError("unit '" + cfg.unit + "' declares " + upath + " = 1, but the config sets " +
                        format_number(number_at(cfg.resolved, upath)));
    }
  }

  // Build every derived object once so errors surface before any run.
  for (const GridPoint& p : expand_grid(cfg)) {
    if (model == "spingas") {
      gas_from(p.config);
    } else {
      const ModelSpec m = model_from(p.config);
      initial_state_from(p.config, m);
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config '" + path + "' is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

std::vector<GridPoint> expand_grid(const ExperimentConfig& config) {
  std::vector<GridPoint> grid{{{}, config.resolved}};
  for (const SweepAxis& axis : config.sweep) {
    std::vector<GridPoint> next;
    for (const GridPoint& p : grid) {
      for (double v : axis.values()) {
        GridPoint q = p;
        q.coords.push_back(v);
        Json* slot = find_path(q.config, axis.param);
        if (slot->is_number_integer()) {
          if (v != std::floor(v)) throw ConfigError("sweep of '" + axis.param + "' needs integer values");
          *slot = static_cast<std::int64_t>(v);
        } else {
          *slot = v;
        }
        next.push_back(std::move(q));
      }
    }
    grid = std::move(next);
  }
  return grid;
}

ModelSpec model_from(const Json& resolved) { return model_from(resolved, int_at(resolved, "n_qubits")); }

ModelSpec model_from(const Json& resolved, int n_qubits) {
  ModelSpec m;
  try {
    const std::string model = resolved.at("model").get<std::string>();
    if (model == "spingas") throw ConfigError("spin-gas configs have no master equation");
    m.kind = model == "gas" ? ModelKind::kGas : ModelKind::kStronglyCoupled;
    if (n_qubits < 1) throw ConfigError("'n_qubits' must be at least 1");
    m.n_qubits = n_qubits;

    const Json& h = resolved.at("hamiltonian");
    const auto kind = parse_hamiltonian_kind(h.at("kind").get<std::string>());
    if (!kind) throw ConfigError("unknown hamiltonian kind '" + h.at("kind").get<std::string>() + "'");
    m.hamiltonian.kind = *kind;
    m.hamiltonian.g = h.at("g").get<double>();
    m.hamiltonian.omega = h.at("omega").get<double>();
    m.hamiltonian.b = h.at("b").get<double>();
    m.hamiltonian.cx = h.at("cx").get<double>();
    m.hamiltonian.cy = h.at("cy").get<double>();
    m.hamiltonian.cz = h.at("cz").get<double>();
    m.hamiltonian.cfield = h.at("cfield").get<double>();
    if (*kind == HamiltonianKind::kCustom) m.hamiltonian.custom = custom_matrix(h.at("custom"));

    if (m.kind == ModelKind::kGas) {
      const Json& nz = resolved.at("noise");
      // Extra pure dephasing gamma adds 2 gamma to C.
      m.noise = {nz.at("B").get<double>(), nz.at("C").get<double>() + 2.0 * nz.at("gamma").get<double>(),
                 nz.at("s").get<double>()};
      if (nz.at("gamma").get<double>() < 0.0) throw ConfigError("'noise.gamma' must be non-negative");
      m.noise.validate();
    } else {
      const Json& bath = resolved.at("bath");
      m.bath = {bath.at("gamma").get<double>(), bath.at("beta").get<double>()};
      m.bath.validate();
    }

    const Json& reset = resolved.at("reset");
    const Matrix2 st = qubit_state(reset.at("state"), reset.at("purity").get<double>(), "reset.state");
    m.reset = ResetSpec::uniform(reset.at("r").get<double>(), st, n_qubits);
    m.reset.validate(n_qubits);
    build_hamiltonian(m.hamiltonian, n_qubits);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(e.what());
  }
  return m;
}

GasConfig gas_from(const Json& resolved) {
  GasConfig g;
  try {
    const Json& s = resolved.at("spingas");
    g.rows = int_at(resolved, "spingas.rows");
    g.cols = int_at(resolved, "spingas.cols");
    g.n_env = int_at(resolved, "spingas.n_env");
    g.psi = s.at("psi").get<double>();
    g.phi = s.at("phi").get<double>();
    g.exchange_prob = s.at("exchange_prob").get<double>();
    g.steps = int_at(resolved, "spingas.steps");
    g.seed = resolved.at("seed").get<std::uint64_t>();
    if (int_at(resolved, "spingas.runs") < 1) throw ConfigError("'spingas.runs' must be at least 1");
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const Json::exception& e) {
    throw ConfigError(e.what());
  }
  return g;
}

DensityMatrix initial_state_from(const Json& resolved, const ModelSpec& model) {
  const Json& init = resolved.at("evolve").at("initial");
  const std::string kind = init.at("kind").get<std::string>();
  const int n = model.n_qubits;
  const Eigen::Index d = Eigen::Index{1} << n;
  if (number_at(resolved, "evolve.t_max") < 0.0) throw ConfigError("'evolve.t_max' must be non-negative");
  if (int_at(resolved, "evolve.points") < 1) throw ConfigError("'evolve.points' must be at least 1");

  if (kind == "reset" || kind == "product") {
    const Matrix2 one = kind == "reset" ? model.reset.states.front()
                                        : qubit_state(init.at("state"), 1.0, "evolve.initial.state");
    Matrix rho = Matrix::Identity(1, 1);
    for (int q = 0; q < n; ++q) {
      rho = kron(rho, kind == "reset" ? Matrix(model.reset.states[static_cast<std::size_t>(q)]) : Matrix(one));
    }
    return validate_density(rho);
  }
  if (kind == "graph") {
    // |+...+> with phase e^{i phi} on every pair of excited qubits.
    const double phi = init.at("phi").get<double>();
    Vector psi(d);
    for (Eigen::Index x = 0; x < d; ++x) {
      double theta = 0.0;
      for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
          if (((x >> (n - 1 - a)) & 1) && ((x >> (n - 1 - b)) & 1)) theta += phi;
        }
      }
      psi(x) = std::polar(std::pow(2.0, -0.5 * n), theta);
    }
    return pure_state(psi);
  }
  if (kind == "mixed") return validate_density(Matrix::Identity(d, d) / static_cast<double>(d));
  throw ConfigError("unknown initial state kind '" + kind + "' (expected reset, product, graph or mixed)");
}

}  // namespace resetlb::cli
