#include "splqr/config.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

namespace splqr {

using nlohmann::json;

namespace {

Matrix parse_matrix(const json& j, const char* name) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) {
    fail(ErrorKind::Config,
         std::string("config: ") + name + " must be a nested array");
  }
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Matrix out(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols) {
      fail(ErrorKind::Config,
           std::string("config: ") + name + " rows have unequal lengths");
    }
    for (int c = 0; c < cols; ++c) {
      out(i, c) = j[i][c].get<double>();
    }
  }
  return out;
}

Vector parse_vector(const json& j, const char* name) {
  if (!j.is_array() || j.empty()) {
    fail(ErrorKind::Config, std::string("config: ") + name + " must be an array");
  }
  Vector out(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) out[i] = j[i].get<double>();
  return out;
}

PolyTable parse_poly_table(const json& j, const char* name) {
  PolyTable table;
  if (!j.is_array()) {
    fail(ErrorKind::Config,
         std::string("config: ") + name + " must be an array of rows");
  }
  for (const auto& row : j) {
    std::vector<std::vector<double>> r;
    for (const auto& entry : row) {
      if (entry.is_number()) {
        r.push_back({entry.get<double>()});
      } else {
        r.push_back(entry.get<std::vector<double>>());
      }
    }
    table.push_back(std::move(r));
  }
  return table;
}

}  // namespace

RunConfig default_config() { return RunConfig{}; }

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "config: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("config: parse error: ") + e.what());
  }

  RunConfig cfg;
  try {
    if (j.contains("system")) {
      const auto& s = j["system"];
      if (s.contains("builtin")) {
        const auto name = s["builtin"].get<std::string>();
        if (name != "mass" && name != "mass_example") {
          fail(ErrorKind::Config, "config: unknown builtin system " + name);
        }
        cfg.builtin_mass = true;
      } else {
        cfg.builtin_mass = false;
        cfg.n = s.at("n").get<int>();
        cfg.m = s.at("m").get<int>();
        cfg.A = parse_poly_table(s.at("A"), "A");
        cfg.B = parse_poly_table(s.at("B"), "B");
        cfg.Q = parse_poly_table(s.at("Q"), "Q");
        cfg.R = parse_poly_table(s.at("R"), "R");
      }
    }
    if (j.contains("boundary")) {
      cfg.x0 = parse_vector(j["boundary"].at("x0"), "x0");
      cfg.xT = parse_vector(j["boundary"].at("xT"), "xT");
    }
    if (j.contains("epsilons")) {
      cfg.epsilons = j["epsilons"].get<std::vector<double>>();
    }
    if (j.contains("mode")) {
      const auto mode = j["mode"].get<std::string>();
      if (mode == "switching") {
        cfg.mode = CompositionMode::Switching;
      } else if (mode == "superposition") {
        cfg.mode = CompositionMode::Superposition;
      } else {
        fail(ErrorKind::Config, "config: mode must be switching|superposition");
      }
    }
    if (j.contains("sim_step")) cfg.sim_step = j["sim_step"].get<double>();
    if (j.contains("layer_step")) cfg.layer_step = j["layer_step"].get<double>();
    if (j.contains("out_dir")) cfg.out_dir = j["out_dir"].get<std::string>();

    if (j.contains("learner")) {
      const auto& l = j["learner"];
      auto& lc = cfg.learner;
      if (l.contains("seed")) lc.seed = l["seed"].get<std::uint64_t>();
      if (l.contains("dt")) lc.dt = l["dt"].get<double>();
      if (l.contains("horizon")) lc.horizon = l["horizon"].get<double>();
      if (l.contains("step")) lc.step = l["step"].get<double>();
      if (l.contains("tol")) lc.tol = l["tol"].get<double>();
      if (l.contains("max_iter")) lc.max_iter = l["max_iter"].get<int>();
      if (l.contains("excitation")) {
        const auto& e = l["excitation"];
        if (e.contains("count")) lc.excitation.count = e["count"].get<int>();
        if (e.contains("amplitude")) {
          lc.excitation.amplitude = e["amplitude"].get<double>();
        }
        if (e.contains("freq_range")) {
          const auto range = e["freq_range"].get<std::vector<double>>();
          if (range.size() != 2) {
            fail(ErrorKind::Config, "config: freq_range must be [min, max]");
          }
          lc.excitation.freq_min = range[0];
          lc.excitation.freq_max = range[1];
        }
      }
      if (l.contains("k_init_a")) {
        lc.k_init_a = parse_matrix(l["k_init_a"], "k_init_a");
      }
      if (l.contains("k_init_b")) {
        lc.k_init_b = parse_matrix(l["k_init_b"], "k_init_b");
      }
      if (l.contains("plant")) {
        const auto plant = l["plant"].get<std::string>();
        if (plant == "frozen") {
          lc.time_varying_plant = false;
        } else if (plant == "time_varying") {
          lc.time_varying_plant = true;
        } else {
          fail(ErrorKind::Config, "config: plant must be frozen|time_varying");
        }
      }
      if (l.contains("layer_fraction")) {
        lc.layer_fraction = l["layer_fraction"].get<double>();
      }
    }
    if (j.contains("oracle")) {
      const auto& o = j["oracle"];
      if (o.contains("tol")) cfg.oracle.tol = o["tol"].get<double>();
      if (o.contains("max_iter")) cfg.oracle.max_iter = o["max_iter"].get<int>();
      if (o.contains("k_init_a")) {
        cfg.oracle.k_init_a = parse_matrix(o["k_init_a"], "oracle k_init_a");
      }
    }
  } catch (const json::exception& e) {
    fail(ErrorKind::Config, std::string("config: ") + e.what());
  }

  if (cfg.epsilons.empty()) {
    fail(ErrorKind::Config, "config: epsilons must be nonempty");
  }
  for (const double eps : cfg.epsilons) {
    if (!(eps > 0.0 && eps <= 1.0)) {
      fail(ErrorKind::Config, "config: epsilons must lie in (0, 1]");
    }
  }
  return cfg;
}

void apply_overrides(RunConfig& cfg, const std::optional<std::string>& out_dir,
                     const std::optional<std::uint64_t>& seed,
                     const std::vector<double>& epsilons) {
  if (out_dir) cfg.out_dir = *out_dir;
  if (seed) cfg.learner.seed = *seed;
  if (!epsilons.empty()) {
    for (const double eps : epsilons) {
      if (!(eps > 0.0 && eps <= 1.0)) {
        fail(ErrorKind::Config, "epsilon override must lie in (0, 1]");
      }
    }
    cfg.epsilons = epsilons;
  }
}

LTVSystem build_system(const RunConfig& cfg) {
  if (cfg.builtin_mass) {
    return mass_example(cfg.epsilons.front()).first;
  }
  return system_from_polynomials(cfg.n, cfg.m, cfg.A, cfg.B, cfg.Q, cfg.R);
}

BoundarySpec build_boundary(const RunConfig& cfg, double epsilon) {
  Vector x0 = cfg.x0;
  Vector xT = cfg.xT;
  if (cfg.builtin_mass && x0.size() == 0) {
    x0 = Vector::Constant(1, 0.5);
    xT = Vector::Constant(1, 0.9);
  }
  if (x0.size() == 0 || xT.size() == 0) {
    fail(ErrorKind::Config, "config: boundary x0/xT required for user systems");
  }
  return make_boundary(x0, xT, epsilon);
}

namespace {

Matrix default_gain(const RunConfig& cfg, double builtin_value) {
  if (cfg.builtin_mass) return Matrix::Constant(1, 1, builtin_value);
  const int n = cfg.n;
  const int m = cfg.m;
  return Matrix::Zero(m, n);
}

}  // namespace

Matrix k_init_initial(const RunConfig& cfg) {
  if (cfg.learner.k_init_a) return *cfg.learner.k_init_a;
  return default_gain(cfg, 1.0);
}

Matrix k_init_terminal(const RunConfig& cfg) {
  if (cfg.learner.k_init_b) return *cfg.learner.k_init_b;
  return default_gain(cfg, -2.5);
}

}  // namespace splqr
