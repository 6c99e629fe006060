// Copyright 2026 The dipolarbus Authors
// SPDX-License-Identifier: Apache-2.0

#include "config.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>

#include "dipolarbus/common.hpp"

namespace dipolarbus::cli {

namespace {

/// Object view that tracks the key path and which keys were consumed.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(&j), path_(std::move(path)) {
    if (!j.is_object()) throw ConfigError("config: '" + display() + "' must be an object");
  }

  [[nodiscard]] bool has(const std::string& key) const { return j_->contains(key); }

  [[nodiscard]] std::string key_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  [[nodiscard]] Node child(const std::string& key) const {
    seen_.insert(key);
    if (!has(key)) throw ConfigError("config: missing required key '" + key_path(key) + "'");
    return Node(j_->at(key), key_path(key));
  }

  [[nodiscard]] std::optional<Node> optional_child(const std::string& key) const {
    seen_.insert(key);
    if (!has(key)) return std::nullopt;
    return Node(j_->at(key), key_path(key));
  }

  template <typename T>
  [[nodiscard]] T required(const std::string& key) const {
    seen_.insert(key);
    if (!has(key)) throw ConfigError("config: missing required key '" + key_path(key) + "'");
    return convert<T>(j_->at(key), key_path(key));
  }

  template <typename T>
  [[nodiscard]] std::optional<T> optional(const std::string& key) const {
    seen_.insert(key);
    if (!has(key) || j_->at(key).is_null()) return std::nullopt;
    return convert<T>(j_->at(key), key_path(key));
  }

  template <typename T>
  [[nodiscard]] T get(const std::string& key, T fallback) const {
    return optional<T>(key).value_or(std::move(fallback));
  }

  [[nodiscard]] const Json& raw(const std::string& key) const {
    seen_.insert(key);
    return j_->at(key);
  }

  /// Rejects keys that were never looked at.
  void finish() const {
    for (const auto& item : j_->items()) {
      if (!seen_.contains(item.key())) {
        throw ConfigError("config: unknown key '" + key_path(item.key()) + "'");
      }
    }
  }

 private:
  [[nodiscard]] std::string display() const { return path_.empty() ? "<root>" : path_; }

  template <typename T>
  static T convert(const Json& v, const std::string& path) {
    if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError("config: '" + path + "' must be a number");
      const double x = v.get<double>();
      if (!std::isfinite(x)) throw ConfigError("config: '" + path + "' must be finite");
      return x;
    } else if constexpr (std::is_same_v<T, int>) {
      if (!v.is_number_integer()) throw ConfigError("config: '" + path + "' must be an integer");
      const auto x = v.get<std::int64_t>();
      if (x < std::numeric_limits<int>::min() || x > std::numeric_limits<int>::max()) {
        throw ConfigError("config: '" + path + "' is out of range");
      }
      return static_cast<int>(x);
    } else if constexpr (std::is_same_v<T, std::uint64_t>) {
      if (!v.is_number_unsigned()) {
        throw ConfigError("config: '" + path + "' must be a non-negative integer");
      }
      return v.get<std::uint64_t>();
    } else if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError("config: '" + path + "' must be a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError("config: '" + path + "' must be a string");
      return v.get<std::string>();
    } else if constexpr (std::is_same_v<T, std::vector<double>>) {
      if (!v.is_array()) throw ConfigError("config: '" + path + "' must be an array of numbers");
      std::vector<double> out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(convert<double>(v[i], path + "[" + std::to_string(i) + "]"));
      }
      return out;
    } else if constexpr (std::is_same_v<T, std::vector<int>>) {
      if (!v.is_array()) throw ConfigError("config: '" + path + "' must be an array of integers");
      std::vector<int> out;
      for (std::size_t i = 0; i < v.size(); ++i) {
        out.push_back(convert<int>(v[i], path + "[" + std::to_string(i) + "]"));
      }
      return out;
    } else {
      static_assert(sizeof(T) == 0, "unsupported config type");
    }
  }

  const Json* j_;
  std::string path_;
  mutable std::set<std::string> seen_;
};

void require_positive(double v, const std::string& path) {
  if (!(v > 0.0)) throw ConfigError("config: '" + path + "' must be > 0");
}

void require_positive_all(const std::vector<double>& v, const std::string& path) {
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0)) throw ConfigError("config: '" + path + "[" + std::to_string(i) + "]' must be > 0");
  }
}

Preset apply_overrides(Preset p, const Node& o) {
  auto set = [&](const char* key, double& field) {
    if (auto v = o.optional<double>(key)) field = *v;
  };
  set("omega0_si", p.omega0_si);
  set("delta0_si", p.delta0_si);
  set("c3_over_a3_si", p.c3_over_a3_si);
  set("a_si", p.a_si);
  set("gamma0_si", p.gamma0_si);
  set("delta_exp", p.delta_exp);
  set("span_l_si", p.span_l_si);
  set("measured_gap", p.measured_gap);
  set("measured_e_int", p.measured_e_int);
  set("measured_l0", p.measured_l0);
  o.finish();
  return p;
}

void parse_drive(RunConfig& cfg, const Node& root) {
  const auto node = cfg.preset ? root.optional_child("drive") : std::optional(root.child("drive"));
  DriveParams d;
  if (cfg.preset) {
    d.omega0 = 1.0;
    d.delta0 = cfg.preset->delta0_si / cfg.preset->omega0_si;
    d.c_p = cfg.preset->c3_over_a3_si / cfg.preset->omega0_si;
    d.p = 3;
  }
  if (node) {
    const bool need = !cfg.preset;
    auto num = [&](const char* key, double fallback) {
      return need ? node->required<double>(key) : node->get<double>(key, fallback);
    };
    d.omega0 = num("omega0", d.omega0);
    d.delta0 = num("delta0", d.delta0);
    d.t0 = num("t0", d.t0);
    d.c_p = num("c_p", d.c_p);
    d.p = need ? node->required<int>("p") : node->get<int>("p", d.p);
    node->finish();
  }
  require_positive(d.omega0, "drive.omega0");
  require_positive(d.t0, "drive.t0");
  require_positive(d.c_p, "drive.c_p");
  if (d.p != 3 && d.p != 6) throw ConfigError("config: 'drive.p' must be 3 or 6");
  d.validate();
  cfg.drive = d;
}

}  // namespace

std::string to_string(OracleMode mode) {
  switch (mode) {
    case OracleMode::spacing: return "spacing";
    case OracleMode::lattice: return "lattice";
    case OracleMode::scaling: return "scaling";
  }
  return "unknown";
}

OracleMode parse_oracle_mode(const std::string& name) {
  if (name == "spacing") return OracleMode::spacing;
  if (name == "lattice") return OracleMode::lattice;
  if (name == "scaling") return OracleMode::scaling;
  throw ConfigError("unknown oracle mode '" + name + "' (expected spacing, lattice or scaling)");
}

RunConfig parse_config(const Json& document) {
  RunConfig cfg;
  cfg.document = document;
  const Node root(document, "");

  const int version = root.required<int>("schema_version");
  if (version != kSchemaVersion) {
    throw ConfigError("config: unsupported schema_version " + std::to_string(version) +
                      " (expected " + std::to_string(kSchemaVersion) + ")");
  }

  cfg.units = root.get<std::string>("units", "internal");
  if (cfg.units != "internal") cfg.preset = preset(cfg.units);
  if (auto o = root.optional_child("preset_overrides")) {
    if (!cfg.preset) {
      throw ConfigError("config: 'preset_overrides' requires 'units' to name a preset");
    }
    cfg.preset = apply_overrides(*cfg.preset, *o);
  }

  {
    const Node g = root.child("geometry");
    cfg.geometry.mode = parse_geometry_mode(g.required<std::string>("mode"));
    cfg.geometry.n_sites = g.required<int>("n_sites");
    cfg.geometry.offset_d = g.required<double>("offset_d");
    cfg.geometry.r_min = g.get<double>("r_min", cfg.geometry.r_min);
    cfg.geometry.jitter_width = g.get<double>("jitter_width", cfg.geometry.jitter_width);
    cfg.seed = g.get<std::uint64_t>("seed", 0);
    g.finish();
    if (cfg.geometry.n_sites < 2) throw ConfigError("config: 'geometry.n_sites' must be >= 2");
    require_positive(cfg.geometry.offset_d, "geometry.offset_d");
    if (!(cfg.geometry.r_min >= 0.0 && cfg.geometry.r_min < 1.0)) {
      throw ConfigError("config: 'geometry.r_min' must lie in [0, 1)");
    }
  }

  parse_drive(cfg, root);

  if (auto b = root.optional_child("basis")) {
    const auto policy = b->get<std::string>("policy", "full");
    if (policy == "full") {
      cfg.basis.kind = BasisChoice::Kind::full;
    } else if (policy == "truncated") {
      cfg.basis.kind = BasisChoice::Kind::truncated;
      cfg.basis.truncated.n_max = b->required<int>("n_max");
      cfg.basis.truncated.r_cut = b->get<double>("r_cut", 0.0);
      if (cfg.basis.truncated.n_max < 0) throw ConfigError("config: 'basis.n_max' must be >= 0");
      if (!(cfg.basis.truncated.r_cut >= 0.0)) throw ConfigError("config: 'basis.r_cut' must be >= 0");
    } else if (policy == "auto") {
      cfg.basis.kind = BasisChoice::Kind::automatic;
    } else {
      throw ConfigError("config: 'basis.policy' must be full, truncated or auto");
    }
    if (auto m = b->optional<std::uint64_t>("max_dim")) {
      if (*m == 0) throw ConfigError("config: 'basis.max_dim' must be > 0");
      cfg.basis.max_dim = static_cast<std::size_t>(*m);
    }
    b->finish();
  }

  cfg.schedule.t0 = cfg.drive.t0;
  if (auto p = root.optional_child("protocol")) {
    cfg.schedule.reversal = parse_reversal(p->get<std::string>("reversal", "sign_flip"));
    cfg.schedule.dt = p->optional<double>("dt");
    cfg.schedule.default_steps = p->get<int>("steps", cfg.schedule.default_steps);
    if (p->has("t_pi")) {
      const Json& t = p->raw("t_pi");
      if (t.is_string()) {
        if (t.get<std::string>() != "auto") {
          throw ConfigError("config: 'protocol.t_pi' must be \"auto\" or a number");
        }
      } else if (t.is_number()) {
        cfg.schedule.t_pi = t.get<double>();
        if (!(*cfg.schedule.t_pi >= 0.0)) throw ConfigError("config: 'protocol.t_pi' must be >= 0");
      } else {
        throw ConfigError("config: 'protocol.t_pi' must be \"auto\" or a number");
      }
    }
    cfg.gate.hold_scale = p->get<double>("hold_scale", 1.0);
    cfg.schedule.krylov.tolerance = p->get<double>("krylov_tolerance", cfg.schedule.krylov.tolerance);
    cfg.schedule.krylov.max_dim = p->get<int>("krylov_max_dim", cfg.schedule.krylov.max_dim);
    p->finish();
    if (cfg.schedule.default_steps < 100) throw ConfigError("config: 'protocol.steps' must be >= 100");
    if (!(cfg.gate.hold_scale >= 0.0)) throw ConfigError("config: 'protocol.hold_scale' must be >= 0");
    if (cfg.schedule.krylov.max_dim < 2) throw ConfigError("config: 'protocol.krylov_max_dim' must be >= 2");
  }
  try {
    cfg.schedule.validate();
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("config: protocol: ") + e.what());
  }

  if (auto s = root.optional_child("spectral")) {
    cfg.gate.gap.grid_points = s->get<int>("gap_grid_points", cfg.gate.gap.grid_points);
    cfg.gate.gap.eigen.tol = s->get<double>("eigen_tol", cfg.gate.gap.eigen.tol);
    cfg.gate.gap.eigen.max_iter = s->get<int>("max_iter", cfg.gate.gap.eigen.max_iter);
    s->finish();
    if (cfg.gate.gap.grid_points < 3) throw ConfigError("config: 'spectral.gap_grid_points' must be >= 3");
    require_positive(cfg.gate.gap.eigen.tol, "spectral.eigen_tol");
    if (cfg.gate.gap.eigen.max_iter < 1) throw ConfigError("config: 'spectral.max_iter' must be >= 1");
  }

  if (auto l = root.optional_child("lz_sweep")) {
    cfg.omega0_grid = l->get<std::vector<double>>("omega0_grid", {});
    l->finish();
    require_positive_all(cfg.omega0_grid, "lz_sweep.omega0_grid");
  }

  if (auto e = root.optional_child("ensemble")) {
    cfg.ensemble.realizations = e->get<int>("realizations", 1);
    cfg.ensemble.base_seed = e->get<std::uint64_t>("base_seed", cfg.seed);
    cfg.ensemble.pipeline = parse_pipeline(e->get<std::string>("pipeline", "gap_and_eint"));
    e->finish();
    if (cfg.ensemble.realizations < 1) throw ConfigError("config: 'ensemble.realizations' must be >= 1");
  } else {
    cfg.ensemble.base_seed = cfg.seed;
  }

  if (auto c = root.optional_child("error_curve")) {
    auto& ec = cfg.error_curve;
    ec.gamma0_grid = c->get<std::vector<double>>("gamma0_grid", {});
    ec.delta_exp = c->optional<double>("delta_exp");
    ec.b = c->get<double>("b", ec.b);
    ec.c = c->get<double>("c", ec.c);
    ec.gap = c->optional<double>("gap");
    ec.e_int = c->optional<double>("e_int");
    ec.span_l = c->optional<double>("span_l");
    ec.l0 = c->optional<double>("l0");
    if (auto d = c->optional_child("disorder")) {
      DisorderSettings ds;
      ds.realizations = d->required<int>("realizations");
      ds.base_seed = d->get<std::uint64_t>("base_seed", cfg.seed);
      ds.n_sites = d->get<int>("n_sites", cfg.geometry.n_sites);
      d->finish();
      if (ds.realizations < 1) throw ConfigError("config: 'error_curve.disorder.realizations' must be >= 1");
      if (ds.n_sites < 2) throw ConfigError("config: 'error_curve.disorder.n_sites' must be >= 2");
      ec.disorder = ds;
    }
    c->finish();
    for (std::size_t i = 0; i < ec.gamma0_grid.size(); ++i) {
      if (!(ec.gamma0_grid[i] >= 0.0)) {
        throw ConfigError("config: 'error_curve.gamma0_grid[" + std::to_string(i) + "]' must be >= 0");
      }
    }
    if (!(ec.b > 0.0 && ec.b <= 1.0)) throw ConfigError("config: 'error_curve.b' must lie in (0, 1]");
    require_positive(ec.c, "error_curve.c");
    if (ec.delta_exp) require_positive(*ec.delta_exp, "error_curve.delta_exp");
    if (ec.gap && !(*ec.gap >= 0.0)) throw ConfigError("config: 'error_curve.gap' must be >= 0");
    if (ec.span_l) require_positive(*ec.span_l, "error_curve.span_l");
    if (ec.l0) require_positive(*ec.l0, "error_curve.l0");
    if (ec.e_int && *ec.e_int == 0.0) throw ConfigError("config: 'error_curve.e_int' must be nonzero");
  }

  if (auto o = root.optional_child("oracle")) {
    auto& os = cfg.oracle;
    os.mode = parse_oracle_mode(o->get<std::string>("mode", "scaling"));
    os.spans = o->get<std::vector<double>>("spans", os.spans);
    os.d = o->get<double>("d", os.d);
    os.n_exc = o->get<int>("n_exc", os.n_exc);
    os.p_values = o->get<std::vector<int>>("p_values", os.p_values);
    os.c_over_delta = o->get<std::vector<double>>("c_over_delta", os.c_over_delta);
    os.span_over_a_r = o->get<double>("span_over_a_r", os.span_over_a_r);
    os.relax_tolerance = o->get<double>("relax_tolerance", os.relax_tolerance);
    o->finish();
    require_positive_all(os.spans, "oracle.spans");
    require_positive(os.d, "oracle.d");
    if (os.n_exc < 2) throw ConfigError("config: 'oracle.n_exc' must be >= 2");
    for (int p : os.p_values) {
      if (p < 2) throw ConfigError("config: 'oracle.p_values' entries must be >= 2");
    }
    require_positive_all(os.c_over_delta, "oracle.c_over_delta");
    require_positive(os.span_over_a_r, "oracle.span_over_a_r");
    require_positive(os.relax_tolerance, "oracle.relax_tolerance");
  }

  root.finish();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path.string() + "'");
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ConfigError("config: '" + path.string() + "' is not valid JSON: " + e.what());
  }
  return parse_config(doc);
}

std::string config_hash(const Json& document) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : document.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016" PRIx64, h);
  return buf;
}

namespace {

Json basis_json(const BasisChoice& b) {
  Json j;
  switch (b.kind) {
    case BasisChoice::Kind::full: j["policy"] = "full"; break;
    case BasisChoice::Kind::automatic: j["policy"] = "auto"; break;
    case BasisChoice::Kind::truncated:
      j["policy"] = "truncated";
      j["n_max"] = b.truncated.n_max;
      j["r_cut"] = b.truncated.r_cut;
      break;
  }
  j["max_dim"] = b.max_dim;
  return j;
}

}  // namespace

Json describe(const RunConfig& c) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["units"] = c.units;
  j["geometry"] = {{"mode", to_string(c.geometry.mode)},
                   {"n_sites", c.geometry.n_sites},
                   {"offset_d", c.geometry.offset_d},
                   {"r_min", c.geometry.r_min},
                   {"jitter_width", c.geometry.jitter_width},
                   {"seed", c.seed}};
  j["basis"] = basis_json(c.basis);
  j["drive"] = {{"omega0", c.drive.omega0},
                {"delta0", c.drive.delta0},
                {"t0", c.drive.t0},
                {"c_p", c.drive.c_p},
                {"p", c.drive.p}};
  j["protocol"] = {{"reversal", to_string(c.schedule.reversal)},
                   {"dt", c.schedule.step()},
                   {"t_pi", c.schedule.t_pi ? Json(*c.schedule.t_pi) : Json("auto")},
                   {"hold_scale", c.gate.hold_scale},
                   {"krylov_tolerance", c.schedule.krylov.tolerance},
                   {"krylov_max_dim", c.schedule.krylov.max_dim}};
  j["spectral"] = {{"gap_grid_points", c.gate.gap.grid_points},
                   {"eigen_tol", c.gate.gap.eigen.tol},
                   {"max_iter", c.gate.gap.eigen.max_iter}};
  j["lz_sweep"] = {{"omega0_grid", c.omega0_grid}};
  j["ensemble"] = {{"realizations", c.ensemble.realizations},
                   {"base_seed", c.ensemble.base_seed},
                   {"pipeline", to_string(c.ensemble.pipeline)}};
  {
    const auto& e = c.error_curve;
    auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
    Json ej = {{"gamma0_grid", e.gamma0_grid}, {"delta_exp", opt(e.delta_exp)},
               {"b", e.b},                     {"c", e.c},
               {"gap", opt(e.gap)},            {"e_int", opt(e.e_int)},
               {"span_l", opt(e.span_l)},      {"l0", opt(e.l0)}};
    if (e.disorder) {
      ej["disorder"] = {{"realizations", e.disorder->realizations},
                        {"base_seed", e.disorder->base_seed},
                        {"n_sites", e.disorder->n_sites}};
    }
    j["error_curve"] = ej;
  }
  j["oracle"] = {{"mode", to_string(c.oracle.mode)},
                 {"spans", c.oracle.spans},
                 {"d", c.oracle.d},
                 {"n_exc", c.oracle.n_exc},
                 {"p_values", c.oracle.p_values},
                 {"c_over_delta", c.oracle.c_over_delta},
                 {"span_over_a_r", c.oracle.span_over_a_r},
                 {"relax_tolerance", c.oracle.relax_tolerance}};
  if (c.preset) {
    const auto& p = *c.preset;
    j["preset"] = {{"name", p.name},
                   {"omega0_si", p.omega0_si},
                   {"delta0_si", p.delta0_si},
                   {"c3_over_a3_si", p.c3_over_a3_si},
                   {"a_si", p.a_si},
                   {"gamma0_si", p.gamma0_si},
                   {"delta_exp", p.delta_exp},
                   {"span_l_si", p.span_l_si},
                   {"measured_gap", p.measured_gap},
                   {"measured_e_int", p.measured_e_int},
                   {"measured_l0", p.measured_l0},
                   {"notes", p.notes}};
  }
  return j;
}

}  // namespace dipolarbus::cli
