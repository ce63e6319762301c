#include "espdg/config.hpp"

#include "espdg/mesh.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace espdg {

using nlohmann::json;

namespace {

template <typename T>
void get_to_if(const json &j, const char *key, T &out) {
  if (j.contains(key)) j.at(key).get_to(out);
}

json physics_to_json(const PhysParams &p) {
  return json{{"rho1", p.rho1},
              {"rho2", p.rho2},
              {"eta1", p.eta1},
              {"eta2", p.eta2},
              {"sigma", p.sigma},
              {"eps", p.eps},
              {"t_ch", p.t_ch},
              {"c0_sqr", p.c0_sqr},
              {"gravity", {p.gravity.x, p.gravity.y, p.gravity.z}},
              {"theta_w_deg", p.theta_w * 180.0 / M_PI},
              {"kappa_beta", p.kappa_beta}};
}

void physics_from_json(const json &j, PhysParams &p) {
  get_to_if(j, "rho1", p.rho1);
  get_to_if(j, "rho2", p.rho2);
  get_to_if(j, "eta1", p.eta1);
  get_to_if(j, "eta2", p.eta2);
  get_to_if(j, "sigma", p.sigma);
  get_to_if(j, "eps", p.eps);
  get_to_if(j, "t_ch", p.t_ch);
  get_to_if(j, "c0_sqr", p.c0_sqr);
  if (j.contains("gravity")) {
    auto g = j.at("gravity");
    p.gravity = {g.at(0).get<double>(), g.at(1).get<double>(), g.at(2).get<double>()};
  }
  if (j.contains("theta_w_deg")) p.theta_w = j.at("theta_w_deg").get<double>() * M_PI / 180.0;
  get_to_if(j, "kappa_beta", p.kappa_beta);
}

}  // namespace

void CaseConfig::validate() const {
  physics.validate();
  if (integrator.dt <= 0.0) throw Error("config: integrator.dt must be positive");
  if (t_final < 0.0) throw Error("config: t_final must be >= 0");
  if (flux_mode != "central" && flux_mode != "ers")
    throw Error("config: flux_mode must be central or ers");
  if (integrator.kind != "rk3" && integrator.kind != "imex")
    throw Error("config: integrator.kind must be rk3 or imex");
  if (integrator.kind == "imex" && (integrator.order < 1 || integrator.order > 2))
    throw Error("config: imex order must be 1 or 2");
  if (mesh.type != "cartesian" && mesh.type != "file")
    throw Error("config: mesh.type must be cartesian or file");
  for (const auto &t : mesh.tags) bc_kind_from_string(t);
}

CaseConfig parse_config(const std::string &text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error &err) {
    throw Error(std::string("config parse error: ") + err.what());
  }

  CaseConfig cfg;
  try {
    get_to_if(j, "case", cfg.case_name);
    if (j.contains("physics")) physics_from_json(j.at("physics"), cfg.physics);
    if (j.contains("mesh")) {
      const json &m = j.at("mesh");
      get_to_if(m, "type", cfg.mesh.type);
      if (m.contains("lower")) {
        auto v = m.at("lower");
        cfg.mesh.lower = {v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()};
      }
      if (m.contains("upper")) {
        auto v = m.at("upper");
        cfg.mesh.upper = {v.at(0).get<double>(), v.at(1).get<double>(), v.at(2).get<double>()};
      }
      get_to_if(m, "counts", cfg.mesh.counts);
      get_to_if(m, "degrees", cfg.mesh.degrees);
      get_to_if(m, "periodic", cfg.mesh.periodic);
      get_to_if(m, "tags", cfg.mesh.tags);
      get_to_if(m, "file", cfg.mesh.file);
      get_to_if(m, "mapping", cfg.mesh.mapping);
      get_to_if(m, "map_amplitude", cfg.mesh.map_amplitude);
    }
    get_to_if(j, "flux_mode", cfg.flux_mode);
    if (j.contains("integrator")) {
      const json &it = j.at("integrator");
      get_to_if(it, "kind", cfg.integrator.kind);
      get_to_if(it, "order", cfg.integrator.order);
      get_to_if(it, "dt", cfg.integrator.dt);
    }
    get_to_if(j, "t_final", cfg.t_final);
    if (j.contains("output")) {
      const json &o = j.at("output");
      get_to_if(o, "dir", cfg.output.dir);
      get_to_if(o, "cadence_steps", cfg.output.cadence_steps);
      get_to_if(o, "field_cadence", cfg.output.field_cadence);
      get_to_if(o, "write_fields", cfg.output.write_fields);
    }
    get_to_if(j, "seed", cfg.seed);
  } catch (const json::exception &err) {
    throw Error(std::string("config field error: ") + err.what());
  }
  cfg.validate();
  return cfg;
}

CaseConfig load_config(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const CaseConfig &cfg) {
  json j;
  j["case"] = cfg.case_name;
  j["physics"] = physics_to_json(cfg.physics);
  j["mesh"] = json{{"type", cfg.mesh.type},
                   {"lower", {cfg.mesh.lower.x, cfg.mesh.lower.y, cfg.mesh.lower.z}},
                   {"upper", {cfg.mesh.upper.x, cfg.mesh.upper.y, cfg.mesh.upper.z}},
                   {"counts", cfg.mesh.counts},
                   {"degrees", cfg.mesh.degrees},
                   {"periodic", cfg.mesh.periodic},
                   {"tags", cfg.mesh.tags},
                   {"file", cfg.mesh.file},
                   {"mapping", cfg.mesh.mapping},
                   {"map_amplitude", cfg.mesh.map_amplitude}};
  j["flux_mode"] = cfg.flux_mode;
  j["integrator"] =
      json{{"kind", cfg.integrator.kind}, {"order", cfg.integrator.order},
           {"dt", cfg.integrator.dt}};
  j["t_final"] = cfg.t_final;
  j["output"] = json{{"dir", cfg.output.dir},
                     {"cadence_steps", cfg.output.cadence_steps},
                     {"field_cadence", cfg.output.field_cadence},
                     {"write_fields", cfg.output.write_fields}};
  j["seed"] = cfg.seed;
  return j.dump(2);
}

void save_config(const CaseConfig &cfg, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write config file: " + path);
  out << serialize_config(cfg) << "\n";
}

}  // namespace espdg
