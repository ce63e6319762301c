#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "espdg/physics.hpp"

namespace espdg {

struct MeshSpec {
  std::string type = "cartesian";  // "cartesian" | "file"
  Vec3 lower{0, 0, 0}, upper{1, 1, 1};
  std::array<int, 3> counts{1, 1, 1};
  std::array<int, 3> degrees{3, 3, 1};
  std::array<bool, 3> periodic{false, false, true};
  // xmin,xmax,ymin,ymax,zmin,zmax; ignored in periodic directions
  std::array<std::string, 6> tags{"free_slip", "free_slip", "free_slip",
                                  "free_slip", "free_slip", "free_slip"};
  std::string file;                // mesh file path when type == "file"
  std::string mapping = "none";    // "none" | "sine3d"
  double map_amplitude = 0.05;
};

struct IntegratorSpec {
  std::string kind = "imex";  // "rk3" | "imex"
  int order = 2;              // imex BDF order (1 or 2)
  double dt = 1e-4;
};

struct OutputSpec {
  std::string dir = "out";
  int cadence_steps = 100;   // diagnostics CSV cadence
  int field_cadence = 0;     // VTK snapshot cadence in steps; 0 = final only
  bool write_fields = true;
};

struct CaseConfig {
  std::string case_name = "random";  // manufactured|random|static_bubble|rising_bubble|duct
  PhysParams physics;
  MeshSpec mesh;
  std::string flux_mode = "ers";  // "central" | "ers"
  IntegratorSpec integrator;
  double t_final = 0.0;
  OutputSpec output;
  uint64_t seed = 0;

  void validate() const;
};

CaseConfig load_config(const std::string &path);
CaseConfig parse_config(const std::string &text);
std::string serialize_config(const CaseConfig &cfg);
void save_config(const CaseConfig &cfg, const std::string &path);

}  // namespace espdg
