#pragma once

#include <string>
#include <vector>

#include "espdg/field.hpp"
#include "espdg/mesh.hpp"
#include "espdg/physics.hpp"

namespace espdg {

/// Legacy ASCII VTK unstructured-grid snapshot: hexahedral subcells from the
/// nodal subgrids, point data c, u, v, w, p, mu, rho.
void write_vtk(const Mesh &mesh, const Field &q, const std::vector<double> &mu,
               const PhysParams &par, const std::string &path);

/// Binary restart snapshot (exact doubles).
void write_restart(const std::string &path, const Field &q, double t, int step);
void read_restart(const std::string &path, Field &q, double &t, int &step);

}  // namespace espdg
