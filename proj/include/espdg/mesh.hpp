#pragma once

#include <array>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "espdg/basis.hpp"
#include "espdg/types.hpp"

namespace espdg {

enum class BcKind { interior, periodic, free_slip, no_slip, inflow, outflow };

BcKind bc_kind_from_string(const std::string &s);
std::string to_string(BcKind k);

/// Per-element curvilinear geometry: nodal coordinates, Jacobian, and the
/// volume-weighted contravariant vectors Ja^i built from the curl form so the
/// discrete metric identities hold.
struct ElementGeometry {
  std::vector<Vec3> x;                    // nodal physical coordinates
  std::vector<double> jac;                // Jacobian, > 0
  std::vector<std::array<Vec3, 3>> ja;    // ja[node][i] = J a^i at node
};

/// A mesh face. Geometry (normal, tangents, face Jacobian) is stored once,
/// evaluated from the left element, and shared by both sides; idx_l / idx_r
/// map face nodes (in the left side's parameterization) to volume nodes.
struct Face {
  int left = -1;
  int right = -1;  // -1 on physical boundaries
  int side_l = 0;  // local side 0..5: xi-,xi+,eta-,eta+,zeta-,zeta+
  int side_r = 0;
  int orient = 0;  // orientation code of the right side, 0..7
  BcKind kind = BcKind::interior;
  int na = 0, nb = 0;  // tangential degrees (node counts - 1)

  std::vector<Vec3> normal, tan1, tan2;  // outward from the left element
  std::vector<double> jf;                // face Jacobian |J a^i|
  std::vector<double> wq;                // tangential quadrature weight per node
  std::vector<double> beta_geom;         // N(N+1)/2 |Jf| <1/J>, kappa applied later
  std::vector<int> idx_l, idx_r;         // volume node index per face node

  int nfp() const { return (na + 1) * (nb + 1); }
};

/// Optional corner-node representation kept for mesh file round trips.
struct CornerMesh {
  std::vector<Vec3> nodes;
  std::vector<std::array<int, 8>> hexes;  // lexicographic corner order
  std::vector<std::pair<std::array<int, 4>, BcKind>> boundary;
};

class Mesh {
 public:
  std::array<std::shared_ptr<const NodalBasis>, 3> bases;
  std::vector<ElementGeometry> elems;
  std::vector<Face> faces;
  // per element: (face id, side: 0 for left, 1 for right), one per local side
  std::vector<std::array<std::pair<int, int>, 6>> elem_faces;
  std::shared_ptr<CornerMesh> corners;  // may be null for mapped meshes

  int n_elements() const { return static_cast<int>(elems.size()); }
  int nodes_per_element() const { return npe_; }
  std::array<int, 3> counts() const {
    return {bases[0]->count(), bases[1]->count(), bases[2]->count()};
  }
  int node_index(int i, int j, int k) const {
    return (k * bases[1]->count() + j) * bases[0]->count() + i;
  }
  /// Normal-direction quadrature weight at the given local side.
  double side_weight(int side) const;

  void finalize();  // computes npe_, metrics assumed filled

 private:
  int npe_ = 0;
};

/// Builds an axis-aligned Cartesian mesh of the box [lower, upper] with
/// counts[d] elements and degrees[d] polynomial degrees per direction.
/// tags are the boundary kinds for sides xmin,xmax,ymin,ymax,zmin,zmax and
/// are ignored in periodic directions.
Mesh build_cartesian(const Vec3 &lower, const Vec3 &upper, const std::array<int, 3> &counts,
                     const std::array<int, 3> &degrees, const std::array<bool, 3> &periodic,
                     const std::array<BcKind, 6> &tags);

/// Remaps the nodal coordinates through a smooth global mapping and rebuilds
/// metric terms and face geometry. Throws if the Jacobian becomes
/// non-positive at any node, naming element and node.
Mesh apply_mapping(const Mesh &mesh, const std::function<Vec3(const Vec3 &)> &mapping);

/// Recomputes Jacobian and contravariant vectors for one element from its
/// nodal coordinates using the curl form.
void compute_metrics_curl_form(ElementGeometry &geom,
                               const std::array<std::shared_ptr<const NodalBasis>, 3> &bases);

Mesh read_mesh_file(const std::string &path, const std::array<int, 3> &degrees);
void write_mesh_file(const Mesh &mesh, const std::string &path);

/// Maximum nodal residual of the discrete metric identities over the mesh.
double metric_identity_residual(const Mesh &mesh);

/// Maximum mismatch of coincident face-node coordinates (periodic faces are
/// compared modulo the translation between the two sides).
double face_watertightness(const Mesh &mesh);

}  // namespace espdg
