#include "espdg/vtk.hpp"

#include <cstring>
#include <fstream>

namespace espdg {

void write_vtk(const Mesh &mesh, const Field &q, const std::vector<double> &mu,
               const PhysParams &par, const std::string &path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write VTK file: " + path);
  out.precision(12);

  const int nelem = mesh.n_elements();
  const int npe = mesh.nodes_per_element();
  const int n1 = mesh.bases[0]->count(), n2 = mesh.bases[1]->count(), n3 = mesh.bases[2]->count();
  const long npoints = static_cast<long>(nelem) * npe;
  const long ncells = static_cast<long>(nelem) * (n1 - 1) * (n2 - 1) * (n3 - 1);

  out << "# vtk DataFile Version 3.0\n";
  out << "espdg snapshot\n";
  out << "ASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";
  out << "POINTS " << npoints << " double\n";
  for (int e = 0; e < nelem; ++e)
    for (int p = 0; p < npe; ++p) {
      const Vec3 &x = mesh.elems[e].x[p];
      out << x.x << " " << x.y << " " << x.z << "\n";
    }

  out << "CELLS " << ncells << " " << 9 * ncells << "\n";
  for (int e = 0; e < nelem; ++e) {
    const long base = static_cast<long>(e) * npe;
    for (int k = 0; k + 1 < n3; ++k)
      for (int j = 0; j + 1 < n2; ++j)
        for (int i = 0; i + 1 < n1; ++i) {
          out << 8 << " " << base + mesh.node_index(i, j, k) << " "
              << base + mesh.node_index(i + 1, j, k) << " "
              << base + mesh.node_index(i + 1, j + 1, k) << " "
              << base + mesh.node_index(i, j + 1, k) << " "
              << base + mesh.node_index(i, j, k + 1) << " "
              << base + mesh.node_index(i + 1, j, k + 1) << " "
              << base + mesh.node_index(i + 1, j + 1, k + 1) << " "
              << base + mesh.node_index(i, j + 1, k + 1) << "\n";
        }
  }
  out << "CELL_TYPES " << ncells << "\n";
  for (long c = 0; c < ncells; ++c) out << 12 << "\n";

  out << "POINT_DATA " << npoints << "\n";
  auto scalars = [&](const char *name, auto &&value) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (int e = 0; e < nelem; ++e)
      for (int p = 0; p < npe; ++p) out << value(e, p) << "\n";
  };
  scalars("c", [&](int e, int p) { return q.at(e, p)[0]; });
  scalars("u", [&](int e, int p) { return velocity(q.state(e, p), par).x; });
  scalars("v", [&](int e, int p) { return velocity(q.state(e, p), par).y; });
  scalars("w", [&](int e, int p) { return velocity(q.state(e, p), par).z; });
  scalars("p", [&](int e, int p) { return q.at(e, p)[4]; });
  scalars("mu", [&](int e, int p) { return mu[static_cast<size_t>(e) * npe + p]; });
  scalars("rho", [&](int e, int p) { return density(q.at(e, p)[0], par); });
}

namespace {
constexpr char kRestartMagic[9] = "ESPDGRST";
}

void write_restart(const std::string &path, const Field &q, double t, int step) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write restart file: " + path);
  out.write(kRestartMagic, 8);
  const int nelem = q.n_elements(), npe = q.nodes_per_element();
  out.write(reinterpret_cast<const char *>(&nelem), sizeof(int));
  out.write(reinterpret_cast<const char *>(&npe), sizeof(int));
  out.write(reinterpret_cast<const char *>(&t), sizeof(double));
  out.write(reinterpret_cast<const char *>(&step), sizeof(int));
  out.write(reinterpret_cast<const char *>(q.raw().data()),
            static_cast<std::streamsize>(q.raw().size() * sizeof(double)));
}

void read_restart(const std::string &path, Field &q, double &t, int &step) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open restart file: " + path);
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, kRestartMagic, 8) != 0) throw Error("bad restart file: " + path);
  int nelem = 0, npe = 0;
  in.read(reinterpret_cast<char *>(&nelem), sizeof(int));
  in.read(reinterpret_cast<char *>(&npe), sizeof(int));
  in.read(reinterpret_cast<char *>(&t), sizeof(double));
  in.read(reinterpret_cast<char *>(&step), sizeof(int));
  q.resize(nelem, npe);
  in.read(reinterpret_cast<char *>(q.raw().data()),
          static_cast<std::streamsize>(q.raw().size() * sizeof(double)));
  if (!in) throw Error("truncated restart file: " + path);
}

}  // namespace espdg
