#pragma once

#include <vector>

#include "espdg/mesh.hpp"
#include "espdg/types.hpp"

namespace espdg {

/// Per-element nodal storage of the 5-component state.
class Field {
 public:
  Field() = default;
  Field(int nelem, int npe) { resize(nelem, npe); }
  explicit Field(const Mesh &mesh) { resize(mesh.n_elements(), mesh.nodes_per_element()); }

  void resize(int nelem, int npe) {
    nelem_ = nelem;
    npe_ = npe;
    data_.assign(static_cast<size_t>(nelem) * npe * 5, 0.0);
  }

  int n_elements() const { return nelem_; }
  int nodes_per_element() const { return npe_; }
  size_t size() const { return data_.size(); }

  double *at(int e, int q) { return data_.data() + (static_cast<size_t>(e) * npe_ + q) * 5; }
  const double *at(int e, int q) const {
    return data_.data() + (static_cast<size_t>(e) * npe_ + q) * 5;
  }

  State state(int e, int q) const {
    const double *p = at(e, q);
    return {p[0], p[1], p[2], p[3], p[4]};
  }
  void set_state(int e, int q, const State &s) {
    double *p = at(e, q);
    for (int m = 0; m < 5; ++m) p[m] = s[m];
  }

  std::vector<double> &raw() { return data_; }
  const std::vector<double> &raw() const { return data_; }

  /// Returns the element id holding a non-finite entry, or -1 if clean.
  int find_nan() const;

  void fill(double v) { std::fill(data_.begin(), data_.end(), v); }

 private:
  int nelem_ = 0, npe_ = 0;
  std::vector<double> data_;
};

}  // namespace espdg
