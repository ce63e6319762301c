#include "espdg/field.hpp"

#include <cmath>

namespace espdg {

int Field::find_nan() const {
  for (int e = 0; e < nelem_; ++e) {
    const double *p = at(e, 0);
    for (int k = 0; k < npe_ * 5; ++k)
      if (!std::isfinite(p[k])) return e;
  }
  return -1;
}

}  // namespace espdg
