#pragma once

#include "espdg/physics.hpp"

namespace espdg::mms {

/// Manufactured fields for the convergence cases (z-independent).
State exact_state(const Vec3 &x, double t, const PhysParams &par);

/// Time derivative of the manufactured state vector.
State exact_rate(const Vec3 &x, double t, const PhysParams &par);

/// Closed-form strong-form residual of the governing system on the
/// manufactured fields; generated by scripts/generate_mms.py.
State source(const Vec3 &x, double t, const PhysParams &par);

double exact_mu(const Vec3 &x, double t, const PhysParams &par);

}  // namespace espdg::mms
