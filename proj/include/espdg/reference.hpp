#pragma once

#include "espdg/operator.hpp"

namespace espdg::reference {

/// Plain serial evaluation of the semi-discrete residual, assembled through
/// the generic block-vector physics operations. Kept as the correctness
/// reference for the OpenMP kernels in DgOperator; the benchmark tool
/// compares the two.
void eval_residual_serial(const Mesh &mesh, const PhysParams &params, const Field &q,
                          Field &dqdt, const OperatorOptions &opt);

}  // namespace espdg::reference
