#pragma once

#include "dphase/fem.hpp"
#include "dphase/mesh.hpp"

namespace dp {

struct LinearEigenOracle {
  double lambda = 0.0;
  FemFunction eigenfunction;
};

/// Dense p = 2 reference: smallest eigenvalue of (K + beta B) u = lambda M u
/// assembled with exact element matrices on the identical mesh; the
/// eigenfunction is returned mass-normalized and sign-fixed positive.
LinearEigenOracle robin_linear_oracle(const Mesh& mesh, double beta);

/// Dense p = 2 Steklov reference: B u = nu (K + M) u solved for the largest
/// nu (B is singular), lambda = 1/nu; boundary-mass normalized.
LinearEigenOracle steklov_linear_oracle(const Mesh& mesh);

}  // namespace dp
