#pragma once

#include "noon/dense.hpp"
#include "noon/state.hpp"

namespace noon {

struct PtReport {
    double tau = 0.0;            // minimal eigenvalue of rho^PT
    bool entangled = false;      // tau < -tol
    double coherence_norm2 = 0.0; // sum_i |coh[i]|^2
};

// Index swap on the second tensor factor: ((i,k),(j,l)) -> ((i,l),(j,k)).
// `m` lives on the product basis with index i*dim_b + k.
DenseHermitian partial_transpose(const DenseHermitian& m, int dim_a, int dim_b);

// Closed form for the noisy-N00N structure. Under PT every coherence
// |i,0><0,i| maps onto |i,i><0,0|; the nontrivial block is an arrowhead with
// hub rho_{00,00}, spokes coh[i] and zero spoke diagonal, whose smallest
// eigenvalue is (vac - sqrt(vac^2 + 4 sum|coh|^2))/2. All remaining PT
// eigenvalues are the nonnegative populations.
PtReport min_pt_eigenvalue(const NoisyNoonState& s, double tol = 1e-12);

// Smallest eigenvalue by cyclic Jacobi rotations on the real symmetric
// embedding of the complex Hermitian matrix. Oracle path only.
double min_eigenvalue(const DenseHermitian& m, double off_tol = 1e-13, int max_sweeps = 100);

} // namespace noon
