#pragma once

#include <complex>
#include <vector>

#include <json.hpp>

#include "noon/dense.hpp"

namespace noon {

// Two-mode density operator restricted to the noisy-N00N structure: a vacuum
// weight, the |i,0> and |0,i> population ladders and the |i,0><0,i| coherence
// ladder. Every channel and analyzer in this library is closed on this
// structure, so this O(N_max) representation is exact.
//
// Ladder arrays are sized cutoff+1 and indexed by photon number; index 0 is
// unused (the vacuum weight lives in `vac`).
struct NoisyNoonState {
    int cutoff = 0;                 // largest retained Fock level N_max
    double vac = 0.0;               // rho_{00,00}
    std::vector<double> diag_a;     // rho_{i0,i0}
    std::vector<double> diag_b;     // rho_{0i,0i}
    std::vector<complexd> coh;      // rho_{i0,0i}; rho_{0i,i0} is its conjugate
};

double trace(const NoisyNoonState& s);

// Throws ValidationError on broken trace, negative populations or a coherence
// exceeding its positivity bound |coh[i]|^2 <= diag_a[i]*diag_b[i].
void validate(const NoisyNoonState& s, double tol = 1e-12);
bool is_valid(const NoisyNoonState& s, double tol = 1e-12) noexcept;

// (|N,0> + |0,N>)/sqrt(2) as a density operator. N >= 1.
NoisyNoonState pure_noon(int n);

// Mixture sum_N p_N |psi_N><psi_N| with weights[0] the vacuum weight.
NoisyNoonState mixed_noon(const std::vector<double>& weights, double tol = 1e-12);

// (1-p)|0,0><0,0| + p|psi_N><psi_N|.
NoisyNoonState vacuum_mix(double p, int n);

// <psi_M| rho |psi_M>.
double fidelity_with_noon(const NoisyNoonState& s, int m);

// Dense export on the ordered basis
//   {|0,0>, |1,0>..|N,0>, |0,1>..|0,N>, |1,1>..|N,N>}   (dim 1+3N).
// The |i,i> rows/columns are zero for a physical state; they exist so the
// partial-transpose image fits in the same basis.
DenseHermitian to_dense(const NoisyNoonState& s);

// Dense export on the full product basis |i,j>, i,j in 0..N, with index
// i*(N+1)+j. Used by the generic partial-transpose oracle.
DenseHermitian to_dense_product(const NoisyNoonState& s);

// JSON schema: {cutoff, vac, diag_a, diag_b, coh:[{re,im}]} with the ladder
// arrays listing photon numbers 1..cutoff.
nlohmann::json to_json(const NoisyNoonState& s);
NoisyNoonState state_from_json(const nlohmann::json& j);

} // namespace noon
