#pragma once

#include <optional>
#include <vector>

#include "noon/state.hpp"

namespace noon {

// Supersensitivity window in phi, reported modulo the pi/M period with
// lo normalized into [0, pi/M).
struct PhaseInterval {
    double lo = 0.0;
    double hi = 0.0;
};

struct MinPhaseError {
    double dphi = 0.0; // minimal error over phi
    double phi = 0.0;  // argmin phase (quadrature point)
};

struct OptimalOrder {
    int m = 0;
    double dphi = 0.0;
};

// <A_M> = 2 Re(e^{i phi M} rho_{0M,M0}) for the interference observable
// A_M = |0,M><M,0| + |M,0><0,M|.
double interference_expectation(const NoisyNoonState& s, int m, double phi);

// Error-propagation phase error at phi. Throws PhaseInsensitiveError where
// the propagation denominator vanishes (coh[M] = 0 or phi at a stationary
// point of <A_M>) instead of returning an infinity.
double phase_error(const NoisyNoonState& s, int m, double phi);

// Closed-form minimum sqrt(S)/(2 r M) with S the level-M population sum and
// r = |coh[M]|, attained where the interference term is in quadrature.
MinPhaseError min_phase_error(const NoisyNoonState& s, int m);

// True iff |coh[M]|^2 > (1/M)(rho_{M0,M0}+rho_{0M,0M})/4. The boundary case
// counts as not supersensitive.
bool supersensitivity_condition(const NoisyNoonState& s, int m);

// Interval of phases with dphi < 1/sqrt(M), when the condition holds.
// M = 1 never qualifies (the window width collapses).
std::optional<PhaseInterval> supersensitivity_interval(const NoisyNoonState& s, int m);

// Phase error of an initially pure N00N state after equal constant loss in
// both modes. Exact only for kappa = theta; unequal losses are rejected and
// belong on the general phase_error path.
double constant_loss_error(double kappa, double theta, int m, double phi);

// Integer M minimizing the lossy-N00N minimal error (kappa theta)^{-M/4}/M,
// continuous optimum M* = -4/ln(kappa theta).
OptimalOrder optimal_m(double kappa, double theta);

// Gaussian-noise width at which a dephased N00N state with M photons crosses
// the standard quantum limit: delta* = sqrt(ln M)/M (from |lambda|^2 = 1/M).
double dephasing_threshold(int m);

// Phase-error curve over a grid, with singular points marked NaN.
struct PhaseErrorProfile {
    int m = 0;
    std::vector<double> phi;
    std::vector<double> dphi;    // NaN at phase-insensitive points
    double dphi_min = 0.0;
    double phi_star = 0.0;
    double sql = 0.0; // 1/sqrt(M)
    double hl = 0.0;  // 1/M
    bool condition = false;
    std::optional<PhaseInterval> interval;
};

PhaseErrorProfile phase_error_profile(const NoisyNoonState& s, int m,
                                      const std::vector<double>& phi_grid);
// Reference implementation without the parallel loop; used by tests and the
// benchmark.
PhaseErrorProfile phase_error_profile_serial(const NoisyNoonState& s, int m,
                                             const std::vector<double>& phi_grid);

} // namespace noon
