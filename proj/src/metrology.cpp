#include "noon/metrology.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "noon/errors.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

namespace noon {

namespace {

void check_order(const NoisyNoonState& s, int m) {
    if (m < 1) throw ValidationError("probed order M must be >= 1");
    if (m > s.cutoff) throw ValidationError("probed order M exceeds the state cutoff");
}

// rho_{0M,M0} rotated by the interferometer phase: e^{i phi M} conj(coh[M]).
complexd rotated_coherence(const NoisyNoonState& s, int m, double phi) {
    return std::polar(1.0, phi * m) * std::conj(s.coh[m]);
}

} // namespace

double interference_expectation(const NoisyNoonState& s, int m, double phi) {
    check_order(s, m);
    return 2.0 * rotated_coherence(s, m, phi).real();
}

double phase_error(const NoisyNoonState& s, int m, double phi) {
    check_order(s, m);
    const complexd z = rotated_coherence(s, m, phi);
    const double x = 2.0 * z.real();
    const double y = 2.0 * z.imag();
    if (y == 0.0)
        throw PhaseInsensitiveError("phase_error: <A_M> stationary at this phase (zero denominator)");
    const double s_pop = s.diag_a[m] + s.diag_b[m];
    const double num = s_pop - x * x;
    const double val = std::sqrt(std::max(num, 0.0) / (y * y)) / m;
    if (!std::isfinite(val)) throw PhaseInsensitiveError("phase_error: non-finite value");
    return val;
}

MinPhaseError min_phase_error(const NoisyNoonState& s, int m) {
    check_order(s, m);
    const double r = std::abs(s.coh[m]);
    if (r == 0.0)
        throw PhaseInsensitiveError("min_phase_error: no phase sensitivity at this order (coh = 0)");
    const double s_pop = s.diag_a[m] + s.diag_b[m];
    MinPhaseError out;
    out.dphi = std::sqrt(s_pop) / (2.0 * r * m);
    // Quadrature point: phi M + arg(rho_{0M,M0}) = pi/2, arg(rho_{0M,M0}) = -arg(coh).
    out.phi = (M_PI / 2.0 + std::arg(s.coh[m])) / m;
    return out;
}

bool supersensitivity_condition(const NoisyNoonState& s, int m) {
    check_order(s, m);
    const double r2 = std::norm(s.coh[m]);
    const double s_pop = s.diag_a[m] + s.diag_b[m];
    return r2 > s_pop / (4.0 * m);
}

std::optional<PhaseInterval> supersensitivity_interval(const NoisyNoonState& s, int m) {
    check_order(s, m);
    if (!supersensitivity_condition(s, m)) return std::nullopt;
    if (m == 1) return std::nullopt; // condition is unsatisfiable at M = 1 anyway
    const double r2 = std::norm(s.coh[m]);
    const double s_pop = s.diag_a[m] + s.diag_b[m];
    const double omega2 = (s_pop - 4.0 * r2) / (4.0 * r2 * (m - 1));
    // The condition guarantees omega < 1; tiny negative numerators are
    // rounding of the pure-N00N case.
    if (omega2 > 1.0) throw NumericalError("supersensitivity_interval: omega > 1 despite condition");
    const double omega = std::sqrt(std::max(omega2, 0.0));
    const double period = M_PI / m;
    const double half_gap = std::asin(omega) / m;
    const double shift = std::arg(s.coh[m]) / m; // -arg(rho_{0M,M0})/M
    double lo = half_gap + shift;
    lo -= std::floor(lo / period) * period;
    return PhaseInterval{lo, lo + (period - 2.0 * half_gap)};
}

double constant_loss_error(double kappa, double theta, int m, double phi) {
    if (!(kappa > 0.0 && kappa <= 1.0) || !(theta >= 0.0 && theta <= 1.0))
        throw ValidationError("constant_loss_error: transmissions outside (0,1]");
    if (std::abs(kappa - theta) > 1e-12)
        throw ValidationError(
            "constant_loss_error: closed form is exact only for kappa = theta; "
            "use phase_error on the channel output for unequal losses");
    if (m < 1) throw ValidationError("constant_loss_error: M must be >= 1");
    const double att = std::pow(std::sqrt(kappa * theta), m);
    const double sn = std::sin(phi * m);
    if (sn == 0.0) throw PhaseInsensitiveError("constant_loss_error: sin(phi M) = 0");
    const double cs = std::cos(phi * m);
    return std::sqrt((1.0 - att * cs * cs) / (att * sn * sn)) / m;
}

OptimalOrder optimal_m(double kappa, double theta) {
    const double kt = kappa * theta;
    if (!(kt > 0.0 && kt < 1.0))
        throw ValidationError("optimal_m: requires 0 < kappa*theta < 1");
    auto dmin = [kt](int m) { return std::pow(kt, -m / 4.0) / m; };
    const double cont = -4.0 / std::log(kt);
    const int lo = std::max(1, static_cast<int>(std::floor(cont)));
    OptimalOrder best{lo, dmin(lo)};
    const int hi = lo + 1;
    if (dmin(hi) < best.dphi) best = {hi, dmin(hi)};
    return best;
}

double dephasing_threshold(int m) {
    if (m < 2) throw ValidationError("dephasing_threshold: M must be >= 2");
    return std::sqrt(std::log(static_cast<double>(m))) / m;
}

namespace {

template <bool Parallel>
PhaseErrorProfile profile_impl(const NoisyNoonState& s, int m, const std::vector<double>& grid) {
    check_order(s, m);
    PhaseErrorProfile p;
    p.m = m;
    p.phi = grid;
    p.dphi.assign(grid.size(), std::numeric_limits<double>::quiet_NaN());
    p.sql = 1.0 / std::sqrt(static_cast<double>(m));
    p.hl = 1.0 / m;
    const long n = static_cast<long>(grid.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (Parallel)
#endif
    for (long i = 0; i < n; ++i) {
        try {
            p.dphi[i] = phase_error(s, m, grid[i]);
        } catch (const PhaseInsensitiveError&) {
            // stays NaN; emitters skip the row
        }
    }
    if (std::abs(s.coh[m]) > 0.0) {
        const MinPhaseError mn = min_phase_error(s, m);
        p.dphi_min = mn.dphi;
        p.phi_star = mn.phi;
    } else {
        p.dphi_min = std::numeric_limits<double>::quiet_NaN();
        p.phi_star = std::numeric_limits<double>::quiet_NaN();
    }
    p.condition = supersensitivity_condition(s, m);
    p.interval = supersensitivity_interval(s, m);
    return p;
}

} // namespace

PhaseErrorProfile phase_error_profile(const NoisyNoonState& s, int m,
                                      const std::vector<double>& phi_grid) {
    return profile_impl<true>(s, m, phi_grid);
}

PhaseErrorProfile phase_error_profile_serial(const NoisyNoonState& s, int m,
                                             const std::vector<double>& phi_grid) {
    return profile_impl<false>(s, m, phi_grid);
}

} // namespace noon
