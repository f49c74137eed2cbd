#pragma once

#include <memory>
#include <mutex>
#include <optional>
#include <unordered_map>

#include "noon/channels.hpp"

namespace noon {

// Physical link parameters. All lengths in meters; cn2 in m^{-2/3}.
// aperture == nullopt means "a = W": the aperture radius is set equal to the
// beam-spot radius at the receiver after diffraction broadening.
struct BeamParams {
    double spot_radius = 0.98e-3;  // W0, at the source
    double wavelength = 810e-9;    // free calibration parameter, never assumed
    double cn2 = 1e-17;            // refractive-index structure constant
    double distance = 200.0;       // z
    std::optional<double> aperture; // a; nullopt => a = W
};

void validate(const BeamParams& p);

// Parameters of the log-negative Weibull transmission distribution.
struct WeibullParams {
    double t0 = 1.0;              // maximal transmission
    double zeta = 1.0;            // shape
    double scale = 1.0;           // S (meters)
    double sigma2 = 0.0;          // beam-center position variance (m^2)
    double spot_at_aperture = 0.0; // W (meters), kept for reporting
};

void validate(const WeibullParams& p);

// Beam-wandering transmission statistics derived from the link parameters.
// Throws NumericalError naming the failing expression on a non-finite
// intermediate.
WeibullParams derive_weibull(const BeamParams& p);

// Transmission density P(T); zero outside (0, t0]. Diverges (integrably) at
// T = t0 when zeta > 2; the pole value is returned as +inf.
double pdtc_density(const WeibullParams& wp, double t);

// E[T^n] by Gauss-Laguerre quadrature on the substitution
// u = (S^2/(2 sigma^2)) (2 ln(T0/T))^{2/zeta}, which maps P(T) dT to
// e^{-u} du and removes the endpoint singularity.
double pdtc_moment(const WeibullParams& wp, int n, double rel_tol = 1e-9);

// Inverse-CDF sample from a uniform deviate in (0,1).
double sample_transmission(const WeibullParams& wp, double u01);

// Moment provider for the fluctuating-loss channel, memoized per n.
// survival_term falls back to a direct tanh-sinh quadrature of
// E[T^2j (1-T^2)^(k-j)] above k = 50 where the alternating expansion loses
// precision.
class WeibullMomentProvider final : public MomentProvider {
public:
    explicit WeibullMomentProvider(const WeibullParams& wp);
    double moment(int n) const override;
    double survival_term(int j, int k) const override;
    const WeibullParams& params() const { return wp_; }

private:
    WeibullParams wp_;
    mutable std::mutex mu_;
    mutable std::unordered_map<int, double> memo_;
};

// Exponentially scaled modified Bessel functions e^{-x} I_n(x), n = 0, 1.
// Power series below x = 20, asymptotic expansion above.
double bessel_i0_scaled(double x);
double bessel_i1_scaled(double x);

} // namespace noon
