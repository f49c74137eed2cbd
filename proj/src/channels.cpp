#include "noon/channels.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <sstream>

#include "noon/errors.hpp"

namespace noon {

double binomial(int k, int j) {
    if (j < 0 || j > k) return 0.0;
    if (k <= 20) {
        double b = 1.0;
        for (int i = 0; i < j; ++i) b = b * (k - i) / (i + 1);
        return std::round(b);
    }
    return std::exp(std::lgamma(k + 1.0) - std::lgamma(j + 1.0) - std::lgamma(k - j + 1.0));
}

void validate(const ConstantLossSpec& spec) {
    if (!(spec.kappa >= 0.0 && spec.kappa <= 1.0))
        throw ValidationError("ConstantLossSpec: kappa outside [0,1]");
    if (!(spec.theta >= 0.0 && spec.theta <= 1.0))
        throw ValidationError("ConstantLossSpec: theta outside [0,1]");
}

DephasingSpec gaussian_dephasing_spec(double delta, double phi0) {
    if (delta < 0.0) throw ValidationError("gaussian_dephasing_spec: negative delta");
    return DephasingSpec{[delta, phi0](int n) {
        return std::polar(std::exp(-delta * delta * n * n / 2.0), phi0 * n);
    }};
}

double MomentProvider::survival_term(int j, int k) const {
    static std::atomic<bool> warned{false};
    if (k > 50 && !warned.exchange(true))
        std::cerr << "noon: alternating-sign moment expansion at k=" << k
                  << " may lose precision; prefer a provider with a direct quadrature\n";
    double sum = 0.0;
    for (int m = 0; m <= k - j; ++m) {
        const double term = binomial(k - j, m) * moment(2 * (j + m));
        sum += (m % 2 == 0) ? term : -term;
    }
    return sum;
}

void validate_moments(const MomentProvider& p, int probe_max) {
    const double mu0 = p.moment(0);
    if (std::abs(mu0 - 1.0) > 1e-9) throw ValidationError("moment provider: mu(0) != 1");
    double prev = mu0;
    for (int n = 1; n <= probe_max; ++n) {
        const double mu = p.moment(n);
        if (mu < -1e-12 || mu > 1.0 + 1e-12)
            throw ValidationError("moment provider: mu(n) outside [0,1]");
        if (mu > prev + 1e-9)
            throw ValidationError("moment provider: mu(n) not nonincreasing");
        prev = mu;
    }
}

DeltaMomentProvider::DeltaMomentProvider(double t0) : t0_(t0) {
    if (!(t0 >= 0.0 && t0 <= 1.0)) throw ValidationError("DeltaMomentProvider: t0 outside [0,1]");
}

double DeltaMomentProvider::moment(int n) const { return std::pow(t0_, n); }

TwoPointMomentProvider::TwoPointMomentProvider(double t_lo, double t_hi, double w_hi)
    : t_lo_(t_lo), t_hi_(t_hi), w_hi_(w_hi) {
    if (!(t_lo >= 0.0 && t_lo <= 1.0 && t_hi >= 0.0 && t_hi <= 1.0))
        throw ValidationError("TwoPointMomentProvider: transmission outside [0,1]");
    if (!(w_hi >= 0.0 && w_hi <= 1.0))
        throw ValidationError("TwoPointMomentProvider: weight outside [0,1]");
}

double TwoPointMomentProvider::moment(int n) const {
    return w_hi_ * std::pow(t_hi_, n) + (1.0 - w_hi_) * std::pow(t_lo_, n);
}

FluctuatingLossSpec counter_propagation(std::shared_ptr<const MomentProvider> arm1,
                                        std::shared_ptr<const MomentProvider> arm2) {
    if (!arm1 || !arm2) throw ValidationError("counter_propagation: null moment provider");
    validate_moments(*arm1);
    validate_moments(*arm2);
    return {Geometry::CounterPropagation, std::move(arm1), std::move(arm2)};
}

FluctuatingLossSpec co_propagation(std::shared_ptr<const MomentProvider> arm) {
    if (!arm) throw ValidationError("co_propagation: null moment provider");
    validate_moments(*arm);
    return {Geometry::CoPropagation, arm, arm};
}

NoisyNoonState apply_constant_loss(const NoisyNoonState& s, const ConstantLossSpec& spec) {
    validate(spec);
    NoisyNoonState out = s;
    const double amp = std::sqrt(spec.kappa * spec.theta);
    for (int n = 1; n <= s.cutoff; ++n) {
        out.coh[n] = std::pow(amp, n) * s.coh[n];
        out.diag_a[n] = 0.0;
        out.diag_b[n] = 0.0;
    }
    for (int k = 1; k <= s.cutoff; ++k) {
        for (int j = 0; j <= k; ++j) {
            const double wa = binomial(k, j) * std::pow(spec.kappa, j) * std::pow(1.0 - spec.kappa, k - j);
            const double wb = binomial(k, j) * std::pow(spec.theta, j) * std::pow(1.0 - spec.theta, k - j);
            if (j == 0) {
                out.vac += wa * s.diag_a[k] + wb * s.diag_b[k];
            } else {
                out.diag_a[j] += wa * s.diag_a[k];
                out.diag_b[j] += wb * s.diag_b[k];
            }
        }
    }
    return out;
}

NoisyNoonState apply_dephasing(const NoisyNoonState& s, const DephasingSpec& spec) {
    if (!spec.lambda_of_n) throw ValidationError("DephasingSpec: empty lambda map");
    NoisyNoonState out = s;
    for (int n = 1; n <= s.cutoff; ++n) {
        const complexd lam = spec.lambda_of_n(n);
        if (std::abs(lam) > 1.0 + 1e-12) {
            std::ostringstream os;
            os << "DephasingSpec: |lambda_" << n << "| = " << std::abs(lam) << " > 1";
            throw ValidationError(os.str());
        }
        out.coh[n] = lam * s.coh[n];
    }
    return out;
}

NoisyNoonState apply_fluctuating_loss(const NoisyNoonState& s, const FluctuatingLossSpec& spec) {
    if (!spec.arm1) throw ValidationError("FluctuatingLossSpec: null moment provider");
    const MomentProvider& p1 = *spec.arm1;
    const MomentProvider& p2 = (spec.geometry == Geometry::CoPropagation) ? *spec.arm1 : *spec.arm2;

    NoisyNoonState out = s;
    for (int n = 1; n <= s.cutoff; ++n) {
        // Counter-propagation: E[t1^N] E[t2^N]; co-propagation: E[t^2N].
        const double c = (spec.geometry == Geometry::CoPropagation)
                             ? p1.moment(2 * n)
                             : p1.moment(n) * p2.moment(n);
        out.coh[n] = c * s.coh[n];
        out.diag_a[n] = 0.0;
        out.diag_b[n] = 0.0;
    }
    for (int k = 1; k <= s.cutoff; ++k) {
        for (int j = 0; j <= k; ++j) {
            const double wa = binomial(k, j) * p1.survival_term(j, k);
            const double wb = binomial(k, j) * p2.survival_term(j, k);
            if (j == 0) {
                out.vac += wa * s.diag_a[k] + wb * s.diag_b[k];
            } else {
                out.diag_a[j] += wa * s.diag_a[k];
                out.diag_b[j] += wb * s.diag_b[k];
            }
        }
    }
    return out;
}

NoisyNoonState apply_phase_shift(const NoisyNoonState& s, double phi) {
    NoisyNoonState out = s;
    for (int n = 1; n <= s.cutoff; ++n)
        out.coh[n] = std::polar(1.0, -phi * n) * s.coh[n];
    return out;
}

} // namespace noon
