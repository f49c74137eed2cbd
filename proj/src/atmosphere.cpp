#include "noon/atmosphere.hpp"

#include <cmath>
#include <sstream>

#include "noon/errors.hpp"
#include "noon/quadrature.hpp"

namespace noon {

double bessel_i0_scaled(double x) {
    x = std::abs(x);
    if (x < 20.0) {
        // I0(x) = sum (x/2)^{2k} / (k!)^2
        double term = 1.0, sum = 1.0;
        const double q = x * x / 4.0;
        for (int k = 1; k < 120; ++k) {
            term *= q / (static_cast<double>(k) * k);
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        return sum * std::exp(-x);
    }
    // e^{-x} I0(x) ~ (2 pi x)^{-1/2} sum_k prod_{j<=k} (2j-1)^2 / (k! (8x)^k)
    double term = 1.0, sum = 1.0;
    for (int k = 1; k <= 18; ++k) {
        const double odd = 2.0 * k - 1.0;
        term *= odd * odd / (k * 8.0 * x);
        sum += term;
        if (term < 1e-16 * sum) break;
    }
    return sum / std::sqrt(2.0 * M_PI * x);
}

double bessel_i1_scaled(double x) {
    const double ax = std::abs(x);
    double result;
    if (ax < 20.0) {
        // I1(x) = (x/2) sum (x/2)^{2k} / (k! (k+1)!)
        double term = 1.0, sum = 1.0;
        const double q = ax * ax / 4.0;
        for (int k = 1; k < 120; ++k) {
            term *= q / (static_cast<double>(k) * (k + 1));
            sum += term;
            if (term < 1e-17 * sum) break;
        }
        result = (ax / 2.0) * sum * std::exp(-ax);
    } else {
        // mu = 4 for nu = 1: alternating product (mu-1)(mu-9)... / (k! (8x)^k)
        double term = 1.0, sum = 1.0;
        for (int k = 1; k <= 18; ++k) {
            const double odd = 2.0 * k - 1.0;
            term *= -(4.0 - odd * odd) / (k * 8.0 * ax);
            sum += term;
            if (std::abs(term) < 1e-16 * std::abs(sum)) break;
        }
        result = sum / std::sqrt(2.0 * M_PI * ax);
    }
    return x < 0.0 ? -result : result;
}

void validate(const BeamParams& p) {
    if (!(p.spot_radius > 0.0)) throw ValidationError("BeamParams: spot_radius must be positive");
    if (!(p.wavelength > 0.0)) throw ValidationError("BeamParams: wavelength must be positive");
    if (!(p.cn2 > 0.0)) throw ValidationError("BeamParams: cn2 must be positive");
    if (!(p.distance > 0.0)) throw ValidationError("BeamParams: distance must be positive");
    if (p.aperture && !(*p.aperture > 0.0))
        throw ValidationError("BeamParams: aperture must be positive");
}

void validate(const WeibullParams& p) {
    if (!(p.t0 > 0.0 && p.t0 <= 1.0)) throw ValidationError("WeibullParams: t0 outside (0,1]");
    if (!(p.zeta > 0.0)) throw ValidationError("WeibullParams: zeta must be positive");
    if (!(p.scale > 0.0)) throw ValidationError("WeibullParams: scale must be positive");
    if (!(p.sigma2 > 0.0)) throw ValidationError("WeibullParams: sigma2 must be positive");
}

WeibullParams derive_weibull(const BeamParams& p) {
    validate(p);
    WeibullParams wp;
    const double w0 = p.spot_radius;
    const double diff = p.distance * p.wavelength / (M_PI * w0 * w0);
    wp.spot_at_aperture = w0 * std::sqrt(1.0 + diff * diff);
    const double a = p.aperture ? *p.aperture : wp.spot_at_aperture;
    const double h = a * a / (wp.spot_at_aperture * wp.spot_at_aperture);

    const double t0_sq = 1.0 - std::exp(-2.0 * h);
    wp.t0 = std::sqrt(t0_sq);

    const double x = 4.0 * h;
    const double ei0 = bessel_i0_scaled(x);
    const double ei1 = bessel_i1_scaled(x);
    const double denom = 1.0 - ei0;
    if (!(denom > 0.0))
        throw NumericalError("derive_weibull: 1 - exp(-4a^2/W^2) I0(4a^2/W^2) underflowed");
    const double log_arg = 2.0 * t0_sq / denom;
    const double big_log = std::log(log_arg);
    if (!(big_log > 0.0) || !std::isfinite(big_log))
        throw NumericalError("derive_weibull: ln(2 T0^2 / (1 - exp(-4a^2/W^2) I0)) not positive");

    wp.zeta = 8.0 * h * ei1 / denom / big_log;
    if (!std::isfinite(wp.zeta) || !(wp.zeta > 0.0))
        throw NumericalError("derive_weibull: shape parameter zeta is not finite positive");
    wp.scale = a * std::pow(big_log, -1.0 / wp.zeta);
    if (!std::isfinite(wp.scale))
        throw NumericalError("derive_weibull: scale parameter S is not finite");
    wp.sigma2 = 1.919 * p.cn2 * p.distance * p.distance * p.distance * std::pow(2.0 * w0, -1.0 / 3.0);
    validate(wp);
    return wp;
}

double pdtc_density(const WeibullParams& wp, double t) {
    if (t <= 0.0 || t > wp.t0) return 0.0;
    const double y = 2.0 * std::log(wp.t0 / t);
    const double s2 = wp.scale * wp.scale;
    const double pre = 2.0 * s2 / (wp.sigma2 * wp.zeta * t);
    return pre * std::pow(y, 2.0 / wp.zeta - 1.0) *
           std::exp(-s2 / (2.0 * wp.sigma2) * std::pow(y, 2.0 / wp.zeta));
}

double pdtc_moment(const WeibullParams& wp, int n, double rel_tol) {
    if (n < 0) throw ValidationError("pdtc_moment: negative order");
    if (n == 0) return 1.0;
    const double t0n = std::pow(wp.t0, n);
    const double c = 2.0 * wp.sigma2 / (wp.scale * wp.scale);
    const double half_zeta = wp.zeta / 2.0;
    return integrate_exp_weighted(
        [&](double u) { return t0n * std::exp(-(n / 2.0) * std::pow(c * u, half_zeta)); }, rel_tol);
}

double sample_transmission(const WeibullParams& wp, double u01) {
    if (!(u01 > 0.0 && u01 < 1.0)) throw ValidationError("sample_transmission: deviate outside (0,1)");
    const double e = -std::log(u01);
    const double y = std::pow(2.0 * wp.sigma2 * e / (wp.scale * wp.scale), wp.zeta / 2.0);
    return wp.t0 * std::exp(-y / 2.0);
}

WeibullMomentProvider::WeibullMomentProvider(const WeibullParams& wp) : wp_(wp) {
    validate(wp_);
}

double WeibullMomentProvider::moment(int n) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        auto it = memo_.find(n);
        if (it != memo_.end()) return it->second;
    }
    const double v = pdtc_moment(wp_, n);
    std::lock_guard<std::mutex> lock(mu_);
    memo_.emplace(n, v);
    return v;
}

double WeibullMomentProvider::survival_term(int j, int k) const {
    if (k <= 50) return MomentProvider::survival_term(j, k);
    // E[T^2j (1-T^2)^(k-j)] on the same e^{-u} substitution as pdtc_moment.
    const double c = 2.0 * wp_.sigma2 / (wp_.scale * wp_.scale);
    const double half_zeta = wp_.zeta / 2.0;
    return integrate_exp_weighted([&](double u) {
        const double t = wp_.t0 * std::exp(-std::pow(c * u, half_zeta) / 2.0);
        return std::pow(t, 2.0 * j) * std::pow(1.0 - t * t, k - j);
    });
}

} // namespace noon
