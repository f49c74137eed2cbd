#pragma once

#include <complex>
#include <functional>
#include <memory>

#include "noon/state.hpp"

namespace noon {

// Intensity transmissions of the two modes. Amplitude transmissions are the
// square roots.
struct ConstantLossSpec {
    double kappa = 1.0; // mode 1
    double theta = 1.0; // mode 2
};

void validate(const ConstantLossSpec& spec);

// Dephasing multiplies coherence N by lambda_N = int p(phi) e^{i phi N} dphi.
struct DephasingSpec {
    std::function<complexd(int)> lambda_of_n;
};

// Wrapped-Gaussian phase noise of width delta centred at phi0:
// lambda_N = e^{i phi0 N} e^{-delta^2 N^2 / 2}.
DephasingSpec gaussian_dephasing_spec(double delta, double phi0 = 0.0);

// Moments mu(n) = E[t^n] of the amplitude transmission t of one arm.
// Implementations may memoize internally; lookups must be safe to run
// concurrently.
class MomentProvider {
public:
    virtual ~MomentProvider() = default;
    virtual double moment(int n) const = 0;

    // E[kappa^j (1-kappa)^(k-j)] with kappa = t^2. The default expands the
    // binomial into an alternating sum over moment(2(j+m)); that expansion
    // degrades for k beyond ~50, so providers that know their density should
    // override with a direct quadrature (see WeibullMomentProvider).
    virtual double survival_term(int j, int k) const;
};

// Checks mu(0)=1, mu in [0,1] and monotone nonincreasing on a probe range.
void validate_moments(const MomentProvider& p, int probe_max = 16);

// Deterministic transmission t0: mu(n) = t0^n. Turns the fluctuating channel
// into the constant-loss channel with kappa = t0^2.
class DeltaMomentProvider final : public MomentProvider {
public:
    explicit DeltaMomentProvider(double t0);
    double moment(int n) const override;

private:
    double t0_;
};

// Two-point transmission distribution: t = t_hi with probability w_hi,
// t = t_lo otherwise.
class TwoPointMomentProvider final : public MomentProvider {
public:
    TwoPointMomentProvider(double t_lo, double t_hi, double w_hi);
    double moment(int n) const override;

private:
    double t_lo_, t_hi_, w_hi_;
};

enum class Geometry { CounterPropagation, CoPropagation };

struct FluctuatingLossSpec {
    Geometry geometry = Geometry::CounterPropagation;
    std::shared_ptr<const MomentProvider> arm1;
    std::shared_ptr<const MomentProvider> arm2; // unused for co-propagation
};

FluctuatingLossSpec counter_propagation(std::shared_ptr<const MomentProvider> arm1,
                                        std::shared_ptr<const MomentProvider> arm2);
FluctuatingLossSpec co_propagation(std::shared_ptr<const MomentProvider> arm);

// Channel maps. All preserve the trace and the noisy-N00N structure; the
// cutoff never grows (loss only lowers photon number).
NoisyNoonState apply_constant_loss(const NoisyNoonState& s, const ConstantLossSpec& spec);
NoisyNoonState apply_dephasing(const NoisyNoonState& s, const DephasingSpec& spec);
NoisyNoonState apply_fluctuating_loss(const NoisyNoonState& s, const FluctuatingLossSpec& spec);

// Interferometer phase phi on mode 2: coh[N] -> e^{-i phi N} coh[N]. With
// this sign the interference expectation is 2 Re(e^{i phi M} rho_{0M,M0}).
NoisyNoonState apply_phase_shift(const NoisyNoonState& s, double phi);

// Binomial coefficient in floating point; log-gamma based above k = 20.
double binomial(int k, int j);

} // namespace noon
