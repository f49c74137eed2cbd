// Acceptance suite: one pass/fail line per criterion, tolerances pinned
// below. Exit code is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "noon/atmosphere.hpp"
#include "noon/channels.hpp"
#include "noon/entanglement.hpp"
#include "noon/errors.hpp"
#include "noon/metrology.hpp"
#include "noon/quadrature.hpp"
#include "noon/state.hpp"
#include "noon/sweep.hpp"
#include "oracles.hpp"

using namespace noon;

namespace {

constexpr double kTolHeisenberg = 1e-12;   // criterion 1
constexpr double kTolTouch = 1e-6;         // criterion 2, p = 0.5 tangency
constexpr double kTolThreshold = 1e-6;     // criterion 4, delta threshold
constexpr double kTolEq21 = 1e-12;         // criterion 5, closed-form tau
constexpr double kTolOracle = 1e-10;       // criterion 6, PT eigensolver
constexpr double kTolChannel = 1e-12;      // criterion 7, channel identities
constexpr double kTolNorm = 1e-6;          // criterion 8, PDTC normalization
constexpr double kMcSigmas = 4.0;          // criteria 7 and 8, MC agreement
constexpr double kCalTarget = 0.843;       // criterion 8, mean transmission
constexpr double kCalWindow = 0.005;

double now_s() {
    using clock = std::chrono::steady_clock;
    static const auto t0 = clock::now();
    return std::chrono::duration<double>(clock::now() - t0).count();
}

struct Timer {
    double start = now_s();
    double elapsed() const { return now_s() - start; }
};

bool criterion1() {
    Timer t;
    bool ok = true;
    for (int m = 1; m <= 10; ++m) {
        const auto s = pure_noon(m);
        for (int k = 0; k < 100; ++k) {
            const double phi = M_PI / m * (k + 0.5) / 100.0; // interior of one period
            const double err = std::abs(phase_error(s, m, phi) - 1.0 / m);
            if (err > kTolHeisenberg) {
                std::printf("    M=%d phi=%g deviates by %g\n", m, phi, err);
                ok = false;
            }
        }
    }
    const double dt = t.elapsed();
    if (dt >= 1.0) {
        std::printf("    runtime %.2fs exceeds 1s\n", dt);
        ok = false;
    }
    return ok;
}

bool criterion2() {
    bool ok = true;
    for (int m = 2; m <= 10; ++m) {
        const double sql = 1.0 / std::sqrt(static_cast<double>(m));
        for (int ip = 1; ip <= 1000; ++ip) {
            // midpoint grid keeps p away from the exact 1/M boundaries,
            // where the strict inequality would hinge on rounding
            const double p = (ip - 0.5) / 1000.0;
            const auto s = vacuum_mix(p, m);
            const bool cond = supersensitivity_condition(s, m);
            const bool analytic = p > 1.0 / m;
            // grid scan of the error curve over one period
            bool scan_below = false;
            for (int g = 1; g < 200; ++g) {
                const double phi = M_PI / m * g / 200.0;
                try {
                    if (phase_error(s, m, phi) < sql) {
                        scan_below = true;
                        break;
                    }
                } catch (const PhaseInsensitiveError&) {
                }
            }
            if (cond != analytic || cond != scan_below) {
                // the scan can miss a grazing minimum within one grid cell
                // of the threshold; re-check against the closed form
                const bool closed_below = min_phase_error(s, m).dphi < sql;
                if (cond != analytic || cond != closed_below) {
                    std::printf("    M=%d p=%g: condition=%d analytic=%d scan=%d\n", m, p, cond,
                                analytic, scan_below);
                    ok = false;
                }
            }
        }
    }
    // fig1 dataset checks at M = 2
    const double sql2 = 1.0 / std::sqrt(2.0);
    const double min04 = min_phase_error(vacuum_mix(0.4, 2), 2).dphi;
    const double min05 = min_phase_error(vacuum_mix(0.5, 2), 2).dphi;
    const double min09 = min_phase_error(vacuum_mix(0.9, 2), 2).dphi;
    if (!(min09 < sql2)) {
        std::printf("    p=0.9 curve does not dip below SQL\n");
        ok = false;
    }
    if (!(min04 > sql2)) {
        std::printf("    p=0.4 curve dips below SQL\n");
        ok = false;
    }
    if (std::abs(min05 - sql2) > kTolTouch) {
        std::printf("    p=0.5 minimum misses the SQL by %g\n", min05 - sql2);
        ok = false;
    }
    return ok;
}

bool criterion3() {
    Timer t;
    bool ok = true;
    const double kappa = 0.95;
    const auto best = optimal_m(kappa, kappa);
    if (best.m != 39) {
        std::printf("    optimal_M = %d, expected 39\n", best.m);
        ok = false;
    }
    auto dmin = [&](int m) {
        const auto lossy = apply_constant_loss(pure_noon(m), {kappa, kappa});
        return min_phase_error(lossy, m).dphi;
    };
    auto sql = [](int m) { return 1.0 / std::sqrt(static_cast<double>(m)); };
    // M = 1 sits above the SQL trivially; the curve dips below it and rises
    // back through 1/sqrt(M) once loss accumulates. Locate that upward
    // crossing.
    int first_above = 0;
    for (int m = 2; m <= 120 && !first_above; ++m)
        if (dmin(m - 1) < sql(m - 1) && dmin(m) > sql(m)) first_above = m;
    // "exceeds the standard quantum limit at M=88": the first order whose
    // minimal error sits back above 1/sqrt(M) is 88 (the crossing lies in
    // the open interval (87, 88))
    if (first_above != 88) {
        std::printf("    first M above SQL is %d, expected 88\n", first_above);
        ok = false;
    }
    if (!(dmin(87) < sql(87) && dmin(88) > sql(88))) {
        std::printf("    bracket check failed: d(87)=%g sql=%g, d(88)=%g sql=%g\n", dmin(87),
                    sql(87), dmin(88), sql(88));
        ok = false;
    }
    const double dt = t.elapsed();
    if (dt >= 1.0) {
        std::printf("    runtime %.2fs exceeds 1s\n", dt);
        ok = false;
    }
    return ok;
}

bool criterion4() {
    bool ok = true;
    const int m = 3;
    const double sql = 1.0 / std::sqrt(3.0);
    auto dmin = [&](double delta) {
        const auto s = apply_dephasing(pure_noon(m), gaussian_dephasing_spec(delta));
        return min_phase_error(s, m).dphi;
    };
    if (!(dmin(0.1 * M_PI) < sql)) {
        std::printf("    delta = 0.1*pi is not sub-SQL: %g vs %g\n", dmin(0.1 * M_PI), sql);
        ok = false;
    }
    // numeric threshold by bisection on dmin(delta) - sql
    double lo = 0.0, hi = 0.6;
    for (int it = 0; it < 80; ++it) {
        const double mid = 0.5 * (lo + hi);
        (dmin(mid) < sql ? lo : hi) = mid;
    }
    const double numeric = 0.5 * (lo + hi);
    const double closed = dephasing_threshold(m); // sqrt(ln 3)/3
    if (std::abs(numeric - closed) > kTolThreshold) {
        std::printf("    threshold: numeric %0.9f vs closed form %0.9f\n", numeric, closed);
        ok = false;
    }
    std::printf("    note: sub-SQL threshold is sqrt(ln M)/M = %.6f; the often-quoted "
                "ln(M)/M = %.6f does not solve |lambda|^2 = 1/M (flagged discrepancy)\n",
                closed, std::log(3.0) / 3.0);
    return ok;
}

bool criterion5() {
    bool ok = true;
    const int n = 4;
    for (int ip = 0; ip <= 1000; ++ip) {
        const double p = ip / 1000.0;
        const auto s = vacuum_mix(p, n);
        const double tau = min_pt_eigenvalue(s).tau;
        const double closed = ((1.0 - p) - std::sqrt((1.0 - p) * (1.0 - p) + p * p)) / 2.0;
        if (std::abs(tau - closed) > kTolEq21) {
            std::printf("    p=%g: tau=%g closed=%g\n", p, tau, closed);
            ok = false;
        }
        if (p > 1e-6 && !(tau < 0.0)) {
            std::printf("    p=%g: tau not negative\n", p);
            ok = false;
        }
    }
    const double eps = 1e-6;
    if (supersensitivity_condition(vacuum_mix(0.25 - eps, n), n) ||
        supersensitivity_condition(vacuum_mix(0.25, n), n) ||
        !supersensitivity_condition(vacuum_mix(0.25 + eps, n), n)) {
        std::printf("    N=4 supersensitivity boundary at p=0.25 misplaced\n");
        ok = false;
    }
    return ok;
}

bool criterion6() {
    Timer t;
    bool ok = true;
    std::mt19937_64 rng(606);
    for (int rep = 0; rep < 100; ++rep) {
        const auto s = oracles::random_state(rng, 8);
        const double fast = min_pt_eigenvalue(s).tau;
        const int d = s.cutoff + 1;
        const double dense = min_eigenvalue(partial_transpose(to_dense_product(s), d, d));
        if (std::abs(fast - dense) > kTolOracle) {
            std::printf("    rep %d: closed %g vs dense %g\n", rep, fast, dense);
            ok = false;
        }
    }
    const double dt = t.elapsed();
    if (dt >= 10.0) {
        std::printf("    runtime %.2fs exceeds 10s\n", dt);
        ok = false;
    }
    return ok;
}

bool criterion7() {
    bool ok = true;
    // (a) closed-form loss error vs channel output
    for (int m : {1, 2, 5, 8}) {
        for (double kappa : {0.4, 0.8, 0.95}) {
            const auto out = apply_constant_loss(pure_noon(m), {kappa, kappa});
            for (double phi : {0.17, 0.6, 1.1}) {
                const double a = constant_loss_error(kappa, kappa, m, phi);
                const double b = phase_error(out, m, phi);
                if (std::abs(a - b) > kTolChannel) {
                    std::printf("    closed vs channel: M=%d kappa=%g phi=%g: %g vs %g\n", m,
                                kappa, phi, a, b);
                    ok = false;
                }
            }
        }
    }
    // (b) delta moment provider vs constant loss, entrywise
    {
        const double t0 = 0.85;
        auto p = std::make_shared<DeltaMomentProvider>(t0);
        const auto s = mixed_noon({0.05, 0.15, 0.35, 0.45});
        const auto fluct = apply_fluctuating_loss(s, counter_propagation(p, p));
        const auto constant = apply_constant_loss(s, {t0 * t0, t0 * t0});
        double max_diff = std::abs(fluct.vac - constant.vac);
        for (int i = 1; i <= s.cutoff; ++i) {
            max_diff = std::max(max_diff, std::abs(fluct.diag_a[i] - constant.diag_a[i]));
            max_diff = std::max(max_diff, std::abs(fluct.diag_b[i] - constant.diag_b[i]));
            max_diff = std::max(max_diff, std::abs(fluct.coh[i] - constant.coh[i]));
        }
        if (max_diff > kTolChannel) {
            std::printf("    delta provider vs constant loss: max entry diff %g\n", max_diff);
            ok = false;
        }
    }
    // (c) Monte-Carlo channel average vs moment-based channel
    {
        WeibullParams wp;
        wp.t0 = 0.9;
        wp.zeta = 2.0;
        wp.scale = 0.05;
        wp.sigma2 = 5e-4; // strong fluctuation: meaningful spread
        wp.spot_at_aperture = 0.05;
        auto provider = std::make_shared<WeibullMomentProvider>(wp);
        const auto s = pure_noon(2);
        const auto expect = apply_fluctuating_loss(s, counter_propagation(provider, provider));

        const int draws = 1000000;
        std::mt19937_64 rng(707);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        // accumulate per-entry mean and variance over the draws; the
        // coherence stays real for a pure N00N input
        const int n_entries = 2 * s.cutoff + 2; // vac, diag_a[i], diag_b[i], coh[N]
        std::vector<double> sum(n_entries, 0.0), sum2(n_entries, 0.0);
        for (int d = 0; d < draws; ++d) {
            const double t1 = sample_transmission(wp, u(rng));
            const double t2 = sample_transmission(wp, u(rng));
            const auto one = apply_constant_loss(s, {t1 * t1, t2 * t2});
            int e = 0;
            auto acc = [&](double v) {
                sum[e] += v;
                sum2[e] += v * v;
                ++e;
            };
            acc(one.vac);
            for (int i = 1; i <= s.cutoff; ++i) acc(one.diag_a[i]);
            for (int i = 1; i <= s.cutoff; ++i) acc(one.diag_b[i]);
            acc(one.coh[s.cutoff].real());
        }
        std::vector<double> target;
        target.push_back(expect.vac);
        for (int i = 1; i <= s.cutoff; ++i) target.push_back(expect.diag_a[i]);
        for (int i = 1; i <= s.cutoff; ++i) target.push_back(expect.diag_b[i]);
        target.push_back(expect.coh[s.cutoff].real());
        for (int e = 0; e < n_entries; ++e) {
            const double mean = sum[e] / draws;
            const double var = std::max(sum2[e] / draws - mean * mean, 0.0);
            const double se = std::sqrt(var / draws);
            if (std::abs(mean - target[e]) > kMcSigmas * std::max(se, 1e-15)) {
                std::printf("    MC entry %d: mean %.8f vs moments %.8f (se %.2g)\n", e, mean,
                            target[e], se);
                ok = false;
            }
        }
    }
    return ok;
}

bool criterion8() {
    bool ok = true;
    const WeibullParams wp = derive_weibull(BeamParams{}); // W0=0.98mm, Cn2=1e-17, z=200, a=W
    const double norm =
        tanh_sinh([&](double t) { return pdtc_density(wp, t); }, 0.0, wp.t0, 1e-9);
    if (std::abs(norm - 1.0) > kTolNorm) {
        std::printf("    PDTC normalization %.8f\n", norm);
        ok = false;
    }
    // quadrature moments vs Monte-Carlo
    {
        std::mt19937_64 rng(808);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        const int draws = 1000000;
        const int orders[] = {1, 2, 4, 8};
        // the default link fluctuates at the 1e-7 level, so accumulate
        // deviations from t0^n to keep the variance free of cancellation
        double shift[4], sum[4] = {}, sum2[4] = {};
        for (int k = 0; k < 4; ++k) shift[k] = std::pow(wp.t0, orders[k]);
        for (int d = 0; d < draws; ++d) {
            const double t = sample_transmission(wp, u(rng));
            for (int k = 0; k < 4; ++k) {
                const double v = std::pow(t, orders[k]) - shift[k];
                sum[k] += v;
                sum2[k] += v * v;
            }
        }
        for (int k = 0; k < 4; ++k) {
            const double dev = sum[k] / draws;
            const double mean = shift[k] + dev;
            const double var = std::max(sum2[k] / draws - dev * dev, 0.0);
            const double se = std::sqrt(var / draws);
            const double mu = pdtc_moment(wp, orders[k]);
            if (std::abs(mean - mu) > kMcSigmas * std::max(se, 1e-15)) {
                std::printf("    moment n=%d: MC %.8f vs quadrature %.8f (se %.2g)\n", orders[k],
                            mean, mu, se);
                ok = false;
            }
        }
    }
    // wavelength calibration scan for mean transmission 0.843 +- 0.005
    {
        double best_lambda = 0.0, best_mean = 1e9;
        for (int nm = 500; nm <= 1600; ++nm) {
            BeamParams b;
            b.wavelength = nm * 1e-9;
            const double mean = pdtc_moment(derive_weibull(b), 1);
            if (std::abs(mean - kCalTarget) < std::abs(best_mean - kCalTarget)) {
                best_mean = mean;
                best_lambda = b.wavelength;
            }
        }
        std::printf("    calibrated lambda = %g nm with mean transmission %.6f "
                    "(target %.3f +- %.3f)\n",
                    best_lambda * 1e9, best_mean, kCalTarget, kCalWindow);
        if (std::abs(best_mean - kCalTarget) > kCalWindow) {
            std::printf("    no wavelength in [500,1600] nm reaches the target: with a = W the "
                        "maximal transmission is pinned at sqrt(1-e^-2) = 0.9299 and beam "
                        "wandering is negligible at z = 200 m, so E[T] = 0.9299 for every "
                        "wavelength (closest E[T^2] = %.6f)\n",
                        pdtc_moment(derive_weibull(BeamParams{}), 2));
            ok = false;
        }
    }
    return ok;
}

bool criterion9() {
    bool ok = true;
    const auto st = pure_noon(2);
    std::vector<double> taus_counter, taus_co;
    for (int i = 0; i < 20; ++i) {
        const double d = 100.0 + (4000.0 - 100.0) * i / 19.0;
        BeamParams arm;
        arm.distance = d / 2.0;
        auto half = std::make_shared<WeibullMomentProvider>(derive_weibull(arm));
        arm.distance = d;
        auto full = std::make_shared<WeibullMomentProvider>(derive_weibull(arm));
        const double tc =
            min_pt_eigenvalue(apply_fluctuating_loss(st, counter_propagation(half, half))).tau;
        const double to =
            min_pt_eigenvalue(apply_fluctuating_loss(st, co_propagation(full))).tau;
        if (!(tc < 0.0 && to < 0.0)) {
            std::printf("    d=%g: tau not negative (counter %g, co %g)\n", d, tc, to);
            ok = false;
        }
        // Jensen at equal arm length d: E[t^2N] >= E[t^N]^2
        const double mu_n = full->moment(2);
        const double mu_2n = full->moment(4);
        if (!(mu_2n >= mu_n * mu_n - 1e-15)) {
            std::printf("    d=%g: Jensen violated: mu(2N)=%g < mu(N)^2=%g\n", d, mu_2n,
                        mu_n * mu_n);
            ok = false;
        }
        // counter-propagation with arms d/2 retains more entanglement at
        // equal total separation d
        if (!(std::abs(tc) > std::abs(to))) {
            std::printf("    d=%g: |tau_counter|=%g <= |tau_co|=%g\n", d, std::abs(tc),
                        std::abs(to));
            ok = false;
        }
        taus_counter.push_back(tc);
        taus_co.push_back(to);
    }
    for (size_t i = 1; i < taus_counter.size(); ++i) {
        if (!(std::abs(taus_counter[i]) < std::abs(taus_counter[i - 1])) ||
            !(std::abs(taus_co[i]) < std::abs(taus_co[i - 1]))) {
            std::printf("    |tau| not strictly decreasing at step %zu\n", i);
            ok = false;
        }
    }
    return ok;
}

bool criterion10() {
    Timer t;
    bool ok = true;
    for (auto scen : {Scenario::MixedPhaseError, Scenario::LossyMinError,
                      Scenario::DephasingMinError, Scenario::VacuumMixCombined,
                      Scenario::TurbulenceTau}) {
        const auto c = preset_config(scen);
        const std::string a = to_csv(run_scenario(c));
        const std::string b = to_csv(run_scenario(c));
        if (a != b) {
            std::printf("    %s: CSV differs between runs\n", scenario_name(scen).c_str());
            ok = false;
        }
        if (a.empty() || a.find('\n') == a.size() - 1) {
            std::printf("    %s: empty dataset\n", scenario_name(scen).c_str());
            ok = false;
        }
    }
    const double dt = t.elapsed();
    if (dt >= 60.0) {
        std::printf("    runtime %.1fs exceeds 60s\n", dt);
        ok = false;
    }
    std::printf("    all presets twice in %.2fs\n", dt);
    return ok;
}

} // namespace

int main() {
    struct Entry {
        const char* name;
        bool (*fn)();
    };
    const Entry entries[] = {
        {"criterion 1: pure-N00N Heisenberg baseline", criterion1},
        {"criterion 2: mixture supersensitivity threshold p > 1/M", criterion2},
        {"criterion 3: constant loss, optimal M = 39 and SQL crossing at M = 88", criterion3},
        {"criterion 4: dephasing threshold sqrt(ln M)/M", criterion4},
        {"criterion 5: vacuum mixture tau closed form and p = 0.25 boundary", criterion5},
        {"criterion 6: PT closed form vs dense Jacobi oracle", criterion6},
        {"criterion 7: channel consistency (closed form, delta provider, MC)", criterion7},
        {"criterion 8: atmosphere numerics and wavelength calibration", criterion8},
        {"criterion 9: turbulence entanglement properties", criterion9},
        {"criterion 10: deterministic presets", criterion10},
    };
    int failures = 0;
    for (const auto& e : entries) {
        const bool ok = e.fn();
        std::printf("[%s] %s\n", ok ? "PASS" : "FAIL", e.name);
        if (!ok) ++failures;
    }
    std::printf("%d/10 criteria passed\n", 10 - failures);
    return failures;
}
