#include "noon/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <sstream>

#include "noon/errors.hpp"

namespace noon {

namespace {

// Laguerre recurrence scaled by e^{-x/2} so values stay representable at
// high order (unscaled L_n overflows near the largest roots for n >~ 200).
// Returns scaled L_n and L_{n-1} at x.
void laguerre_scaled(int n, double x, double& ln, double& lnm1) {
    double p0 = std::exp(-x / 2.0);
    double p1 = (1.0 - x) * p0;
    if (n == 0) {
        ln = p0;
        lnm1 = 0.0;
        return;
    }
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0 - x) * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    ln = p1;
    lnm1 = p0;
}

GaussLaguerreRule build_rule(int n) {
    GaussLaguerreRule rule;
    rule.nodes.resize(n);
    rule.weights.resize(n);
    double z = 0.0;
    for (int i = 0; i < n; ++i) {
        // Stroud/Secrest starting guesses.
        if (i == 0) {
            z = 3.0 / (1.0 + 2.4 * n);
        } else if (i == 1) {
            z += 15.0 / (1.0 + 2.5 * n);
        } else {
            const double ai = i - 1;
            z += ((1.0 + 2.55 * ai) / (1.9 * ai)) * (z - rule.nodes[i - 2]);
        }
        double ln = 0.0, lnm1 = 0.0;
        bool ok = false;
        for (int it = 0; it < 100; ++it) {
            laguerre_scaled(n, z, ln, lnm1);
            // L_n'(x) = n (L_n - L_{n-1}) / x; the e^{-x/2} scale cancels in
            // the Newton ratio.
            const double deriv = n * (ln - lnm1) / z;
            const double step = ln / deriv;
            z -= step;
            if (std::abs(step) <= 1e-14 * std::max(1.0, z)) {
                ok = true;
                break;
            }
        }
        if (!ok) throw NumericalError("gauss_laguerre: Newton iteration stalled");
        rule.nodes[i] = z;
        // w_i = x_i / ((n+1)^2 L_{n+1}(x_i)^2). With the scaled recurrence
        // L^2 = Lscaled^2 e^{x}, so an explicit e^{-x} remains; far-tail
        // weights underflow to zero, which is their true magnitude.
        double lnp1, lntmp;
        laguerre_scaled(n + 1, z, lnp1, lntmp);
        rule.weights[i] = z * std::exp(-z) / ((n + 1.0) * (n + 1.0) * lnp1 * lnp1);
    }
    return rule;
}

} // namespace

const GaussLaguerreRule& gauss_laguerre(int order) {
    if (order < 1) throw NumericalError("gauss_laguerre: order < 1");
    static std::map<int, GaussLaguerreRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
    return it->second;
}

double integrate_exp_weighted(const std::function<double(double)>& f, double rel_tol,
                              const std::vector<int>& orders) {
    double prev = 0.0;
    bool have_prev = false;
    for (int order : orders) {
        const GaussLaguerreRule& rule = gauss_laguerre(order);
        double sum = 0.0;
        for (int i = 0; i < order; ++i) sum += rule.weights[i] * f(rule.nodes[i]);
        if (!std::isfinite(sum)) throw NumericalError("integrate_exp_weighted: non-finite estimate");
        if (have_prev) {
            const double denom = std::max(std::abs(sum), 1e-300);
            if (std::abs(sum - prev) / denom < rel_tol) return sum;
        }
        prev = sum;
        have_prev = true;
    }
    std::ostringstream os;
    os << "integrate_exp_weighted: no convergence; last estimates " << prev << " at order "
       << orders.back() / 2 << " and order " << orders.back();
    throw NumericalError(os.str());
}

double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol) {
    const double c = (a + b) / 2.0;
    const double r = (b - a) / 2.0;
    const double tmax = 4.0;
    auto eval = [&](double t) {
        const double s = std::sinh(t) * (M_PI / 2.0);
        const double x = c + r * std::tanh(s);
        if (x <= a || x >= b) return 0.0; // node collapsed onto an endpoint
        const double w = r * (M_PI / 2.0) * std::cosh(t) / (std::cosh(s) * std::cosh(s));
        const double v = f(x) * w;
        return std::isfinite(v) ? v : 0.0;
    };
    double h = 1.0;
    double sum = h * eval(0.0);
    for (double t = h; t <= tmax; t += h) sum += h * (eval(t) + eval(-t));
    for (int level = 1; level <= 14; ++level) {
        h /= 2.0;
        double add = 0.0;
        for (double t = h; t <= tmax; t += 2.0 * h) add += eval(t) + eval(-t);
        const double next = sum / 2.0 + h * add;
        if (level >= 4 && std::abs(next - sum) <= tol * std::max(1.0, std::abs(next))) return next;
        sum = next;
    }
    return sum;
}

} // namespace noon
