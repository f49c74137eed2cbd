#pragma once

#include <functional>
#include <vector>

namespace noon {

// Nodes and weights for int_0^inf e^{-u} f(u) du ~ sum w_i f(x_i).
struct GaussLaguerreRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

// Cached per order; safe for concurrent lookups.
const GaussLaguerreRule& gauss_laguerre(int order);

// Doubles the order over `orders` until the relative change drops below
// rel_tol. Throws NumericalError carrying the last two estimates otherwise.
double integrate_exp_weighted(const std::function<double(double)>& f, double rel_tol = 1e-9,
                              const std::vector<int>& orders = {16, 32, 64, 128, 256});

// Double-exponential rule on [a,b]; tolerant of integrable endpoint
// singularities. Used by the density-normalization oracle and the
// direct-quadrature fallback of the binomial moment expansion.
double tanh_sinh(const std::function<double(double)>& f, double a, double b, double tol = 1e-10);

} // namespace noon
