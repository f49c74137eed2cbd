#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "noon/channels.hpp"
#include "noon/entanglement.hpp"
#include "noon/errors.hpp"
#include "oracles.hpp"

using namespace noon;

TEST_CASE("partial transpose is a trace-preserving involution") {
    std::mt19937_64 rng(51);
    const auto s = oracles::random_state(rng, 4);
    const auto rho = to_dense_product(s);
    const int d = s.cutoff + 1;
    const auto pt = partial_transpose(rho, d, d);
    CHECK(pt.is_hermitian(1e-14));
    CHECK(pt.trace() == doctest::Approx(rho.trace()).epsilon(1e-14));
    const auto back = partial_transpose(pt, d, d);
    for (int r = 0; r < rho.dim(); ++r)
        for (int c = 0; c < rho.dim(); ++c) CHECK(std::abs(back(r, c) - rho(r, c)) == 0.0);
    CHECK_THROWS_AS(partial_transpose(rho, d, d + 1), ValidationError);
}

TEST_CASE("known 2x2 (x) 2x2 case: maximally entangled Bell state") {
    // |psi> = (|00> + |11>)/sqrt(2); PT minimum is -1/2
    DenseHermitian rho(4);
    rho(0, 0) = rho(3, 3) = rho(0, 3) = rho(3, 0) = 0.5;
    const auto pt = partial_transpose(rho, 2, 2);
    CHECK(min_eigenvalue(pt) == doctest::Approx(-0.5).epsilon(1e-12));
    // the state itself is PSD with minimal eigenvalue 0
    CHECK(min_eigenvalue(rho) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("jacobi eigensolver on a fixed complex Hermitian matrix") {
    // 2x2 Hermitian [[2, 1-i], [1+i, 3]]: eigenvalues (5 +- sqrt(9))/2 = {1, 4}
    DenseHermitian h(2);
    h(0, 0) = 2.0;
    h(1, 1) = 3.0;
    h(0, 1) = complexd{1.0, -1.0};
    h(1, 0) = complexd{1.0, 1.0};
    CHECK(min_eigenvalue(h) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("closed-form tau for the pure N00N state") {
    for (int n : {1, 2, 5}) {
        const auto r = min_pt_eigenvalue(pure_noon(n));
        CHECK(r.tau == doctest::Approx(-0.5).epsilon(1e-14)); // vac = 0, |coh| = 1/2
        CHECK(r.entangled);
        CHECK(r.coherence_norm2 == doctest::Approx(0.25).epsilon(1e-14));
    }
}

TEST_CASE("separable states report tau = 0") {
    // dephased to zero coherence: a classical mixture of |N,0> and |0,N>
    auto s = pure_noon(3);
    s.coh[3] = 0.0;
    const auto r = min_pt_eigenvalue(s);
    CHECK(r.tau == 0.0);
    CHECK_FALSE(r.entangled);

    // vacuum only
    NoisyNoonState v;
    v.cutoff = 1;
    v.vac = 1.0;
    v.diag_a = {0.0, 0.0};
    v.diag_b = {0.0, 0.0};
    v.coh = {complexd{}, complexd{}};
    CHECK(min_pt_eigenvalue(v).tau == 0.0);
}

TEST_CASE("closed form agrees with the dense PT eigensolver") {
    std::mt19937_64 rng(52);
    for (int rep = 0; rep < 100; ++rep) {
        const auto s = oracles::random_state(rng, 8);
        const auto fast = min_pt_eigenvalue(s);
        const int d = s.cutoff + 1;
        const auto pt = partial_transpose(to_dense_product(s), d, d);
        const double dense = min_eigenvalue(pt);
        CHECK(fast.tau == doctest::Approx(dense).epsilon(1e-10));
    }
}

TEST_CASE("tau shrinks monotonically under deepening loss") {
    const auto s = pure_noon(2);
    double prev = -1.0;
    for (double kappa : {1.0, 0.8, 0.6, 0.4, 0.2, 0.05}) {
        const auto out = apply_constant_loss(s, {kappa, kappa});
        const double tau = min_pt_eigenvalue(out).tau;
        CHECK(tau < 0.0);   // loss alone never fully separates a N00N state
        CHECK(tau > prev);  // strictly less negative as loss deepens
        prev = tau;
    }
}

TEST_CASE("tau accumulates coherences across ladder levels") {
    const auto s = mixed_noon({0.2, 0.3, 0.5});
    const auto r = min_pt_eigenvalue(s);
    const double expect_norm2 = 0.15 * 0.15 + 0.25 * 0.25;
    CHECK(r.coherence_norm2 == doctest::Approx(expect_norm2).epsilon(1e-14));
    const double expect_tau =
        (0.2 - std::sqrt(0.2 * 0.2 + 4.0 * expect_norm2)) / 2.0;
    CHECK(r.tau == doctest::Approx(expect_tau).epsilon(1e-14));
}
