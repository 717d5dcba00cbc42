#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ks/model.hpp"
#include "oracles.hpp"

using namespace ks;

namespace {
ModelParams make_params(double chi, double a, double b, double gamma, double mu, double lambda,
                        int dim) {
    ModelParams p;
    p.chi = chi;
    p.a = a;
    p.b = b;
    p.gamma = gamma;
    p.mu = mu;
    p.lambda = lambda;
    p.dim = dim;
    return p;
}
const double kPi = 3.14159265358979323846;
}  // namespace

TEST_CASE("equilibrium values") {
    CHECK(equilibrium(make_params(0, 1, 1, 1.5, 1, 1, 2)).u_star == doctest::Approx(1.0));
    CHECK(equilibrium(make_params(0, 1, 1, 1.5, 1, 1, 2)).v_star == doctest::Approx(1.0));

    const Equilibrium g2 = equilibrium(make_params(0, 3, 2, 2.0, 1, 1, 2));
    CHECK(g2.u_star == doctest::Approx(1.5));
    CHECK(g2.v_star == doctest::Approx(1.5));

    const Equilibrium e = equilibrium(make_params(0, 4, 1, 1.5, 2, 4, 2));
    CHECK(e.u_star == doctest::Approx(16.0));
    CHECK(e.v_star == doctest::Approx(8.0));
}

TEST_CASE("equilibrium is a root of the source term") {
    for (const auto& [a, b, gamma] :
         {std::tuple{1.0, 1.0, 1.5}, {2.0, 0.5, 1.7}, {0.3, 4.0, 2.5}, {5.0, 2.0, 1.1}}) {
        const ModelParams p = make_params(0, a, b, gamma, 1, 1, 2);
        const double u = equilibrium(p).u_star;
        CHECK(std::abs(a * u - b * std::pow(u, gamma)) <= 1e-12 * a * u);
    }
}

TEST_CASE("params validation") {
    CHECK_THROWS_AS(make_params(-0.1, 1, 1, 1.5, 1, 1, 2).validate(), std::domain_error);
    CHECK_THROWS_AS(make_params(0, 0, 1, 1.5, 1, 1, 2).validate(), std::domain_error);
    CHECK_THROWS_AS(make_params(0, 1, 0, 1.5, 1, 1, 2).validate(), std::domain_error);
    CHECK_THROWS_AS(make_params(0, 1, 1, 1.0, 1, 1, 2).validate(), std::domain_error);
    CHECK_THROWS_AS(make_params(0, 1, 1, 1.5, 0, 1, 2).validate(), std::domain_error);
    CHECK_THROWS_AS(make_params(0, 1, 1, 1.5, 1, 0, 2).validate(), std::domain_error);
    CHECK_THROWS_AS(make_params(0, 1, 1, 1.5, 1, 1, 4).validate(), std::domain_error);
    CHECK_NOTHROW(make_params(0, 1, 1, 1.5, 1, 1, 1).validate());
}

TEST_CASE("gamma_half_integral closed form") {
    CHECK(gamma_half_integral(kPi) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(gamma_half_integral(1.0) == doctest::Approx(1.7724538509055160).epsilon(1e-12));
    CHECK(gamma_half_integral(4.0) == doctest::Approx(0.88622692545275801).epsilon(1e-12));
    CHECK_THROWS_AS(gamma_half_integral(0.0), std::domain_error);
    CHECK_THROWS_AS(gamma_half_integral(-1.0), std::domain_error);
}

TEST_CASE("gamma_half_integral matches adaptive quadrature") {
    for (double rho : {0.1, 1.0, 10.0, 100.0}) {
        const double q = oracles::gamma_half_quadrature(rho);
        CHECK(std::abs(gamma_half_integral(rho) - q) <= 1e-8 * q);
    }
}

TEST_CASE("integral constants") {
    SUBCASE("unit combinations") {
        const IntegralConstants c = integral_constants(make_params(0, 1, 1, 2.0, 1, kPi, 2), 0.0);
        CHECK(c.c1 == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(c.c2 == doctest::Approx(2.0).epsilon(1e-14));
    }
    SUBCASE("damped constants at sigma = 0.25") {
        const IntegralConstants c =
            integral_constants(make_params(0, 1, 1, 1.5, 1, 1, 2), 0.25);
        CHECK(c.c3 == doctest::Approx(std::sqrt(kPi / 0.875)).epsilon(1e-14));
        CHECK(c.c4 == doctest::Approx(std::sqrt(kPi / (0.5 * 0.75))).epsilon(1e-14));
        CHECK(c.c4 == doctest::Approx(2.8944050182330706).epsilon(1e-12));
    }
    SUBCASE("dimension factor") {
        const IntegralConstants c = integral_constants(make_params(0, 1, 1, 1.5, 1, 1, 3), 0.0);
        CHECK(c.c2 == doctest::Approx(3.0 / std::sqrt(0.5)).epsilon(1e-14));
        CHECK(c.c2 == doctest::Approx(4.2426406871192848).epsilon(1e-12));
    }
    SUBCASE("quadrature oracle for every constant") {
        const ModelParams p = make_params(0, 2.0, 0.5, 1.8, 1, 0.7, 2);
        const double sigma = 0.3;
        const IntegralConstants c = integral_constants(p, sigma);
        const double q1 = oracles::gamma_half_quadrature(p.lambda);
        const double q2 = p.dim / std::sqrt(kPi) *
                          oracles::gamma_half_quadrature((p.gamma - 1.0) * p.a);
        const double q3 = oracles::gamma_half_quadrature(p.lambda - sigma * (p.gamma - 1.0));
        const double q4 = oracles::gamma_half_quadrature((p.gamma - 1.0) * (p.a - sigma));
        CHECK(std::abs(c.c1 - q1) <= 1e-8 * q1);
        CHECK(std::abs(c.c2 - q2) <= 1e-8 * q2);
        CHECK(std::abs(c.c3 - q3) <= 1e-8 * q3);
        CHECK(std::abs(c.c4 - q4) <= 1e-8 * q4);
    }
    SUBCASE("domain errors name the offending constant") {
        CHECK_THROWS_WITH_AS(integral_constants(make_params(0, 1, 1, 1.5, 1, 1, 2), 2.5),
                             doctest::Contains("c3"), std::domain_error);
        CHECK_THROWS_WITH_AS(integral_constants(make_params(0, 1, 1, 1.5, 1, 100, 2), 1.5),
                             doctest::Contains("c4"), std::domain_error);
    }
}

TEST_CASE("kernel gradient constant") {
    CHECK(kernel_gradient_constant(1) == doctest::Approx(1.0 / std::sqrt(kPi)).epsilon(1e-15));
    CHECK(kernel_gradient_constant(2) ==
          doctest::Approx(std::sqrt(2.0) / std::sqrt(kPi)).epsilon(1e-15));
}

TEST_CASE("chi thresholds, gamma = 2 boundedness example") {
    const ModelParams p = make_params(0, 1, 1, 2.0, 1, 1, 2);
    InitialDataNorms n;
    n.u0_sup = 1.0;
    n.u0_inf = 1.0;
    const ChiThresholds t = chi_thresholds(p, n, 0.25, 0.5, 0.125);
    // c_bar = 5, c2 = 2, c1 = sqrt(pi), c_N = sqrt(2/pi): chi0 = 1/(100 sqrt 2)
    CHECK(t.chi0 == doctest::Approx(1.0 / (100.0 * std::sqrt(2.0))).epsilon(1e-13));
    CHECK(t.chi0 == doctest::Approx(7.0710678e-3).epsilon(1e-7));
}

TEST_CASE("chi thresholds, gamma = 1.5 fixture") {
    const ModelParams p = make_params(0, 1, 1, 1.5, 1, 1, 2);
    InitialDataNorms n;
    n.u0_sup = 1.0;
    n.u0_inf = 1.0;
    const double sigma = 0.25, eps = 0.5, xi = 0.125;
    const ChiThresholds t = chi_thresholds(p, n, sigma, eps, xi);

    // All three branches evaluated independently of the library arithmetic.
    const double u_star = 1.0;
    const double cbar = 5.0;
    const double c1 = std::sqrt(kPi);
    const double c2 = 2.0 / std::sqrt(0.5);
    const double cn = std::sqrt(2.0 / kPi);
    const double grad_bound = cbar * cn * c1;  // grad_v0_sup = 0
    const double chi0 = u_star / (2.0 * cbar * c2 * grad_bound);
    const double chi1 =
        std::sqrt(kPi) * xi / (4.0 * 2.0 * (2.0 - xi) * grad_bound * std::sqrt(kPi / 0.5));
    const double c_tilde = eps * (1.0 - sigma) / 2.0;
    const double c3 = std::sqrt(kPi / (1.0 - sigma * 0.5));
    const double c4 = std::sqrt(kPi / (0.5 * (1.0 - sigma)));
    const double c_vtilde = grad_bound + c_tilde * cn * c3;
    const double third =
        eps * eps * sigma * std::sqrt(kPi) / (4.0 * 2.0 * c_vtilde * c4 * (c_tilde + u_star));

    CHECK(t.chi0 == doctest::Approx(chi0).epsilon(1e-13));
    CHECK(t.chi0 == doctest::Approx(0.005).epsilon(1e-13));
    CHECK(t.chi1 == doctest::Approx(chi1).epsilon(1e-13));
    CHECK(t.chi1 == doctest::Approx(1.0 / 1200.0).epsilon(1e-12));
    CHECK(t.chi_star == doctest::Approx(std::min({chi0, chi1, third})).epsilon(1e-13));
    CHECK(t.chi_star == doctest::Approx(5.4779298028794169e-4).epsilon(1e-12));
}

TEST_CASE("chi0 monotonicity") {
    InitialDataNorms base;
    base.u0_sup = 1.0;
    base.grad_v0_sup = 0.5;
    base.v0_sup = 1.0;
    const double sigma = 0.2, eps = 0.5, xi = 0.1;
    auto chi0_of = [&](double u0, double gv0, double mu, int dim) {
        InitialDataNorms n = base;
        n.u0_sup = u0;
        n.grad_v0_sup = gv0;
        return chi_thresholds(make_params(0, 1, 1, 1.5, mu, 1, dim), n, sigma, eps, xi).chi0;
    };
    for (int i = 1; i < 5; ++i) {
        CHECK(chi0_of(0.5 + 0.5 * i, 0.5, 1, 2) < chi0_of(0.5 + 0.5 * (i - 1), 0.5, 1, 2));
        CHECK(chi0_of(1, 0.5 * i, 1, 2) < chi0_of(1, 0.5 * (i - 1), 1, 2));
        CHECK(chi0_of(1, 0.5, 0.5 + 0.5 * i, 2) < chi0_of(1, 0.5, 0.5 + 0.5 * (i - 1), 2));
    }
    CHECK(chi0_of(1, 0.5, 1, 2) < chi0_of(1, 0.5, 1, 1));
    CHECK(chi0_of(1, 0.5, 1, 3) < chi0_of(1, 0.5, 1, 2));
}

TEST_CASE("chi_star never exceeds chi0 or chi1") {
    InitialDataNorms n;
    n.u0_sup = 1.2;
    n.grad_v0_sup = 0.3;
    for (double gamma : {1.2, 1.5, 1.9}) {
        for (double a : {0.5, 1.0, 2.0}) {
            const ModelParams p = make_params(0, a, 1.3, gamma, 0.8, 1.1, 2);
            const FreeParameters f = default_free_parameters(p);
            const ChiThresholds t = chi_thresholds(p, n, f.sigma, f.epsilon, f.xi);
            CHECK(t.chi_star <= t.chi0 * (1 + 1e-15));
            CHECK(t.chi_star <= t.chi1 * (1 + 1e-15));
            CHECK(t.chi_star > 0.0);
        }
    }
}

TEST_CASE("free parameter validation") {
    const ModelParams p = make_params(0, 1, 1, 1.5, 1, 1, 2);
    InitialDataNorms n;
    n.u0_sup = 1.0;
    CHECK_THROWS_WITH_AS(chi_thresholds(p, n, 0.6, 0.5, 0.125), doctest::Contains("sigma"),
                         std::domain_error);
    CHECK_THROWS_WITH_AS(chi_thresholds(p, n, 0.25, 1.5, 0.125), doctest::Contains("epsilon"),
                         std::domain_error);
    CHECK_THROWS_WITH_AS(chi_thresholds(p, n, 0.25, 0.5, 0.3), doctest::Contains("xi"),
                         std::domain_error);

    const FreeParameters f = default_free_parameters(p);
    CHECK(f.sigma == doctest::Approx(0.25));
    CHECK(f.epsilon == doctest::Approx(0.5));
    CHECK(f.xi < 0.25);
    const FreeParameters capped = default_free_parameters(p, 0.1);
    CHECK(capped.xi == doctest::Approx(0.1));
}

TEST_CASE("explicit u bound") {
    const ModelParams p = make_params(0, 1, 1, 1.5, 1, 1, 2);
    InitialDataNorms n;
    n.u0_sup = 1.0;
    CHECK(explicit_u_bound(p, n, 0.0) == doctest::Approx(2.5).epsilon(1e-14));
    CHECK(explicit_u_bound(p, n, 1e6) == doctest::Approx(1.5).epsilon(1e-14));
    const double t_half = std::log(2.0) / 0.5;
    CHECK(explicit_u_bound(p, n, t_half) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK_THROWS_AS(explicit_u_bound(p, n, -1.0), std::domain_error);

    double prev = explicit_u_bound(p, n, 0.0);
    for (double t : {0.5, 1.0, 2.0, 5.0, 20.0}) {
        const double cur = explicit_u_bound(p, n, t);
        CHECK(cur < prev);
        CHECK(cur > 1.5);  // infimum is 1.5 u_star, never attained
        prev = cur;
    }
}

TEST_CASE("v bounds") {
    InitialDataNorms n;
    n.u0_sup = 1.0;
    n.v0_sup = 1.0;
    const VBounds b = v_bounds(make_params(0, 1, 1, 1.5, 1, 1, 2), n);
    CHECK(b.v_sup_bound == doctest::Approx(6.0).epsilon(1e-14));

    InitialDataNorms n2;
    n2.u0_sup = 1.0;
    const VBounds g = v_bounds(make_params(0, 1, 1, 1.5, 1, 1, 2), n2);
    CHECK(g.grad_v_sup_bound == doctest::Approx(5.0 * std::sqrt(2.0)).epsilon(1e-13));
    CHECK(g.grad_v_sup_bound == doctest::Approx(7.0710678).epsilon(1e-7));

    // vanishing production decouples the signal from u
    InitialDataNorms n3;
    n3.u0_sup = 1.0;
    n3.v0_sup = 0.7;
    n3.grad_v0_sup = 0.4;
    const VBounds d = v_bounds(make_params(0, 1, 1, 1.5, 1e-12, 1, 2), n3);
    CHECK(d.v_sup_bound == doctest::Approx(0.7).epsilon(1e-9));
    CHECK(d.grad_v_sup_bound == doctest::Approx(0.4).epsilon(1e-9));
}

TEST_CASE("derive_constants bundles everything consistently") {
    const ModelParams p = make_params(2e-4, 1, 1, 1.5, 1, 1, 2);
    InitialDataNorms n;
    n.u0_sup = 1.5;
    n.u0_inf = 0.5;
    const FreeParameters f = default_free_parameters(p);
    const DerivedConstants d = derive_constants(p, n, f);
    CHECK(d.u_star == doctest::Approx(1.0));
    CHECK(d.c_bar == doctest::Approx(2.0 * 1.5 + 3.0));
    CHECK(d.chi_star <= std::min(d.chi0, d.chi1));
    CHECK(d.decay_in_scope);
    CHECK(d.c_vtilde > d.grad_v_sup_bound);  // the c3 term adds on top
    CHECK(!derive_constants(make_params(0, 1, 1, 2.0, 1, 1, 2), n, f).decay_in_scope);
}
