#include "ks/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace ks {

namespace {
const double kPi = 3.14159265358979323846;

void require(bool ok, const std::string& what) {
    if (!ok) throw std::domain_error(what);
}
}  // namespace

void ModelParams::validate() const {
    require(std::isfinite(chi) && chi >= 0.0, "chi must be finite and >= 0");
    require(std::isfinite(a) && a > 0.0, "a must be finite and > 0");
    require(std::isfinite(b) && b > 0.0, "b must be finite and > 0");
    require(std::isfinite(gamma) && gamma > 1.0, "gamma must be finite and > 1");
    require(std::isfinite(mu) && mu > 0.0, "mu must be finite and > 0");
    require(std::isfinite(lambda) && lambda > 0.0, "lambda must be finite and > 0");
    require(dim >= 1 && dim <= 3, "dim must be 1, 2 or 3");
}

void InitialDataNorms::validate() const {
    require(std::isfinite(u0_sup) && u0_sup >= 0.0, "u0_sup must be finite and >= 0");
    require(std::isfinite(grad_v0_sup) && grad_v0_sup >= 0.0, "grad_v0_sup must be finite and >= 0");
    require(std::isfinite(v0_sup) && v0_sup >= 0.0, "v0_sup must be finite and >= 0");
    require(std::isfinite(u0_inf) && u0_inf >= 0.0, "u0_inf must be finite and >= 0");
    require(u0_inf <= u0_sup, "u0_inf must not exceed u0_sup");
}

Equilibrium equilibrium(const ModelParams& p) {
    p.validate();
    const double u_star = std::pow(p.a / p.b, 1.0 / (p.gamma - 1.0));
    return {u_star, p.mu / p.lambda * u_star};
}

double gamma_half_integral(double rho) {
    if (!(rho > 0.0) || !std::isfinite(rho))
        throw std::domain_error("gamma_half_integral requires rho > 0");
    return std::sqrt(kPi / rho);
}

double kernel_gradient_constant(int dim) {
    if (dim < 1) throw std::domain_error("dimension must be positive");
    return std::sqrt(static_cast<double>(dim)) / std::sqrt(kPi);
}

double c_bar(const ModelParams& p, const InitialDataNorms& n) {
    return 2.0 * n.u0_sup + 3.0 * equilibrium(p).u_star;
}

IntegralConstants integral_constants(const ModelParams& p, double sigma) {
    p.validate();
    require(std::isfinite(sigma) && sigma >= 0.0, "sigma must be finite and >= 0");
    IntegralConstants c{};
    c.c1 = gamma_half_integral(p.lambda);
    c.c2 = static_cast<double>(p.dim) / std::sqrt((p.gamma - 1.0) * p.a);
    const double rate3 = p.lambda - sigma * (p.gamma - 1.0);
    if (!(rate3 > 0.0))
        throw std::domain_error("c3 requires lambda - sigma*(gamma-1) > 0");
    c.c3 = gamma_half_integral(rate3);
    const double rate4 = p.a - sigma;
    if (!(rate4 > 0.0))
        throw std::domain_error("c4 requires a - sigma > 0");
    c.c4 = gamma_half_integral((p.gamma - 1.0) * rate4);
    return c;
}

FreeParameters default_free_parameters(const ModelParams& p) {
    p.validate();
    const double u_star = equilibrium(p).u_star;
    FreeParameters f{};
    f.sigma = 0.5 * std::min(p.a / 2.0, p.lambda / (p.gamma - 1.0));
    f.epsilon = 0.5;
    f.xi = 0.999 * u_star / 4.0;
    return f;
}

FreeParameters default_free_parameters(const ModelParams& p, double measured_floor) {
    FreeParameters f = default_free_parameters(p);
    if (std::isfinite(measured_floor) && measured_floor > 0.0)
        f.xi = std::min(f.xi, measured_floor);
    return f;
}

namespace {
void validate_free(const ModelParams& p, double u_star, double sigma, double epsilon, double xi) {
    const double sigma_cap = std::min(p.a / 2.0, p.lambda / (p.gamma - 1.0));
    require(sigma > 0.0 && sigma < sigma_cap,
            "sigma must lie in (0, min(a/2, lambda/(gamma-1)))");
    require(epsilon > 0.0 && epsilon < 1.0, "epsilon must lie in (0,1)");
    require(xi > 0.0 && xi < u_star / 4.0, "xi must lie in (0, u_star/4)");
}
}  // namespace

ChiThresholds chi_thresholds(const ModelParams& p, const InitialDataNorms& n,
                             double sigma, double epsilon, double xi) {
    p.validate();
    n.validate();
    const double u_star = equilibrium(p).u_star;
    validate_free(p, u_star, sigma, epsilon, xi);

    const IntegralConstants c = integral_constants(p, sigma);
    const double cn = kernel_gradient_constant(p.dim);
    const double cb = c_bar(p, n);
    const double nd = static_cast<double>(p.dim);

    // grad_v0_sup + mu c_bar c_N c1 is the uniform bound on |grad v|; it is
    // strictly positive because c_bar > 0.
    const double grad_bound = n.grad_v0_sup + p.mu * cb * cn * c.c1;

    ChiThresholds t{};
    t.chi0 = u_star / (2.0 * cb * c.c2 * grad_bound);
    t.chi1 = std::sqrt(kPi) * xi /
             (4.0 * nd * (2.0 * u_star - xi) * grad_bound *
              gamma_half_integral(p.a * (p.gamma - 1.0)));

    const double q = (2.0 - p.gamma) / (p.gamma - 1.0);
    const double b_pow = std::pow(p.b, 1.0 / (p.gamma - 1.0));
    const double c_tilde = epsilon * std::pow(p.a, q) * (p.a - sigma) / (2.0 * b_pow);
    const double c_vtilde = grad_bound + p.mu * c_tilde * cn * c.c3;
    const double third = epsilon * epsilon * std::pow(p.a, q) * sigma * std::sqrt(kPi) /
                         (4.0 * b_pow * nd * c_vtilde * c.c4 * (c_tilde + u_star));
    t.chi_star = std::min({t.chi0, t.chi1, third});
    return t;
}

double explicit_u_bound(const ModelParams& p, const InitialDataNorms& n, double t) {
    if (!(t >= 0.0)) throw std::domain_error("explicit_u_bound requires t >= 0");
    const double u_star = equilibrium(p).u_star;
    return std::exp(-(p.gamma - 1.0) * p.a * t) * n.u0_sup + 1.5 * u_star;
}

VBounds v_bounds(const ModelParams& p, const InitialDataNorms& n) {
    p.validate();
    n.validate();
    const double cb = c_bar(p, n);
    const double c1 = gamma_half_integral(p.lambda);
    const double cn = kernel_gradient_constant(p.dim);
    VBounds b{};
    b.v_sup_bound = n.v0_sup + p.mu / p.lambda * cb;
    b.grad_v_sup_bound = n.grad_v0_sup + p.mu * cb * cn * c1;
    return b;
}

DerivedConstants derive_constants(const ModelParams& p, const InitialDataNorms& n,
                                  const FreeParameters& f) {
    const Equilibrium eq = equilibrium(p);
    const IntegralConstants ic = integral_constants(p, f.sigma);
    const ChiThresholds th = chi_thresholds(p, n, f.sigma, f.epsilon, f.xi);
    const VBounds vb = v_bounds(p, n);

    DerivedConstants d{};
    d.u_star = eq.u_star;
    d.v_star = eq.v_star;
    d.c_bar = c_bar(p, n);
    d.c_N = kernel_gradient_constant(p.dim);
    d.c1 = ic.c1;
    d.c2 = ic.c2;
    d.c3 = ic.c3;
    d.c4 = ic.c4;
    d.chi0 = th.chi0;
    d.chi1 = th.chi1;
    d.chi_star = th.chi_star;
    d.sigma = f.sigma;
    d.epsilon = f.epsilon;
    d.xi = f.xi;
    const double q = (2.0 - p.gamma) / (p.gamma - 1.0);
    const double b_pow = std::pow(p.b, 1.0 / (p.gamma - 1.0));
    d.c_tilde = f.epsilon * std::pow(p.a, q) * (p.a - f.sigma) / (2.0 * b_pow);
    d.c_vtilde = n.grad_v0_sup + p.mu * d.c_bar * d.c_N * d.c1 + p.mu * d.c_tilde * d.c_N * d.c3;
    d.v_sup_bound = vb.v_sup_bound;
    d.grad_v_sup_bound = vb.grad_v_sup_bound;
    d.decay_in_scope = p.decay_in_scope();
    return d;
}

}  // namespace ks
