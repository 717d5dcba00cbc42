#ifndef KS_MODEL_HPP
#define KS_MODEL_HPP

namespace ks {

/** PDE parameters of the chemotaxis system
 *      u_t = Laplace(u) - chi div(u grad v) + a u - b u^gamma
 *      v_t = Laplace(v) + mu u - lambda v
 *  on a periodic box approximating R^N. */
struct ModelParams {
    double chi = 0.0;     // chemotaxis strength, >= 0
    double a = 1.0;       // growth rate, > 0
    double b = 1.0;       // damping coefficient, > 0
    double gamma = 2.0;   // source exponent, > 1
    double mu = 1.0;      // signal production rate, > 0
    double lambda = 1.0;  // signal decay rate, > 0
    int dim = 2;          // spatial dimension, 1..3

    // Throws std::domain_error on an inadmissible parameter.
    void validate() const;

    // The exponential-convergence analysis applies only for gamma in (1,2).
    bool decay_in_scope() const { return gamma > 1.0 && gamma < 2.0; }
};

/** Sup/inf norms of the initial data, measured on the grid or given directly. */
struct InitialDataNorms {
    double u0_sup = 0.0;
    double grad_v0_sup = 0.0;
    double v0_sup = 0.0;
    double u0_inf = 0.0;

    void validate() const;  // u0_inf <= u0_sup, all finite and nonnegative
};

struct Equilibrium {
    double u_star;  // (a/b)^{1/(gamma-1)}
    double v_star;  // (mu/lambda) * u_star
};

/// Positive constant equilibrium of the reaction terms.
Equilibrium equilibrium(const ModelParams& p);

/// Closed form sqrt(pi/rho) of the integral of s^{-1/2} e^{-rho s} over (0,inf).
double gamma_half_integral(double rho);

/// sqrt(N)/sqrt(pi): Euclidean combination of the per-axis L1 norms of the
/// heat-kernel gradient, the constant used in the semigroup gradient bound.
double kernel_gradient_constant(int dim);

/// 2*u0_sup + 3*u_star, the sup-norm barrier the bounded regime lives under.
double c_bar(const ModelParams& p, const InitialDataNorms& n);

struct IntegralConstants {
    double c1;  // sqrt(pi/lambda)
    double c2;  // N / sqrt((gamma-1) a)
    double c3;  // sqrt(pi/(lambda - sigma (gamma-1)))
    double c4;  // sqrt(pi/((gamma-1)(a - sigma)))
};

/** The four kernel-integral constants. c3 and c4 involve the decay-rate
 *  parameter sigma; sigma = 0 gives their undamped values. Throws
 *  std::domain_error naming the constant whose effective decay rate is
 *  not positive. */
IntegralConstants integral_constants(const ModelParams& p, double sigma);

/** Free parameters of the decay analysis. The admissible ranges are
 *  0 < sigma < min(a/2, lambda/(gamma-1)), 0 < epsilon < 1,
 *  0 < xi < u_star/4. */
struct FreeParameters {
    double sigma;
    double epsilon;
    double xi;
};

/// Midpoint defaults: sigma = 0.5*min(a/2, lambda/(gamma-1)), epsilon = 0.5,
/// xi = 0.999*u_star/4 capped by a measured persistence floor when available.
FreeParameters default_free_parameters(const ModelParams& p);
FreeParameters default_free_parameters(const ModelParams& p, double measured_floor);

struct ChiThresholds {
    double chi0;      // boundedness threshold
    double chi1;      // eventual-closeness threshold
    double chi_star;  // exponential-convergence threshold, min of three terms
};

/// Evaluates the three chemotaxis-strength thresholds. Preconditions on
/// sigma, epsilon, xi as in FreeParameters; violations throw std::domain_error.
ChiThresholds chi_thresholds(const ModelParams& p, const InitialDataNorms& n,
                             double sigma, double epsilon, double xi);

/// e^{-(gamma-1) a t} u0_sup + (3/2) u_star, the explicit sup-norm bound on u.
double explicit_u_bound(const ModelParams& p, const InitialDataNorms& n, double t);

struct VBounds {
    double v_sup_bound;       // v0_sup + (mu/lambda) c_bar
    double grad_v_sup_bound;  // grad_v0_sup + mu c_bar c_N c1
};

VBounds v_bounds(const ModelParams& p, const InitialDataNorms& n);

/** Every closed-form constant in one place, as reported by the CLI. */
struct DerivedConstants {
    double u_star, v_star;
    double c_bar, c_N;
    double c1, c2, c3, c4;
    double chi0, chi1, chi_star;
    double sigma, epsilon, xi;
    double c_tilde;    // epsilon a^{(2-gamma)/(gamma-1)} (a-sigma) / (2 b^{1/(gamma-1)})
    double c_vtilde;   // grad_v0_sup + mu c_bar c_N c1 + mu c_tilde c_N c3
    double v_sup_bound, grad_v_sup_bound;
    bool decay_in_scope;  // false flags chi_star and friends as out of scope
};

DerivedConstants derive_constants(const ModelParams& p, const InitialDataNorms& n,
                                  const FreeParameters& f);

}  // namespace ks

#endif
