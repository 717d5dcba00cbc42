#ifndef KS_INTEGRATOR_HPP
#define KS_INTEGRATOR_HPP

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ks/field.hpp"
#include "ks/model.hpp"
#include "ks/record.hpp"

namespace ks {

struct SimulationState {
    double t = 0.0;
    ScalarField u;
    ScalarField v;
};

enum class Scheme { Etd1, Etd2Rk };

struct StepControl {
    double dt = 1e-2;
    Scheme scheme = Scheme::Etd2Rk;
    bool positivity_clip = true;
    bool dealias = true;
};

/// Raised when a step produces non-finite values; carries the failure time.
class IntegrationAbort : public std::runtime_error {
public:
    IntegrationAbort(const std::string& what, double t)
        : std::runtime_error(what), t_(t) {}
    double time_of_failure() const { return t_; }

private:
    double t_;
};

/** Stability ceiling 0.5 / ((gamma-1)a + chi sup|grad v0| k_max
 *  + b gamma c_bar^{gamma-1}), evaluated on the initial data. */
double dt_ceiling(const ModelParams& p, const SimulationState& initial);

/// Throws std::invalid_argument when ctl.dt exceeds the ceiling or is not positive.
void validate_step_control(const StepControl& ctl, const ModelParams& p,
                           const SimulationState& initial);

struct NonlinearRhs {
    ScalarField nu;  // -chi div(u grad v) + gamma a u - b u^gamma
    ScalarField nv;  // mu u
};

/** Pseudo-spectral evaluation: products formed in real space, derivatives as
 *  spectral multipliers, products dealiased by the 2/3 rule when requested.
 *  u^gamma is taken as max(u,0)^gamma. */
NonlinearRhs nonlinear_rhs(const SimulationState& s, const ModelParams& p,
                           bool dealias = true);

/** Exponential time differencing over the split linear operators
 *  Laplace - (gamma-1)a I (for u) and Laplace - lambda I (for v), whose
 *  multipliers are applied exactly; the remaining terms enter through
 *  phi-function weights. Multipliers and weights are cached for the fixed
 *  step at construction. */
class Stepper {
public:
    Stepper(const Grid& grid, const ModelParams& p, const StepControl& ctl);

    // Advances by ctl.dt. Throws IntegrationAbort on non-finite output.
    SimulationState step(const SimulationState& s);

    // Mean of the negative part removed by the positivity clip in the last step.
    double last_clipped_mass() const { return last_clipped_; }

    // Spectral coefficients of the nonlinear terms at (u, v); u_hat must be
    // the transform of u.
    void nonlinear_hat(const ScalarField& u, const SpectralField& u_hat,
                       const SpectralField& v_hat, SpectralField& nu_hat,
                       SpectralField& nv_hat) const;

private:
    Grid grid_;
    ModelParams params_;
    StepControl ctl_;
    std::vector<double> exp_u_, exp_v_;    // e^{z}
    std::vector<double> w1_u_, w1_v_;      // dt phi1(z)
    std::vector<double> w2_u_, w2_v_;      // dt phi2(z)
    std::vector<std::vector<double>> ik_;  // derivative wavenumbers per axis
    std::vector<std::uint8_t> mask_;
    double last_clipped_ = 0.0;
};

/// One-off convenience wrapper; validates ctl against the state.
SimulationState step(const SimulationState& s, const ModelParams& p, const StepControl& ctl);

struct RunOptions {
    double observe_every = 0.1;
    // Called at every recorded sample, after the row is appended.
    std::function<void(const SimulationState&)> observer;
};

/** Steps from initial.t to t_end recording diagnostics every observe_every
 *  time units (plus the initial and final states). An IntegrationAbort is
 *  converted into a partial record with the abort fields set. */
TimeSeriesRecord run(const SimulationState& initial, const ModelParams& p,
                     const StepControl& ctl, double t_end, const RunOptions& opt = {});

/// Sup/inf norms of a state's fields, as consumed by the threshold formulas.
InitialDataNorms measure_norms(const SimulationState& s);

// phi1(z) = (e^z - 1)/z and phi2(z) = (e^z - 1 - z)/z^2 with series
// evaluation near 0 to avoid cancellation.
double phi1(double z);
double phi2(double z);

}  // namespace ks

#endif
