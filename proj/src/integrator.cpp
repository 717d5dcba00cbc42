#include "ks/integrator.hpp"

#include <algorithm>
#include <cmath>

namespace ks {

double phi1(double z) {
    if (std::abs(z) < 1e-4) {
        // 1 + z/2 + z^2/6 + z^3/24 + z^4/120
        return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z / 120.0)));
    }
    return std::expm1(z) / z;
}

double phi2(double z) {
    if (std::abs(z) < 1e-4) {
        // 1/2 + z/6 + z^2/24 + z^3/120 + z^4/720
        return 0.5 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0)));
    }
    return (std::expm1(z) - z) / (z * z);
}

InitialDataNorms measure_norms(const SimulationState& s) {
    InitialDataNorms n{};
    n.u0_sup = sup_norm(s.u);
    n.u0_inf = inf_value(s.u);
    n.v0_sup = sup_norm(s.v);
    n.grad_v0_sup = sup_norm(gradient(s.v));
    return n;
}

double dt_ceiling(const ModelParams& p, const SimulationState& initial) {
    const InitialDataNorms n = measure_norms(initial);
    const double cb = c_bar(p, n);
    const double rate = (p.gamma - 1.0) * p.a +
                        p.chi * n.grad_v0_sup * initial.u.grid.k_max() +
                        p.b * p.gamma * std::pow(cb, p.gamma - 1.0);
    return 0.5 / rate;
}

void validate_step_control(const StepControl& ctl, const ModelParams& p,
                           const SimulationState& initial) {
    if (!(ctl.dt > 0.0) || !std::isfinite(ctl.dt))
        throw std::invalid_argument("dt must be positive and finite");
    const double cap = dt_ceiling(p, initial);
    if (ctl.dt > cap)
        throw std::invalid_argument("dt exceeds the stability ceiling " + std::to_string(cap));
}

namespace {

std::vector<double> clipped_power(const ScalarField& u, double gamma) {
    std::vector<double> out(u.values.size());
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = std::pow(std::max(u.values[i], 0.0), gamma);
    return out;
}

}  // namespace

Stepper::Stepper(const Grid& grid, const ModelParams& p, const StepControl& ctl)
    : grid_(grid), params_(p), ctl_(ctl) {
    const std::size_t n = grid_.spectral_size();
    std::vector<double> k2(n, 0.0);
    ik_.reserve(grid_.dim);
    for (int axis = 0; axis < grid_.dim; ++axis) {
        ik_.push_back(derivative_wavenumbers(grid_, axis));
        const std::vector<double> k = wavenumbers(grid_, axis);
        for (std::size_t i = 0; i < n; ++i) k2[i] += k[i] * k[i];
    }
    mask_ = dealias_mask(grid_);

    exp_u_.resize(n);
    exp_v_.resize(n);
    w1_u_.resize(n);
    w1_v_.resize(n);
    w2_u_.resize(n);
    w2_v_.resize(n);
    const double dt = ctl_.dt;
    const double shift_u = (params_.gamma - 1.0) * params_.a;
    for (std::size_t i = 0; i < n; ++i) {
        const double zu = -(k2[i] + shift_u) * dt;
        const double zv = -(k2[i] + params_.lambda) * dt;
        exp_u_[i] = std::exp(zu);
        exp_v_[i] = std::exp(zv);
        w1_u_[i] = dt * phi1(zu);
        w1_v_[i] = dt * phi1(zv);
        w2_u_[i] = dt * phi2(zu);
        w2_v_[i] = dt * phi2(zv);
    }
}

void Stepper::nonlinear_hat(const ScalarField& u, const SpectralField& u_hat,
                            const SpectralField& v_hat, SpectralField& nu_hat,
                            SpectralField& nv_hat) const {
    const std::size_t n = grid_.spectral_size();

    // -chi div(u grad v), products in real space
    SpectralField div_hat(grid_);
    if (params_.chi != 0.0) {
        for (int axis = 0; axis < grid_.dim; ++axis) {
            SpectralField dv(grid_);
            for (std::size_t i = 0; i < n; ++i) {
                const double k = ik_[axis][i];
                dv.coeff[i] = std::complex<double>(-k * v_hat.coeff[i].imag(),
                                                   k * v_hat.coeff[i].real());
            }
            ScalarField gvi = inverse_transform(dv);
            for (std::size_t i = 0; i < gvi.values.size(); ++i) gvi.values[i] *= u.values[i];
            SpectralField prod = transform(gvi);
            for (std::size_t i = 0; i < n; ++i) {
                if (ctl_.dealias && !mask_[i]) continue;
                const double k = ik_[axis][i];
                div_hat.coeff[i] += std::complex<double>(-k * prod.coeff[i].imag(),
                                                         k * prod.coeff[i].real());
            }
        }
    }

    ScalarField powg(grid_, clipped_power(u, params_.gamma));
    if (!all_finite(powg))
        throw IntegrationAbort("non-finite source term u^gamma", 0.0);
    SpectralField powg_hat = transform(powg);
    if (ctl_.dealias) dealias_two_thirds(powg_hat);

    const double ga = params_.gamma * params_.a;
    for (std::size_t i = 0; i < n; ++i) {
        nu_hat.coeff[i] = -params_.chi * div_hat.coeff[i] + ga * u_hat.coeff[i] -
                          params_.b * powg_hat.coeff[i];
        nv_hat.coeff[i] = params_.mu * u_hat.coeff[i];
    }
}

SimulationState Stepper::step(const SimulationState& s) {
    if (s.u.grid != grid_ || s.v.grid != grid_)
        throw std::invalid_argument("step: state grid does not match stepper grid");
    if (!all_finite(s.u) || !all_finite(s.v))
        throw IntegrationAbort("non-finite state", s.t);

    const std::size_t n = grid_.spectral_size();
    const SpectralField u_hat = transform(s.u);
    const SpectralField v_hat = transform(s.v);
    SpectralField nu_n(grid_), nv_n(grid_);
    try {
        nonlinear_hat(s.u, u_hat, v_hat, nu_n, nv_n);
    } catch (const IntegrationAbort& e) {
        throw IntegrationAbort(e.what(), s.t);
    }

    SpectralField ua(grid_), va(grid_);
    for (std::size_t i = 0; i < n; ++i) {
        ua.coeff[i] = exp_u_[i] * u_hat.coeff[i] + w1_u_[i] * nu_n.coeff[i];
        va.coeff[i] = exp_v_[i] * v_hat.coeff[i] + w1_v_[i] * nv_n.coeff[i];
    }

    SimulationState out;
    out.t = s.t + ctl_.dt;

    if (ctl_.scheme == Scheme::Etd1) {
        out.u = inverse_transform(ua);
        out.v = inverse_transform(va);
    } else {
        ScalarField u_pred = inverse_transform(ua);
        if (!all_finite(u_pred)) throw IntegrationAbort("non-finite predictor", s.t);
        SpectralField nu_a(grid_), nv_a(grid_);
        try {
            nonlinear_hat(u_pred, ua, va, nu_a, nv_a);
        } catch (const IntegrationAbort& e) {
            throw IntegrationAbort(e.what(), s.t);
        }
        for (std::size_t i = 0; i < n; ++i) {
            ua.coeff[i] += w2_u_[i] * (nu_a.coeff[i] - nu_n.coeff[i]);
            va.coeff[i] += w2_v_[i] * (nv_a.coeff[i] - nv_n.coeff[i]);
        }
        out.u = inverse_transform(ua);
        out.v = inverse_transform(va);
    }

    last_clipped_ = 0.0;
    if (ctl_.positivity_clip) {
        double clipped = 0.0;
        for (double& x : out.u.values) {
            if (x < 0.0) {
                clipped -= x;
                x = 0.0;
            }
        }
        last_clipped_ = clipped / static_cast<double>(out.u.values.size());
    }

    if (!all_finite(out.u) || !all_finite(out.v))
        throw IntegrationAbort("non-finite step output", out.t);
    return out;
}

SimulationState step(const SimulationState& s, const ModelParams& p, const StepControl& ctl) {
    validate_step_control(ctl, p, s);
    Stepper stepper(s.u.grid, p, ctl);
    return stepper.step(s);
}

namespace {

TimeSeriesRow sample_row(const SimulationState& s, const ModelParams& p,
                         const InitialDataNorms& norms, double t0, double clipped) {
    TimeSeriesRow r{};
    r.t = s.t;
    r.sup_u = sup_norm(s.u);
    r.inf_u = inf_value(s.u);
    r.sup_v = sup_norm(s.v);
    r.inf_v = inf_value(s.v);

    const SpectralField v_hat = transform(s.v);
    std::vector<ScalarField> gv;
    gv.reserve(s.v.grid.dim);
    for (int axis = 0; axis < s.v.grid.dim; ++axis)
        gv.push_back(inverse_transform(spectral_derivative(v_hat, axis)));
    r.sup_grad_v = sup_norm(gv);
    SpectralField lap = v_hat;
    const std::vector<double> k2 = squared_wavenumbers(s.v.grid);
    for (std::size_t i = 0; i < lap.coeff.size(); ++i) lap.coeff[i] *= -k2[i];
    r.sup_lap_v = sup_norm(inverse_transform(lap));

    r.clipped_mass = clipped;
    r.bound_u = explicit_u_bound(p, norms, s.t - t0);
    const VBounds vb = v_bounds(p, norms);
    r.bound_v = vb.v_sup_bound;
    r.bound_grad_v = vb.grad_v_sup_bound;
    return r;
}

}  // namespace

TimeSeriesRecord run(const SimulationState& initial, const ModelParams& p,
                     const StepControl& ctl, double t_end, const RunOptions& opt) {
    if (!(t_end >= initial.t))
        throw std::invalid_argument("t_end must not precede the initial time");
    validate_step_control(ctl, p, initial);

    const InitialDataNorms norms = measure_norms(initial);
    const double t0 = initial.t;
    // Sampling is stride-based so rows land on exact step multiples.
    const long stride = std::max(1L, std::lround(opt.observe_every / ctl.dt));

    TimeSeriesRecord rec;
    rec.rows.push_back(sample_row(initial, p, norms, t0, 0.0));
    if (opt.observer) opt.observer(initial);

    Stepper stepper(initial.u.grid, p, ctl);
    SimulationState s = initial;
    double clip_window = 0.0;
    long i = 0;
    // Comparison slack on the step-quantized time axis.
    const double t_eps = 1e-9 * ctl.dt;
    while (s.t < t_end - t_eps) {
        ++i;
        try {
            s = stepper.step(s);
        } catch (const IntegrationAbort& e) {
            rec.aborted = true;
            rec.abort_time = e.time_of_failure();
            rec.abort_reason = e.what();
            return rec;
        }
        s.t = t0 + static_cast<double>(i) * ctl.dt;  // avoid accumulation drift
        const double clipped = stepper.last_clipped_mass();
        clip_window = std::max(clip_window, clipped);
        if (clipped > 1e-8 * mean(s.u)) rec.clip_flagged = true;

        const bool finished = !(s.t < t_end - t_eps);
        if (i % stride == 0 || finished) {
            rec.rows.push_back(sample_row(s, p, norms, t0, clip_window));
            clip_window = 0.0;
            if (opt.observer) opt.observer(s);
        }
    }
    return rec;
}

NonlinearRhs nonlinear_rhs(const SimulationState& s, const ModelParams& p, bool dealias) {
    StepControl ctl;
    ctl.dealias = dealias;
    ctl.dt = 1.0;  // unused by the evaluation
    Stepper stepper(s.u.grid, p, ctl);
    SpectralField nu_hat(s.u.grid), nv_hat(s.u.grid);
    const SpectralField u_hat = transform(s.u);
    const SpectralField v_hat = transform(s.v);
    try {
        stepper.nonlinear_hat(s.u, u_hat, v_hat, nu_hat, nv_hat);
    } catch (const IntegrationAbort& e) {
        throw IntegrationAbort(e.what(), s.t);
    }
    return {inverse_transform(nu_hat), inverse_transform(nv_hat)};
}

}  // namespace ks
