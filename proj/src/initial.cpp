#include "ks/initial.hpp"

#include <cmath>
#include <random>

namespace ks {

namespace {

// 53-bit uniforms drawn explicitly from the engine: the standard specifies
// mt19937_64 bit-exactly, so seeded fields are reproducible everywhere.
double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ScalarField white_noise(const Grid& g, std::mt19937_64& rng) {
    ScalarField f(g);
    for (double& x : f.values) x = uniform01(rng);
    return f;
}

// Low-pass to modes |m_j| <= cutoff, then affine rescale to [lo, hi].
ScalarField smooth_band(const Grid& g, std::mt19937_64& rng, int cutoff, double lo, double hi) {
    SpectralField F = transform(white_noise(g, rng));
    for (int axis = 0; axis < g.dim; ++axis) {
        const std::vector<double> k = wavenumbers(g, axis);
        const double base = 2.0 * 3.14159265358979323846 / g.box_length;
        for (std::size_t i = 0; i < F.coeff.size(); ++i) {
            if (std::abs(k[i] / base) > cutoff + 0.5) F.coeff[i] = 0.0;
        }
    }
    ScalarField f = inverse_transform(F);
    double fmin = f.values.front(), fmax = f.values.front();
    for (double x : f.values) {
        fmin = std::min(fmin, x);
        fmax = std::max(fmax, x);
    }
    const double span = fmax - fmin;
    for (double& x : f.values) {
        x = span > 0.0 ? lo + (hi - lo) * (x - fmin) / span : 0.5 * (lo + hi);
    }
    return f;
}

ScalarField bump_field(const Grid& g, const InitialSpec& spec) {
    std::vector<double> center = spec.center;
    if (center.empty()) center.assign(g.dim, 0.5 * g.box_length);
    if (static_cast<int>(center.size()) != g.dim)
        throw std::invalid_argument("bump center must have one entry per axis");
    ScalarField f(g);
    const int n = g.points_per_axis;
    const double L = g.box_length;
    for (std::size_t flat = 0; flat < f.values.size(); ++flat) {
        std::size_t rem = flat;
        double d2 = 0.0;
        for (int axis = g.dim - 1; axis >= 0; --axis) {
            const int i = static_cast<int>(rem % n);
            rem /= n;
            double d = std::abs(g.coordinate(i) - center[axis]);
            d = std::min(d, L - d);  // periodic minimum image
            d2 += d * d;
        }
        f.values[flat] = spec.bump_floor +
                         spec.height * std::exp(-d2 / (2.0 * spec.width * spec.width));
    }
    return f;
}

}  // namespace

SimulationState make_initial(const ScenarioConfig& cfg) {
    const Grid g(cfg.params.dim, cfg.grid_points, cfg.grid_length);
    const Equilibrium eq = equilibrium(cfg.params);
    std::mt19937_64 rng(cfg.seed);

    SimulationState s;
    s.t = 0.0;

    using K = InitialSpec::Kind;
    switch (cfg.init.kind) {
        case K::Constant:
            s.u = ScalarField(g, cfg.init.value);
            break;
        case K::Equilibrium:
            s.u = ScalarField(g, eq.u_star);
            break;
        case K::PerturbedEquilibrium: {
            s.u = smooth_band(g, rng, cfg.init.smoothing, eq.u_star - cfg.init.amplitude,
                              eq.u_star + cfg.init.amplitude);
            break;
        }
        case K::RandomBand:
            s.u = smooth_band(g, rng, cfg.init.smoothing, cfg.init.band_min, cfg.init.band_max);
            break;
        case K::Bump:
            s.u = bump_field(g, cfg.init);
            break;
    }
    for (double& x : s.u.values) x = std::max(x, 0.0);

    using V = InitialSpec::V0;
    switch (cfg.init.kind == K::Equilibrium ? V::Equilibrium : cfg.init.v0) {
        case V::Zero:
            s.v = ScalarField(g, 0.0);
            break;
        case V::Equilibrium:
            s.v = ScalarField(g, eq.v_star);
            break;
        case V::Proportional: {
            s.v = s.u;
            const double scale = cfg.params.mu / cfg.params.lambda;
            for (double& x : s.v.values) x *= scale;
            break;
        }
    }
    return s;
}

}  // namespace ks
