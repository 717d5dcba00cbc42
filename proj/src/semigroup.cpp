#include "ks/semigroup.hpp"

#include <cmath>
#include <stdexcept>

namespace ks {

namespace {
const double kPi = 3.14159265358979323846;
}

SemigroupOperator::SemigroupOperator(const Grid& grid, double rho, double t)
    : grid_(grid), rho_(rho), t_(t) {
    if (!(rho >= 0.0) || !std::isfinite(rho))
        throw std::domain_error("semigroup shift rho must be finite and >= 0");
    if (!(t >= 0.0) || !std::isfinite(t))
        throw std::domain_error("semigroup time must be finite and >= 0");
    mult_.assign(grid_.spectral_size(), 0.0);
    // True |k|^2 including the Nyquist band: the multiplier is a kernel, not
    // a derivative, so every stored mode is damped by its own rate.
    std::vector<double> k2(grid_.spectral_size(), 0.0);
    for (int axis = 0; axis < grid_.dim; ++axis) {
        const std::vector<double> k = wavenumbers(grid_, axis);
        for (std::size_t i = 0; i < k2.size(); ++i) k2[i] += k[i] * k[i];
    }
    for (std::size_t i = 0; i < mult_.size(); ++i) mult_[i] = std::exp(-(k2[i] + rho_) * t_);
}

void SemigroupOperator::apply_in_place(SpectralField& F) const {
    if (F.grid != grid_) throw std::invalid_argument("semigroup: mismatched grid");
    for (std::size_t i = 0; i < F.coeff.size(); ++i) F.coeff[i] *= mult_[i];
}

ScalarField SemigroupOperator::apply(const ScalarField& f) const {
    if (f.grid != grid_) throw std::invalid_argument("semigroup: mismatched grid");
    if (t_ == 0.0) return f;
    SpectralField F = transform(f);
    apply_in_place(F);
    return inverse_transform(F);
}

std::vector<ScalarField> SemigroupOperator::apply_gradient(const ScalarField& f) const {
    if (f.grid != grid_) throw std::invalid_argument("semigroup: mismatched grid");
    if (!(t_ > 0.0)) throw std::domain_error("apply_gradient requires t > 0");
    SpectralField F = transform(f);
    apply_in_place(F);
    std::vector<ScalarField> g;
    g.reserve(grid_.dim);
    for (int axis = 0; axis < grid_.dim; ++axis)
        g.push_back(inverse_transform(spectral_derivative(F, axis)));
    return g;
}

ScalarField SemigroupOperator::apply_divergence(const std::vector<ScalarField>& F) const {
    if (!(t_ > 0.0)) throw std::domain_error("apply_divergence requires t > 0");
    if (static_cast<int>(F.size()) != grid_.dim)
        throw std::invalid_argument("apply_divergence: component count must equal dim");
    SpectralField acc(grid_);
    for (int axis = 0; axis < grid_.dim; ++axis) {
        if (F[axis].grid != grid_) throw std::invalid_argument("semigroup: mismatched grid");
        const SpectralField d = spectral_derivative(transform(F[axis]), axis);
        for (std::size_t i = 0; i < acc.coeff.size(); ++i) acc.coeff[i] += d.coeff[i];
    }
    apply_in_place(acc);
    return inverse_transform(acc);
}

double box_crossing_time(const Grid& g) {
    return g.box_length * g.box_length / (4.0 * kPi * kPi);
}

double lemma_time_cap(const Grid& g) { return 0.01 * box_crossing_time(g); }

}  // namespace ks
