#ifndef KS_FIELD_HPP
#define KS_FIELD_HPP

#include <complex>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace ks {

/** Uniform periodic grid on the box [0,L)^dim with the same power-of-two
 *  point count along every axis. */
struct Grid {
    int dim = 1;
    int points_per_axis = 8;
    double box_length = 1.0;

    Grid() = default;
    Grid(int dim_, int points, double length);  // validates, throws std::invalid_argument

    std::size_t total_points() const;
    // Real-to-complex storage: full resolution on leading axes, n/2+1 on the last.
    std::size_t spectral_size() const;
    double spacing() const { return box_length / points_per_axis; }
    double k_max() const;  // Nyquist wavenumber pi*n/L
    double coordinate(int index) const { return spacing() * index; }

    bool operator==(const Grid&) const = default;
};

/** Real samples on a Grid, row-major axis order. */
struct ScalarField {
    Grid grid;
    std::vector<double> values;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0);
    ScalarField(const Grid& g, std::vector<double> v);
};

/** Half-spectrum Fourier coefficients of a real field (r2c layout along the
 *  last axis; the conjugate half is implicit). Unnormalized forward
 *  convention: the k=0 entry equals the sum of the samples. */
struct SpectralField {
    Grid grid;
    std::vector<std::complex<double>> coeff;

    SpectralField() = default;
    explicit SpectralField(const Grid& g);
};

SpectralField transform(const ScalarField& f);          // throws on non-finite input
ScalarField inverse_transform(const SpectralField& F);  // normalizes by total_points

/** Per-mode tables over the spectral layout. Wavenumbers are
 *  k_j = 2 pi m_j / L with m_j in [-n/2, n/2) on full axes and [0, n/2] on
 *  the stored half axis. Odd-derivative multipliers vanish on the Nyquist
 *  band; the Laplacian table follows the same convention so that the
 *  divergence of the gradient reproduces it exactly. */
std::vector<double> wavenumbers(const Grid& g, int axis);
std::vector<double> derivative_wavenumbers(const Grid& g, int axis);  // Nyquist zeroed
std::vector<double> squared_wavenumbers(const Grid& g);               // Nyquist zeroed
std::vector<std::uint8_t> dealias_mask(const Grid& g);  // 1 = keep (|m_j| <= n/3 on all axes)

void dealias_two_thirds(SpectralField& F);

/// Spectral derivative along one axis: coefficients scaled by i k_axis.
SpectralField spectral_derivative(const SpectralField& F, int axis);

std::vector<ScalarField> gradient(const ScalarField& f);
ScalarField divergence(const std::vector<ScalarField>& F);
ScalarField laplacian(const ScalarField& f);

double sup_norm(const ScalarField& f);                 // max |value|
double sup_norm(const std::vector<ScalarField>& F);    // max Euclidean magnitude
double inf_value(const ScalarField& f);                // min value
double mean(const ScalarField& f);
bool all_finite(const ScalarField& f);

}  // namespace ks

#endif
