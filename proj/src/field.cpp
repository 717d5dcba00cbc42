#include "ks/field.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <utility>

namespace ks {

namespace {
const double kPi = 3.14159265358979323846;

bool power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

// Plans are cached per grid shape and executed through the new-array
// interface; FFTW_UNALIGNED keeps them valid for any buffer.
struct Plans {
    fftw_plan fwd = nullptr;
    fftw_plan bwd = nullptr;
};

std::mutex g_plan_mutex;

Plans& plans_for(const Grid& g) {
    static std::map<std::pair<int, int>, Plans> cache;
    std::scoped_lock lock(g_plan_mutex);
    const auto key = std::make_pair(g.dim, g.points_per_axis);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    int n[3] = {g.points_per_axis, g.points_per_axis, g.points_per_axis};
    double* rbuf = fftw_alloc_real(g.total_points());
    fftw_complex* cbuf = fftw_alloc_complex(g.spectral_size());
    Plans p;
    p.fwd = fftw_plan_dft_r2c(g.dim, n, rbuf, cbuf, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.bwd = fftw_plan_dft_c2r(g.dim, n, cbuf, rbuf, FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_free(cbuf);
    fftw_free(rbuf);
    return cache.emplace(key, p).first->second;
}

// Signed integer mode along `axis` for a flattened spectral index.
inline int mode_at(const Grid& g, std::size_t idx, int axis) {
    const int n = g.points_per_axis;
    const int nh = n / 2 + 1;
    std::size_t stride = 1;
    for (int j = g.dim - 1; j > axis; --j) stride *= (j == g.dim - 1) ? nh : n;
    const int extent = (axis == g.dim - 1) ? nh : n;
    const int m = static_cast<int>((idx / stride) % extent);
    if (axis == g.dim - 1) return m;  // half axis stores 0..n/2
    return m < n / 2 ? m : m - n;
}
}  // namespace

Grid::Grid(int dim_, int points, double length)
    : dim(dim_), points_per_axis(points), box_length(length) {
    if (dim < 1 || dim > 3) throw std::invalid_argument("grid dim must be 1, 2 or 3");
    if (points < 8 || !power_of_two(points))
        throw std::invalid_argument("points_per_axis must be a power of two >= 8");
    if (!(length > 0.0) || !std::isfinite(length))
        throw std::invalid_argument("box_length must be positive and finite");
}

std::size_t Grid::total_points() const {
    std::size_t t = 1;
    for (int j = 0; j < dim; ++j) t *= static_cast<std::size_t>(points_per_axis);
    return t;
}

std::size_t Grid::spectral_size() const {
    std::size_t t = static_cast<std::size_t>(points_per_axis) / 2 + 1;
    for (int j = 0; j < dim - 1; ++j) t *= static_cast<std::size_t>(points_per_axis);
    return t;
}

double Grid::k_max() const { return kPi * points_per_axis / box_length; }

ScalarField::ScalarField(const Grid& g, double fill) : grid(g), values(g.total_points(), fill) {}

ScalarField::ScalarField(const Grid& g, std::vector<double> v) : grid(g), values(std::move(v)) {
    if (values.size() != grid.total_points())
        throw std::invalid_argument("sample count does not match grid");
}

SpectralField::SpectralField(const Grid& g) : grid(g), coeff(g.spectral_size()) {}

SpectralField transform(const ScalarField& f) {
    if (f.values.size() != f.grid.total_points())
        throw std::invalid_argument("sample count does not match grid");
    double probe = 0.0;
    for (double x : f.values) probe += x;
    if (!std::isfinite(probe)) throw std::invalid_argument("transform: non-finite samples");

    SpectralField out(f.grid);
    Plans& p = plans_for(f.grid);
    // Out-of-place r2c preserves its input.
    fftw_execute_dft_r2c(p.fwd, const_cast<double*>(f.values.data()),
                         reinterpret_cast<fftw_complex*>(out.coeff.data()));
    return out;
}

ScalarField inverse_transform(const SpectralField& F) {
    if (F.coeff.size() != F.grid.spectral_size())
        throw std::invalid_argument("coefficient count does not match grid");
    // c2r destroys its input, so run it on a scratch copy.
    std::vector<std::complex<double>> scratch(F.coeff);
    ScalarField out(F.grid);
    Plans& p = plans_for(F.grid);
    fftw_execute_dft_c2r(p.bwd, reinterpret_cast<fftw_complex*>(scratch.data()),
                         out.values.data());
    const double scale = 1.0 / static_cast<double>(F.grid.total_points());
    for (double& x : out.values) x *= scale;
    return out;
}

std::vector<double> wavenumbers(const Grid& g, int axis) {
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("axis out of range");
    const double base = 2.0 * kPi / g.box_length;
    std::vector<double> k(g.spectral_size());
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = base * mode_at(g, i, axis);
    return k;
}

std::vector<double> derivative_wavenumbers(const Grid& g, int axis) {
    if (axis < 0 || axis >= g.dim) throw std::invalid_argument("axis out of range");
    const double base = 2.0 * kPi / g.box_length;
    const int nyq = g.points_per_axis / 2;
    std::vector<double> k(g.spectral_size());
    for (std::size_t i = 0; i < k.size(); ++i) {
        const int m = mode_at(g, i, axis);
        k[i] = (m == nyq || m == -nyq) ? 0.0 : base * m;
    }
    return k;
}

std::vector<double> squared_wavenumbers(const Grid& g) {
    std::vector<double> k2(g.spectral_size(), 0.0);
    for (int axis = 0; axis < g.dim; ++axis) {
        const std::vector<double> k = derivative_wavenumbers(g, axis);
        for (std::size_t i = 0; i < k2.size(); ++i) k2[i] += k[i] * k[i];
    }
    return k2;
}

std::vector<std::uint8_t> dealias_mask(const Grid& g) {
    const int cutoff = g.points_per_axis / 3;
    std::vector<std::uint8_t> mask(g.spectral_size(), 1);
    for (int axis = 0; axis < g.dim; ++axis) {
        for (std::size_t i = 0; i < mask.size(); ++i) {
            if (std::abs(mode_at(g, i, axis)) > cutoff) mask[i] = 0;
        }
    }
    return mask;
}

void dealias_two_thirds(SpectralField& F) {
    const std::vector<std::uint8_t> mask = dealias_mask(F.grid);
    for (std::size_t i = 0; i < F.coeff.size(); ++i) {
        if (!mask[i]) F.coeff[i] = 0.0;
    }
}

SpectralField spectral_derivative(const SpectralField& F, int axis) {
    const std::vector<double> k = derivative_wavenumbers(F.grid, axis);
    SpectralField out(F.grid);
    for (std::size_t i = 0; i < out.coeff.size(); ++i) {
        // multiply by i*k
        out.coeff[i] = std::complex<double>(-k[i] * F.coeff[i].imag(),
                                            k[i] * F.coeff[i].real());
    }
    return out;
}

std::vector<ScalarField> gradient(const ScalarField& f) {
    const SpectralField F = transform(f);
    std::vector<ScalarField> g;
    g.reserve(f.grid.dim);
    for (int axis = 0; axis < f.grid.dim; ++axis)
        g.push_back(inverse_transform(spectral_derivative(F, axis)));
    return g;
}

ScalarField divergence(const std::vector<ScalarField>& F) {
    if (F.empty()) throw std::invalid_argument("divergence: empty component list");
    const Grid& g = F.front().grid;
    if (static_cast<int>(F.size()) != g.dim)
        throw std::invalid_argument("divergence: component count must equal dim");
    SpectralField acc(g);
    for (int axis = 0; axis < g.dim; ++axis) {
        if (F[axis].grid != g) throw std::invalid_argument("divergence: mismatched grids");
        const SpectralField d = spectral_derivative(transform(F[axis]), axis);
        for (std::size_t i = 0; i < acc.coeff.size(); ++i) acc.coeff[i] += d.coeff[i];
    }
    return inverse_transform(acc);
}

ScalarField laplacian(const ScalarField& f) {
    SpectralField F = transform(f);
    const std::vector<double> k2 = squared_wavenumbers(f.grid);
    for (std::size_t i = 0; i < F.coeff.size(); ++i) F.coeff[i] *= -k2[i];
    return inverse_transform(F);
}

double sup_norm(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.values) s = std::max(s, std::abs(x));
    return s;
}

double sup_norm(const std::vector<ScalarField>& F) {
    if (F.empty()) return 0.0;
    const std::size_t n = F.front().values.size();
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double m2 = 0.0;
        for (const ScalarField& c : F) m2 += c.values[i] * c.values[i];
        s = std::max(s, m2);
    }
    return std::sqrt(s);
}

double inf_value(const ScalarField& f) {
    double s = f.values.empty() ? 0.0 : f.values.front();
    for (double x : f.values) s = std::min(s, x);
    return s;
}

double mean(const ScalarField& f) {
    double s = 0.0;
    for (double x : f.values) s += x;
    return s / static_cast<double>(f.values.size());
}

bool all_finite(const ScalarField& f) {
    double probe = 0.0;
    for (double x : f.values) probe += x;
    return std::isfinite(probe);
}

}  // namespace ks
