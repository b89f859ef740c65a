#include "shjb/field.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace shjb {

namespace {

// FFTW plan cache keyed by (dim, N). Plans carry FFTW_UNALIGNED so the
// new-array execute functions accept plain std::vector storage; execution
// is thread safe, plan creation is serialized.
struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

PlanPair& plans_for(const TorusGrid& grid) {
    static std::mutex mutex;
    static std::map<std::pair<int, int>, PlanPair> cache;
    std::lock_guard lock(mutex);
    auto key = std::make_pair(grid.dim, grid.points_per_axis);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;

    const std::size_t total = grid.total_points();
    std::vector<std::complex<double>> in(total), out(total);
    std::vector<int> dims(grid.dim, grid.points_per_axis);
    PlanPair p;
    p.forward = fftw_plan_dft(grid.dim, dims.data(),
                              reinterpret_cast<fftw_complex*>(in.data()),
                              reinterpret_cast<fftw_complex*>(out.data()),
                              FFTW_FORWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    p.backward = fftw_plan_dft(grid.dim, dims.data(),
                               reinterpret_cast<fftw_complex*>(in.data()),
                               reinterpret_cast<fftw_complex*>(out.data()),
                               FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    if (!p.forward || !p.backward) throw std::runtime_error("fftw plan creation failed");
    return cache.emplace(key, p).first->second;
}

void check_same_grid(const TorusGrid& a, const TorusGrid& b) {
    if (!(a == b)) throw std::invalid_argument("grid mismatch");
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

} // namespace

std::size_t TorusGrid::total_points() const {
    std::size_t total = 1;
    for (int d = 0; d < dim; ++d) total *= static_cast<std::size_t>(points_per_axis);
    return total;
}

TorusGrid make_grid(int dim, int points_per_axis) {
    if (dim < 1) throw std::invalid_argument("grid dim must be >= 1");
    if (points_per_axis < 8 || !is_power_of_two(points_per_axis))
        throw std::invalid_argument("points_per_axis must be a power of two >= 8");
    return TorusGrid{dim, points_per_axis};
}

SpatialField make_field(const TorusGrid& grid, double fill) {
    return SpatialField{grid, std::vector<double>(grid.total_points(), fill)};
}

SpatialField sample(const TorusGrid& grid,
                    const std::function<double(std::span<const double>)>& f) {
    SpatialField out = make_field(grid);
    const int N = grid.points_per_axis;
    std::vector<double> x(grid.dim);
    std::vector<int> idx(grid.dim, 0);
    for (std::size_t flat = 0; flat < out.values.size(); ++flat) {
        std::size_t rest = flat;
        for (int d = grid.dim - 1; d >= 0; --d) {
            idx[d] = static_cast<int>(rest % N);
            rest /= N;
        }
        for (int d = 0; d < grid.dim; ++d) x[d] = two_pi * idx[d] / N;
        out.values[flat] = f(x);
    }
    return out;
}

bool all_finite(const SpatialField& f) {
    return std::all_of(f.values.begin(), f.values.end(),
                       [](double v) { return std::isfinite(v); });
}

void wavevector(const TorusGrid& grid, std::size_t flat, std::span<int> out) {
    const int N = grid.points_per_axis;
    for (int d = grid.dim - 1; d >= 0; --d) {
        out[d] = wavenumber(static_cast<int>(flat % N), N);
        flat /= N;
    }
}

double wave_sq(const TorusGrid& grid, std::size_t flat) {
    const int N = grid.points_per_axis;
    double s = 0.0;
    for (int d = grid.dim - 1; d >= 0; --d) {
        double xi = wavenumber(static_cast<int>(flat % N), N);
        s += xi * xi;
        flat /= N;
    }
    return s;
}

SpectralField to_spectral(const SpatialField& f) {
    if (!all_finite(f)) throw std::invalid_argument("to_spectral: non-finite values");
    const std::size_t total = f.grid.total_points();
    std::vector<std::complex<double>> in(total), out(total);
    for (std::size_t j = 0; j < total; ++j) in[j] = f.values[j];
    fftw_execute_dft(plans_for(f.grid).forward,
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = std::pow(two_pi, 0.5 * f.grid.dim) / static_cast<double>(total);
    for (auto& c : out) c *= scale;
    return SpectralField{f.grid, std::move(out)};
}

namespace {

std::vector<std::complex<double>> raw_inverse(const SpectralField& F) {
    const std::size_t total = F.grid.total_points();
    std::vector<std::complex<double>> in(F.coefficients), out(total);
    fftw_execute_dft(plans_for(F.grid).backward,
                     reinterpret_cast<fftw_complex*>(in.data()),
                     reinterpret_cast<fftw_complex*>(out.data()));
    const double scale = std::pow(two_pi, -0.5 * F.grid.dim);
    for (auto& c : out) c *= scale;
    return out;
}

} // namespace

SpatialField to_physical(const SpectralField& F) {
    auto raw = raw_inverse(F);
    SpatialField out = make_field(F.grid);
    for (std::size_t j = 0; j < raw.size(); ++j) out.values[j] = raw[j].real();
    if (!all_finite(out)) throw std::invalid_argument("to_physical: non-finite values");
    return out;
}

double max_imag_part(const SpectralField& F) {
    auto raw = raw_inverse(F);
    double m = 0.0;
    for (const auto& c : raw) m = std::max(m, std::abs(c.imag()));
    return m;
}

SpectralField derivative(const SpectralField& F, int axis) {
    if (axis < 0 || axis >= F.grid.dim) throw std::invalid_argument("derivative: bad axis");
    const int N = F.grid.points_per_axis;
    SpectralField out = F;
    std::vector<int> xi(F.grid.dim);
    for (std::size_t flat = 0; flat < out.coefficients.size(); ++flat) {
        wavevector(F.grid, flat, xi);
        if (xi[axis] == -N / 2) {
            out.coefficients[flat] = 0.0;
        } else {
            out.coefficients[flat] *= std::complex<double>(0.0, xi[axis]);
        }
    }
    return out;
}

SpectralField laplacian(const SpectralField& F) {
    SpectralField out = F;
    for (std::size_t flat = 0; flat < out.coefficients.size(); ++flat)
        out.coefficients[flat] *= -wave_sq(F.grid, flat);
    return out;
}

SpectralField fractional_lambda(const SpectralField& F, double s) {
    if (s < 0.0) throw std::invalid_argument("fractional_lambda: s must be >= 0");
    SpectralField out = F;
    for (std::size_t flat = 0; flat < out.coefficients.size(); ++flat) {
        double q = wave_sq(F.grid, flat);
        out.coefficients[flat] *= std::pow(q, 0.5 * s);
    }
    return out;
}

std::vector<double> linear_symbol(const TorusGrid& grid, double mu, double gamma,
                                  int k_prime) {
    if (mu <= 0.0) throw std::invalid_argument("linear_symbol: mu must be > 0");
    if (gamma < 0.0) throw std::invalid_argument("linear_symbol: gamma must be >= 0");
    if (k_prime % 2 == 0)
        throw std::invalid_argument("linear_symbol: k_prime must be odd");
    std::vector<double> sym(grid.total_points());
    for (std::size_t flat = 0; flat < sym.size(); ++flat) {
        double s = wave_sq(grid, flat);
        sym[flat] = -mu * s - gamma * std::pow(s, k_prime);
    }
    return sym;
}

SpectralField apply_symbol(const SpectralField& F, std::span<const double> symbol) {
    if (symbol.size() != F.coefficients.size())
        throw std::invalid_argument("apply_symbol: size mismatch");
    SpectralField out = F;
    for (std::size_t j = 0; j < symbol.size(); ++j) out.coefficients[j] *= symbol[j];
    return out;
}

SpectralField apply_symbol_exp(const SpectralField& F, std::span<const double> symbol,
                               double t) {
    if (symbol.size() != F.coefficients.size())
        throw std::invalid_argument("apply_symbol_exp: size mismatch");
    SpectralField out = F;
    for (std::size_t j = 0; j < symbol.size(); ++j)
        out.coefficients[j] *= std::exp(t * symbol[j]);
    return out;
}

SpectralField dealias(const SpectralField& F) {
    const double cutoff = F.grid.points_per_axis / 3.0;
    SpectralField out = F;
    std::vector<int> xi(F.grid.dim);
    for (std::size_t flat = 0; flat < out.coefficients.size(); ++flat) {
        wavevector(F.grid, flat, xi);
        for (int d = 0; d < F.grid.dim; ++d) {
            if (std::abs(xi[d]) > cutoff) {
                out.coefficients[flat] = 0.0;
                break;
            }
        }
    }
    return out;
}

double l2_norm(const SpatialField& f) {
    double s = 0.0;
    for (double v : f.values) s += v * v;
    return std::sqrt(s * std::pow(f.grid.spacing(), f.grid.dim));
}

double l2_norm(const SpectralField& F) {
    double s = 0.0;
    for (const auto& c : F.coefficients) s += std::norm(c);
    return std::sqrt(s);
}

double sobolev_norm(const SpectralField& F, double k) {
    if (k < 0.0) throw std::invalid_argument("sobolev_norm: k must be >= 0");
    double s = 0.0;
    for (std::size_t flat = 0; flat < F.coefficients.size(); ++flat)
        s += std::pow(1.0 + wave_sq(F.grid, flat), k) * std::norm(F.coefficients[flat]);
    return std::sqrt(s);
}

double sobolev_norm(const SpatialField& f, double k) {
    return sobolev_norm(to_spectral(f), k);
}

double sup_norm(const SpatialField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

std::vector<SpatialField> gradient(const SpatialField& f) {
    SpectralField F = to_spectral(f);
    std::vector<SpatialField> out;
    out.reserve(f.grid.dim);
    for (int d = 0; d < f.grid.dim; ++d) out.push_back(to_physical(derivative(F, d)));
    return out;
}

double grad_sup_norm(const SpectralField& F) {
    std::vector<SpatialField> g;
    g.reserve(F.grid.dim);
    for (int d = 0; d < F.grid.dim; ++d) g.push_back(to_physical(derivative(F, d)));
    double m = 0.0;
    for (std::size_t j = 0; j < g[0].values.size(); ++j) {
        double s = 0.0;
        for (int d = 0; d < F.grid.dim; ++d) s += g[d].values[j] * g[d].values[j];
        m = std::max(m, s);
    }
    return std::sqrt(m);
}

double grad_sup_norm(const SpatialField& f) { return grad_sup_norm(to_spectral(f)); }

double mean_value(const SpatialField& f) {
    double s = 0.0;
    for (double v : f.values) s += v;
    return s / static_cast<double>(f.values.size());
}

double inner_product(const SpatialField& f, const SpatialField& g) {
    check_same_grid(f.grid, g.grid);
    double s = 0.0;
    for (std::size_t j = 0; j < f.values.size(); ++j) s += f.values[j] * g.values[j];
    return s * std::pow(f.grid.spacing(), f.grid.dim);
}

SpatialField operator+(const SpatialField& f, const SpatialField& g) {
    check_same_grid(f.grid, g.grid);
    SpatialField out = f;
    for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] += g.values[j];
    return out;
}

SpatialField operator-(const SpatialField& f, const SpatialField& g) {
    check_same_grid(f.grid, g.grid);
    SpatialField out = f;
    for (std::size_t j = 0; j < out.values.size(); ++j) out.values[j] -= g.values[j];
    return out;
}

SpatialField operator*(double c, const SpatialField& f) {
    SpatialField out = f;
    for (auto& v : out.values) v *= c;
    return out;
}

SpectralField operator+(const SpectralField& F, const SpectralField& G) {
    check_same_grid(F.grid, G.grid);
    SpectralField out = F;
    for (std::size_t j = 0; j < out.coefficients.size(); ++j)
        out.coefficients[j] += G.coefficients[j];
    return out;
}

SpectralField operator-(const SpectralField& F, const SpectralField& G) {
    check_same_grid(F.grid, G.grid);
    SpectralField out = F;
    for (std::size_t j = 0; j < out.coefficients.size(); ++j)
        out.coefficients[j] -= G.coefficients[j];
    return out;
}

SpectralField operator*(double c, const SpectralField& F) {
    SpectralField out = F;
    for (auto& v : out.coefficients) v *= c;
    return out;
}

void axpy(double c, const SpatialField& x, SpatialField& y) {
    check_same_grid(x.grid, y.grid);
    for (std::size_t j = 0; j < y.values.size(); ++j) y.values[j] += c * x.values[j];
}

void axpy(double c, const SpectralField& x, SpectralField& y) {
    check_same_grid(x.grid, y.grid);
    for (std::size_t j = 0; j < y.coefficients.size(); ++j)
        y.coefficients[j] += c * x.coefficients[j];
}

SpatialField multiply_dealiased(const SpatialField& f, const SpatialField& g) {
    check_same_grid(f.grid, g.grid);
    SpatialField prod = f;
    for (std::size_t j = 0; j < prod.values.size(); ++j) prod.values[j] *= g.values[j];
    return to_physical(dealias(to_spectral(prod)));
}

} // namespace shjb
