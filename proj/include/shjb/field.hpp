#pragma once

// Periodic scalar fields on the flat torus [0,2pi)^n in physical and
// Fourier representation, with differential operators realized as
// Fourier multipliers.
//
// Conventions (fixed once, used everywhere):
//   - grid point j has coordinate 2*pi*j/N per axis, row-major layout;
//   - spectral coefficients follow the unitary transform
//       fhat(xi) = (2pi)^{n/2} / N^n * sum_j f(x_j) exp(-i xi.x_j),
//     so that the discrete Parseval identity
//       (2pi/N)^n sum_j |f_j|^2 = sum_xi |fhat(xi)|^2
//     holds exactly and || 1 ||_{L2} = (2pi)^{n/2};
//   - wavevectors run over {-N/2, ..., N/2-1} per axis, stored in FFT
//     order (index k maps to xi = k for k < N/2, else k - N).

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace shjb {

inline constexpr double two_pi = 6.283185307179586476925286766559;

struct TorusGrid {
    int dim = 1;             // n >= 1
    int points_per_axis = 8; // N, a power of two, >= 8

    std::size_t total_points() const;
    double spacing() const { return two_pi / points_per_axis; }
    bool operator==(const TorusGrid&) const = default;
};

// Validates n >= 1, N >= 8 and N a power of two.
TorusGrid make_grid(int dim, int points_per_axis);

struct SpatialField {
    TorusGrid grid;
    std::vector<double> values; // row-major over grid points
};

struct SpectralField {
    TorusGrid grid;
    std::vector<std::complex<double>> coefficients; // FFT mode order
};

SpatialField make_field(const TorusGrid& grid, double fill = 0.0);

// Samples f at the grid points; the callback receives the n coordinates.
SpatialField sample(const TorusGrid& grid,
                    const std::function<double(std::span<const double>)>& f);

bool all_finite(const SpatialField& f);

// -- index / wavevector helpers ---------------------------------------------

// FFT-order index -> signed wavenumber on one axis.
inline int wavenumber(int index, int points) {
    return index < points / 2 ? index : index - points;
}

// Writes the wavevector of a flat coefficient index into out (size dim).
void wavevector(const TorusGrid& grid, std::size_t flat, std::span<int> out);

// |xi|^2 of a flat coefficient index.
double wave_sq(const TorusGrid& grid, std::size_t flat);

// -- transforms ---------------------------------------------------------------

// Throws std::invalid_argument on non-finite input.
SpectralField to_spectral(const SpatialField& f);

// Real part of the inverse transform; see max_imag_part for the reality check.
SpatialField to_physical(const SpectralField& F);

// Largest |Im| of the raw inverse transform, for conjugate-symmetry audits.
double max_imag_part(const SpectralField& F);

// -- multiplier operators -----------------------------------------------------

// d/dx_axis as the multiplier i*xi_axis; the Nyquist mode xi = -N/2 is
// zeroed (the odd multiplier has no symmetric representative there).
SpectralField derivative(const SpectralField& F, int axis);

SpectralField laplacian(const SpectralField& F);

// Lambda^s = (-Laplace)^{s/2}, multiplier |xi|^s, s >= 0.
SpectralField fractional_lambda(const SpectralField& F, double s);

// Per-mode symbol of mu*Laplace + gamma*Laplace^{k'}:
//   -mu*|xi|^2 - gamma*|xi|^(2k').
// k' must be odd (even k' makes gamma*Laplace^{k'} anti-dissipative); all
// entries are <= 0 and the xi = 0 entry is 0.
std::vector<double> linear_symbol(const TorusGrid& grid, double mu,
                                  double gamma, int k_prime);

SpectralField apply_symbol(const SpectralField& F, std::span<const double> symbol);

// Mode-wise multiply by exp(t * symbol).
SpectralField apply_symbol_exp(const SpectralField& F, std::span<const double> symbol,
                               double t);

// 2/3-rule: zero every coefficient with any |xi_axis| > N/3.
SpectralField dealias(const SpectralField& F);

// -- norms and reductions -----------------------------------------------------

double l2_norm(const SpatialField& f);
double l2_norm(const SpectralField& F);

// sqrt( sum_xi (1+|xi|^2)^k |fhat(xi)|^2 ), k >= 0.
double sobolev_norm(const SpatialField& f, double k);
double sobolev_norm(const SpectralField& F, double k);

double sup_norm(const SpatialField& f);

// Grid maximum of the Euclidean norm of the spectral gradient.
double grad_sup_norm(const SpatialField& f);
double grad_sup_norm(const SpectralField& F);

std::vector<SpatialField> gradient(const SpatialField& f);

// Average of f over the torus (the xi=0 mode up to normalization).
double mean_value(const SpatialField& f);

// L2 inner product with the dx measure, (2pi/N)^n sum_j f_j g_j.
double inner_product(const SpatialField& f, const SpatialField& g);

// -- arithmetic ---------------------------------------------------------------

SpatialField operator+(const SpatialField& f, const SpatialField& g);
SpatialField operator-(const SpatialField& f, const SpatialField& g);
SpatialField operator*(double c, const SpatialField& f);
SpectralField operator+(const SpectralField& F, const SpectralField& G);
SpectralField operator-(const SpectralField& F, const SpectralField& G);
SpectralField operator*(double c, const SpectralField& F);
void axpy(double c, const SpatialField& x, SpatialField& y);   // y += c*x
void axpy(double c, const SpectralField& x, SpectralField& y); // y += c*x

// Pointwise product with the 2/3 rule applied to the result.
SpatialField multiply_dealiased(const SpatialField& f, const SpatialField& g);

} // namespace shjb
