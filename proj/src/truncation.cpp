#include "shjb/truncation.hpp"

#include <cmath>
#include <stdexcept>

namespace shjb {

double embed_constant(double k, const TorusGrid& grid) {
    if (k <= 0.5 * grid.dim + 1.0)
        throw std::invalid_argument("embed_constant: need k > n/2 + 1");
    double sum = 0.0;
    for (std::size_t flat = 0; flat < grid.total_points(); ++flat) {
        double s = wave_sq(grid, flat);
        sum += s * std::pow(1.0 + s, -k);
    }
    return std::sqrt(sum) * std::pow(two_pi, -0.5 * grid.dim);
}

CutoffSpec make_cutoff(double r, double k, const TorusGrid& grid) {
    if (r <= 0.0) throw std::invalid_argument("cutoff: r must be > 0");
    return CutoffSpec{r, 15.0 / 8.0, embed_constant(k, grid)};
}

double theta(const CutoffSpec& spec, double x) {
    if (x < 0.0) throw std::invalid_argument("theta: x must be >= 0");
    if (x <= spec.r) return 1.0;
    if (x >= spec.r + 1.0) return 0.0;
    double t = x - spec.r;
    return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double theta_prime(const CutoffSpec& spec, double x) {
    if (x < 0.0) throw std::invalid_argument("theta_prime: x must be >= 0");
    if (x <= spec.r || x >= spec.r + 1.0) return 0.0;
    double t = x - spec.r;
    return -30.0 * t * t * (t - 1.0) * (t - 1.0);
}

namespace {

SpatialField half_grad_square(const SpectralField& u_hat) {
    SpatialField acc = make_field(u_hat.grid);
    for (int d = 0; d < u_hat.grid.dim; ++d) {
        SpatialField du = to_physical(derivative(u_hat, d));
        acc = acc + multiply_dealiased(du, du);
    }
    return 0.5 * acc;
}

} // namespace

SpatialField truncated_nonlinearity(const CutoffSpec* spec, const SpectralField& u_hat) {
    SpatialField nl = half_grad_square(u_hat);
    if (spec) {
        double factor = theta(*spec, grad_sup_norm(u_hat));
        for (auto& v : nl.values) v *= factor;
    }
    return nl;
}

SpatialField truncated_nonlinearity(const CutoffSpec* spec, const SpatialField& u) {
    return truncated_nonlinearity(spec, to_spectral(u));
}

StoppingEvent stopping_monitor(std::span<const double> times,
                               std::span<const double> hk_norms, const CutoffSpec& spec) {
    if (times.size() != hk_norms.size())
        throw std::invalid_argument("stopping_monitor: series length mismatch");
    if (spec.sobolev_constant <= 0.0)
        throw std::invalid_argument("stopping_monitor: cutoff has no Sobolev constant");
    const double threshold = spec.r / spec.sobolev_constant;
    for (std::size_t m = 0; m < hk_norms.size(); ++m) {
        if (hk_norms[m] < threshold) continue;
        StoppingEvent ev;
        ev.hit = true;
        if (m == 0 || hk_norms[m] == hk_norms[m - 1]) {
            ev.time = times[m];
        } else {
            double w = (threshold - hk_norms[m - 1]) / (hk_norms[m] - hk_norms[m - 1]);
            ev.time = times[m - 1] + w * (times[m] - times[m - 1]);
        }
        return ev;
    }
    return StoppingEvent{};
}

} // namespace shjb
