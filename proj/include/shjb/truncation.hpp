#pragma once

// The smooth cut-off theta_r damping the quadratic nonlinearity, the
// discrete Sobolev embedding constant behind the stopping rule
// tau_r = inf{ t : ||u(t)||_{H^k} >= r/C }, and the truncated nonlinearity
// (1/2) theta_r(|grad u|_inf) |grad u|^2.

#include "shjb/field.hpp"

#include <limits>
#include <span>

namespace shjb {

struct CutoffSpec {
    double r = 1.0;
    double lipschitz_bound = 15.0 / 8.0; // exact for the quintic bridge
    double sobolev_constant = 0.0;       // C with |grad u|_inf <= C ||u||_{H^k}
};

// Discrete embedding constant over the resolved modes,
//   C = (2pi)^{-n/2} sqrt( sum_xi |xi|^2 (1+|xi|^2)^{-k} ),
// valid (by Cauchy-Schwarz) for every field representable on the grid.
// Requires k > n/2 + 1.
double embed_constant(double k, const TorusGrid& grid);

CutoffSpec make_cutoff(double r, double k, const TorusGrid& grid);

// theta_r: 1 on [0,r], 0 on [r+1,inf), quintic smoothstep bridge
// 1 - (6t^5 - 15t^4 + 10t^3) on [r,r+1]; C^2 at the seams.
double theta(const CutoffSpec& spec, double x);
double theta_prime(const CutoffSpec& spec, double x);

// (1/2) theta_r(|grad u|_inf) |grad u|^2 with the square dealiased.
// A null spec means no truncation (theta = 1).
SpatialField truncated_nonlinearity(const CutoffSpec* spec, const SpatialField& u);
SpatialField truncated_nonlinearity(const CutoffSpec* spec, const SpectralField& u_hat);

struct StoppingEvent {
    bool hit = false;
    double time = std::numeric_limits<double>::infinity();
};

// First crossing of ||u||_{H^k} >= r/C in a sampled norm series, with
// linear interpolation between the bracketing samples.
StoppingEvent stopping_monitor(std::span<const double> times,
                               std::span<const double> hk_norms, const CutoffSpec& spec);

} // namespace shjb
