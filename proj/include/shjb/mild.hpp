#pragma once

// Mild (Duhamel) formulation of the hyper-regularized dynamics as a fixed
// point u = F u with the semigroup S(t) = exp(t * gamma * Lap^{k'}):
//
//   (Fu)(t_m) = S(t_m) u_0
//             + sum_{j<m} S(t_m - t_j) [ V + mu*Lap u_j + (1/2) sum_i L_i^2 u_j
//                                        - (1/2) theta |grad u_j|^2 ] dt
//             + sum_i sum_{j<m} S(t_m - t_j) (L_i u_j) dW_{i,j}
//
// with left-endpoint quadrature for both convolution integrals (the
// stochastic one is Ito). Picard iteration from u^(0) == u_0 cross-checks
// the time steppers; offered only for gamma > 0, where the semigroup
// smoothing underwrites the contraction.

#include "shjb/config.hpp"
#include "shjb/noise.hpp"

namespace shjb {

struct MildProblem {
    SolverConfig cfg; // gamma > 0 required
    NoisePath path;   // dt == cfg.dt, steps >= cfg.steps()
};

MildProblem make_mild_problem(SolverConfig cfg, NoisePath path);

// Mode-wise multiply by exp(-t * gamma * |xi|^(2k')); S(0) = identity.
SpectralField semigroup_apply(double gamma, int k_prime, double t, const SpectralField& F);

// One application of F to a time grid of cfg.steps()+1 iterates.
std::vector<SpectralField> picard_apply(const MildProblem& prob,
                                        const std::vector<SpectralField>& grid);

struct PicardResult {
    std::vector<SpectralField> iterate; // fixed point on the time grid
    int iterations = 0;
    bool converged = false;
    std::vector<double> update_norms;      // sup_m ||u^(j+1)_m - u^(j)_m||_{H^k}
    std::vector<double> contraction_ratios; // successive update-norm ratios
    double residual = 0.0;                  // sup_m ||F u* - u*||_{H^k}
};

PicardResult fixed_point_solve(const MildProblem& prob, double tol, int max_iter);

} // namespace shjb
