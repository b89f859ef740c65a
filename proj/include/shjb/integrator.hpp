#pragma once

// Time stepping for the transported HJB dynamics
//
//   du = sum_i L_i u o dW_i
//      + ( V + mu*Lap u + gamma*Lap^{k'} u - (1/2) theta_r(|grad u|_inf) |grad u|^2 ) ds
//
// in two discretizations of the same path:
//
//   ito_exp_em  - Ito form with the correction (1/2) sum_i L_i^2 u in the
//                 drift; the stiff part mu*Lap + gamma*Lap^{k'} is
//                 integrated exactly by a mode-wise exponential factor,
//                 everything else is explicit Euler-Maruyama;
//   strat_heun  - Stratonovich predictor-corrector (Heun) with the full
//                 drift, stiff part included, treated explicitly; configs
//                 are rejected when dt * max|symbol| > 2.

#include "shjb/config.hpp"
#include "shjb/noise.hpp"

namespace shjb {

// Non-stiff Ito drift: V + (1/2) sum_i L_i^2 u - (1/2) theta |grad u|^2.
// The stiff linear part lives in the exponential factor, not here.
SpatialField ito_drift(const SolverConfig& cfg, const SpatialField& u);

// One exponential Euler-Maruyama step:
//   u+ = E ( u + dt * drift(u) + sum_i (L_i u) dW_i ),  E = exp(dt * symbol).
SpatialField step_ito_exp_em(const SolverConfig& cfg, const SpatialField& u,
                             std::span<const double> dW);

// One Stratonovich Heun step with f = V + mu*Lap u + gamma*Lap^{k'} u
// - (1/2) theta |grad u|^2 (no Ito correction):
//   predictor  p  = u + dt f(u) + sum_i (L_i u) dW_i
//   corrector  u+ = u + dt/2 (f(u)+f(p)) + (1/2) sum_i (L_i u + L_i p) dW_i.
SpatialField step_strat_heun(const SolverConfig& cfg, const SpatialField& u,
                             std::span<const double> dW);

// Runs cfg.steps() steps of the configured scheme against the path, which
// must match (dt, dims, steps >= cfg.steps()). Halts early on blow-up
// (non-finite state or ||u||_{H^k} > 1e6), and, in truncation-respecting
// mode, at the first tau_r crossing. Bit-reproducible in (cfg, path).
Trajectory integrate(const SolverConfig& cfg, const NoisePath& path);

} // namespace shjb
