#include "shjb/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace shjb {

namespace {

constexpr double blowup_norm_limit = 1e6;

SpatialField noise_term(const SolverConfig& cfg, const SpatialField& u,
                        std::span<const double> dW) {
    SpatialField acc = make_field(cfg.grid);
    if (!cfg.transport) return acc;
    for (int i = 0; i < cfg.grid.dim; ++i)
        axpy(dW[i], apply_L(*cfg.transport, i, u), acc);
    return acc;
}

// Full Stratonovich drift for the Heun scheme; the stiff linear part is
// included explicitly here.
SpatialField strat_drift(const SolverConfig& cfg, const SpatialField& u,
                         std::span<const double> symbol) {
    SpectralField u_hat = to_spectral(u);
    SpatialField f = cfg.potential + to_physical(apply_symbol(u_hat, symbol));
    if (cfg.nonlinearity) f = f - truncated_nonlinearity(cfg.cutoff(), u_hat);
    return f;
}

bool state_ok(const SpatialField& u) { return all_finite(u); }

} // namespace

SpatialField ito_drift(const SolverConfig& cfg, const SpatialField& u) {
    SpatialField f = cfg.potential;
    if (cfg.transport) f = f + strat_correction(*cfg.transport, u);
    if (cfg.nonlinearity) f = f - truncated_nonlinearity(cfg.cutoff(), u);
    return f;
}

SpatialField step_ito_exp_em(const SolverConfig& cfg, const SpatialField& u,
                             std::span<const double> dW) {
    auto symbol = linear_symbol(cfg.grid, cfg.mu, cfg.gamma, cfg.k_prime);
    SpatialField stage = u + cfg.dt * ito_drift(cfg, u);
    if (cfg.transport) stage = stage + noise_term(cfg, u, dW);
    return to_physical(apply_symbol_exp(to_spectral(stage), symbol, cfg.dt));
}

SpatialField step_strat_heun(const SolverConfig& cfg, const SpatialField& u,
                             std::span<const double> dW) {
    auto symbol = linear_symbol(cfg.grid, cfg.mu, cfg.gamma, cfg.k_prime);
    SpatialField f_u = strat_drift(cfg, u, symbol);
    SpatialField noise_u = noise_term(cfg, u, dW);

    SpatialField predictor = u + cfg.dt * f_u + noise_u;
    if (!state_ok(predictor)) return predictor;

    SpatialField f_p = strat_drift(cfg, predictor, symbol);
    SpatialField noise_p = noise_term(cfg, predictor, dW);

    SpatialField out = u + (0.5 * cfg.dt) * (f_u + f_p);
    axpy(0.5, noise_u, out);
    axpy(0.5, noise_p, out);
    return out;
}

Trajectory integrate(const SolverConfig& cfg, const NoisePath& path) {
    auto errors = cfg.validate();
    if (!errors.empty()) throw std::invalid_argument("integrate: invalid config: " + errors[0]);
    const int steps = cfg.steps();
    if (path.dims != cfg.grid.dim || path.steps < steps ||
        std::abs(path.dt - cfg.dt) > 1e-15 * std::max(1.0, cfg.dt))
        throw std::invalid_argument("integrate: path does not match config time grid");

    auto symbol = linear_symbol(cfg.grid, cfg.mu, cfg.gamma, cfg.k_prime);

    Trajectory traj;
    traj.scheme = scheme_name(cfg.scheme);
    traj.k = cfg.k;

    const double stop_threshold =
        cfg.truncation ? cfg.truncation->r / cfg.truncation->sobolev_constant : 0.0;

    SpatialField u = cfg.initial;
    std::vector<double> dW(cfg.grid.dim, 0.0);

    auto record = [&](int step, const SpatialField& state) {
        const double t = step * cfg.dt;
        SpectralField state_hat = to_spectral(state);
        DiagnosticsRecord rec;
        rec.t = t;
        rec.l2 = l2_norm(state_hat);
        rec.hk = sobolev_norm(state_hat, cfg.k);
        rec.grad_sup = grad_sup_norm(state_hat);
        rec.theta = cfg.truncation ? theta(*cfg.truncation, rec.grad_sup) : 1.0;
        rec.mean_mode = mean_value(state);
        traj.diagnostics.push_back(rec);
        if (cfg.snapshot_stride > 0 && step % cfg.snapshot_stride == 0) {
            traj.snapshot_times.push_back(t);
            traj.snapshots.push_back(state);
        }
        return rec;
    };

    DiagnosticsRecord rec = record(0, u);
    if (cfg.truncation_respecting && rec.hk >= stop_threshold) {
        traj.stopping = StoppingEvent{true, 0.0};
        return traj;
    }

    auto keep_last_finite = [&](const SpatialField& state, double t) {
        if (traj.snapshot_times.empty() || traj.snapshot_times.back() != t) {
            traj.snapshot_times.push_back(t);
            traj.snapshots.push_back(state);
        }
    };

    double prev_hk = rec.hk;
    double prev_t = 0.0;
    SpatialField before_step = u;
    for (int m = 0; m < steps; ++m) {
        for (int i = 0; i < cfg.grid.dim; ++i) dW[i] = path.increment(m, i);
        before_step = u;
        u = cfg.scheme == Scheme::ito_exp_em ? step_ito_exp_em(cfg, u, dW)
                                             : step_strat_heun(cfg, u, dW);
        const int step = m + 1;
        const double t = step * cfg.dt;

        if (!state_ok(u)) {
            traj.blowup = BlowUpEvent{true, t};
            keep_last_finite(before_step, m * cfg.dt);
            break;
        }

        const bool record_now = step % cfg.record_stride == 0 || step == steps;
        const bool snapshot_now =
            cfg.snapshot_stride > 0 && (step % cfg.snapshot_stride == 0 || step == steps);
        const bool monitor_now = record_now || snapshot_now || cfg.truncation_respecting;
        if (!monitor_now) continue;

        SpectralField u_hat = to_spectral(u);
        double hk = sobolev_norm(u_hat, cfg.k);
        if (hk > blowup_norm_limit) {
            traj.blowup = BlowUpEvent{true, t};
            keep_last_finite(u, t); // still finite, just past the norm limit
            break;
        }
        if (record_now || snapshot_now) {
            DiagnosticsRecord r;
            r.t = t;
            r.l2 = l2_norm(u_hat);
            r.hk = hk;
            r.grad_sup = grad_sup_norm(u_hat);
            r.theta = cfg.truncation ? theta(*cfg.truncation, r.grad_sup) : 1.0;
            r.mean_mode = mean_value(u);
            if (record_now) traj.diagnostics.push_back(r);
            if (snapshot_now && (traj.snapshot_times.empty() || traj.snapshot_times.back() != t)) {
                traj.snapshot_times.push_back(t);
                traj.snapshots.push_back(u);
            }
        }
        if (cfg.truncation && !traj.stopping.hit && hk >= stop_threshold) {
            double w = hk == prev_hk ? 1.0 : (stop_threshold - prev_hk) / (hk - prev_hk);
            double hit_time = prev_t + std::clamp(w, 0.0, 1.0) * (t - prev_t);
            traj.stopping = StoppingEvent{true, hit_time};
            if (cfg.truncation_respecting) break;
        }
        prev_hk = hk;
        prev_t = t;
    }
    return traj;
}

} // namespace shjb
