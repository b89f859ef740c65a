#pragma once

// Solver configuration and trajectory records shared by the time steppers,
// the mild solver and the diagnostics pipeline.

#include "shjb/field.hpp"
#include "shjb/transport.hpp"
#include "shjb/truncation.hpp"

#include <cmath>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace shjb {

enum class Scheme { ito_exp_em, strat_heun };

std::string scheme_name(Scheme s);

struct SolverConfig {
    TorusGrid grid;
    double mu = 0.1;
    double gamma = 0.0;
    double k = 3.0;    // Sobolev index; must satisfy k > n/2 + 2
    int k_prime = 7;   // hyper-regularization order, odd, = 2*floor(k)+1
    double dt = 1e-4;
    double horizon = 0.5;
    Scheme scheme = Scheme::ito_exp_em;
    std::optional<TransportOperator> transport; // absent = noise off
    std::optional<CutoffSpec> truncation;       // absent = theta == 1
    bool truncation_respecting = false;         // halt at the tau_r crossing
    bool nonlinearity = true;                   // quadratic term on/off
    SpatialField potential;                     // V
    SpatialField initial;                       // u_0
    int record_stride = 10;   // diagnostics every this many steps
    int snapshot_stride = 10; // field snapshots; 0 disables

    int steps() const { return static_cast<int>(std::llround(horizon / dt)); }

    // dt * max |linear symbol| over resolved modes.
    double stability_budget() const;

    // Itemized constraint violations; empty means valid.
    std::vector<std::string> validate() const;

    const CutoffSpec* cutoff() const { return truncation ? &*truncation : nullptr; }
};

int derived_k_prime(double k); // 2*floor(k)+1

struct DiagnosticsRecord {
    double t = 0.0;
    double l2 = 0.0;
    double hk = 0.0;
    double grad_sup = 0.0;
    double theta = 1.0;
    double mean_mode = 0.0;
};

struct BlowUpEvent {
    bool hit = false;
    double time = 0.0;
};

struct Trajectory {
    std::string scheme;
    double k = 0.0;
    std::vector<DiagnosticsRecord> diagnostics;
    std::vector<double> snapshot_times;
    std::vector<SpatialField> snapshots;
    StoppingEvent stopping;
    BlowUpEvent blowup;

    const SpatialField& final_state() const { return snapshots.back(); }
};

// Diagnostics CSV, columns t,l2,hk,grad_sup,theta,mean_mode,stopped,blowup.
// `header` lines are emitted as leading comments (config hash etc.).
void write_diagnostics_csv(std::ostream& os, const Trajectory& traj,
                           const std::vector<std::string>& header);

// First tau_r crossing of the recorded H^k norm series.
StoppingEvent stopping_monitor(const Trajectory& traj, const CutoffSpec& spec);

} // namespace shjb
