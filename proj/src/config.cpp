#include "shjb/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace shjb {

std::string scheme_name(Scheme s) {
    return s == Scheme::ito_exp_em ? "ito_exp_em" : "strat_heun";
}

int derived_k_prime(double k) { return 2 * static_cast<int>(std::floor(k)) + 1; }

double SolverConfig::stability_budget() const {
    auto sym = linear_symbol(grid, mu, gamma, k_prime);
    double m = 0.0;
    for (double s : sym) m = std::max(m, std::abs(s));
    return dt * m;
}

std::vector<std::string> SolverConfig::validate() const {
    std::vector<std::string> errors;
    auto fail = [&](const std::string& msg) { errors.push_back(msg); };

    if (grid.dim < 1) fail("grid.dim: must be >= 1");
    int N = grid.points_per_axis;
    if (N < 8 || (N & (N - 1)) != 0) fail("grid.points: must be a power of two >= 8");
    if (mu <= 0.0) fail("mu: must be > 0");
    if (gamma < 0.0) fail("gamma: must be >= 0");
    if (!(k > 0.5 * grid.dim + 2.0))
        fail("k: must satisfy k > n/2 + 2 (got k=" + std::to_string(k) + ", n=" +
             std::to_string(grid.dim) + ")");
    if (k_prime % 2 == 0) fail("k_prime: must be odd (even order is anti-dissipative)");
    if (k_prime < 1) fail("k_prime: must be >= 1");
    if (dt <= 0.0) fail("dt: must be > 0");
    if (horizon <= 0.0) fail("horizon: must be > 0");
    if (record_stride < 1) fail("record_stride: must be >= 1");
    if (snapshot_stride < 0) fail("snapshot_stride: must be >= 0");
    if (!(potential.grid == grid)) fail("potential: grid mismatch");
    else if (!all_finite(potential)) fail("potential: non-finite values");
    if (!(initial.grid == grid)) fail("initial: grid mismatch");
    else if (!all_finite(initial)) fail("initial: non-finite values");
    if (transport && transport->dims() != grid.dim)
        fail("transport: coefficient count must equal grid dim");
    if (truncation && truncation->r <= 0.0) fail("truncation.r: must be > 0");
    if (truncation_respecting && !truncation)
        fail("truncation_respecting: requires truncation");
    if (errors.empty() && scheme == Scheme::strat_heun) {
        double budget = stability_budget();
        if (budget > 2.0)
            fail("dt: unstable for strat_heun, dt*max|symbol| = " +
                 std::to_string(budget) + " > 2 (stiff part is explicit in Heun)");
    }
    return errors;
}

StoppingEvent stopping_monitor(const Trajectory& traj, const CutoffSpec& spec) {
    std::vector<double> times, norms;
    times.reserve(traj.diagnostics.size());
    norms.reserve(traj.diagnostics.size());
    for (const auto& rec : traj.diagnostics) {
        times.push_back(rec.t);
        norms.push_back(rec.hk);
    }
    return stopping_monitor(times, norms, spec);
}

void write_diagnostics_csv(std::ostream& os, const Trajectory& traj,
                           const std::vector<std::string>& header) {
    for (const auto& line : header) os << "# " << line << '\n';
    os << "t,l2,hk,grad_sup,theta,mean_mode,stopped,blowup\n";
    char buf[64];
    auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        os << buf;
    };
    for (const auto& rec : traj.diagnostics) {
        put(rec.t);
        os << ',';
        put(rec.l2);
        os << ',';
        put(rec.hk);
        os << ',';
        put(rec.grad_sup);
        os << ',';
        put(rec.theta);
        os << ',';
        put(rec.mean_mode);
        os << ',' << (traj.stopping.hit && rec.t >= traj.stopping.time ? 1 : 0);
        os << ',' << (traj.blowup.hit && rec.t >= traj.blowup.time ? 1 : 0);
        os << '\n';
    }
}

} // namespace shjb
