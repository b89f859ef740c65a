#include "shjb/oracles.hpp"

#include "shjb/mild.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace shjb {

namespace {

SpectralField heat_factor(const SpectralField& F, double mu, double t) {
    SpectralField out = F;
    for (std::size_t flat = 0; flat < out.coefficients.size(); ++flat)
        out.coefficients[flat] *= std::exp(-mu * wave_sq(F.grid, flat) * t);
    return out;
}

void check_positive(const SpatialField& phi) {
    for (double v : phi.values)
        if (!(v > 0.0))
            throw std::runtime_error(
                "cole_hopf_exact: phi lost positivity (resolution failure)");
}

} // namespace

std::vector<SpatialField> cole_hopf_exact(const SpatialField& u0, double mu,
                                          const SpatialField* V,
                                          std::span<const double> sample_times,
                                          double substep) {
    if (mu <= 0.0) throw std::invalid_argument("cole_hopf_exact: mu must be > 0");
    SpatialField phi0 = u0;
    for (auto& v : phi0.values) v = std::exp(-v / (2.0 * mu));
    check_positive(phi0);

    std::vector<SpatialField> out;
    out.reserve(sample_times.size());

    if (!V) {
        // phi(t) = exp(mu Lap t) phi0, exact per mode.
        SpectralField phi0_hat = to_spectral(phi0);
        for (double t : sample_times) {
            if (t < 0.0) throw std::invalid_argument("cole_hopf_exact: negative time");
            SpatialField phi = to_physical(heat_factor(phi0_hat, mu, t));
            check_positive(phi);
            for (auto& v : phi.values) v = -2.0 * mu * std::log(v);
            out.push_back(std::move(phi));
        }
        return out;
    }

    // Strang splitting exp(-V dt/(4mu)) exp(mu Lap dt) exp(-V dt/(4mu)).
    SpatialField phi = phi0;
    double t_now = 0.0;
    for (double t : sample_times) {
        if (t < t_now - 1e-15)
            throw std::invalid_argument("cole_hopf_exact: sample times must be sorted");
        double span = t - t_now;
        int substeps = std::max(1, static_cast<int>(std::ceil(span / substep)));
        double h = span / substeps;
        for (int s = 0; s < substeps; ++s) {
            for (std::size_t j = 0; j < phi.values.size(); ++j)
                phi.values[j] *= std::exp(-V->values[j] * h / (4.0 * mu));
            phi = to_physical(heat_factor(to_spectral(phi), mu, h));
            for (std::size_t j = 0; j < phi.values.size(); ++j)
                phi.values[j] *= std::exp(-V->values[j] * h / (4.0 * mu));
        }
        t_now = t;
        check_positive(phi);
        SpatialField u = phi;
        for (auto& v : u.values) v = -2.0 * mu * std::log(v);
        out.push_back(std::move(u));
    }
    return out;
}

std::vector<SpatialField> shift_oracle(const SpatialField& u0, double mu, double nu,
                                       const NoisePath& path,
                                       std::span<const double> sample_times) {
    if (nu < 0.0) throw std::invalid_argument("shift_oracle: nu must be >= 0");
    auto deterministic = cole_hopf_exact(u0, mu, nullptr, sample_times);
    if (nu == 0.0) return deterministic;

    const double root_nu = std::sqrt(nu);
    std::vector<SpatialField> out;
    out.reserve(sample_times.size());
    std::vector<int> xi(u0.grid.dim);
    for (std::size_t s = 0; s < sample_times.size(); ++s) {
        double t = sample_times[s];
        double steps_real = t / path.dt;
        int step = static_cast<int>(std::llround(steps_real));
        if (std::abs(steps_real - step) > 1e-9 || step > path.steps)
            throw std::invalid_argument("shift_oracle: sample time off the path grid");
        std::vector<double> shift(u0.grid.dim);
        for (int i = 0; i < u0.grid.dim; ++i) shift[i] = root_nu * path.cumulative(step, i);

        SpectralField v_hat = to_spectral(deterministic[s]);
        for (std::size_t flat = 0; flat < v_hat.coefficients.size(); ++flat) {
            wavevector(u0.grid, flat, xi);
            double phase = 0.0;
            for (int i = 0; i < u0.grid.dim; ++i) phase -= xi[i] * shift[i];
            v_hat.coefficients[flat] *= std::complex<double>(std::cos(phase), std::sin(phase));
        }
        out.push_back(to_physical(v_hat));
    }
    return out;
}

PointFn field_evaluator(const SpatialField& f) {
    auto f_hat = std::make_shared<SpectralField>(to_spectral(f));
    int dim = f.grid.dim;
    return [f_hat, dim](std::span<const double> x) {
        std::vector<int> xi(dim);
        std::complex<double> acc = 0.0;
        for (std::size_t flat = 0; flat < f_hat->coefficients.size(); ++flat) {
            wavevector(f_hat->grid, flat, xi);
            double phase = 0.0;
            for (int d = 0; d < dim; ++d) phase += xi[d] * x[d];
            acc += f_hat->coefficients[flat] *
                   std::complex<double>(std::cos(phase), std::sin(phase));
        }
        return acc.real() * std::pow(two_pi, -0.5 * dim);
    };
}

FeynmanKacResult feynman_kac_mc(const PointFn& u0, const PointFn& V, double mu, double T,
                                const std::vector<std::vector<double>>& points, int dim,
                                int num_paths, std::uint64_t seed, double mc_dt) {
    if (mu <= 0.0) throw std::invalid_argument("feynman_kac_mc: mu must be > 0");
    if (num_paths < 2) throw std::invalid_argument("feynman_kac_mc: need at least 2 paths");
    int steps = std::max(1, static_cast<int>(std::llround(T / mc_dt)));
    double h = T / steps;
    double root = std::sqrt(2.0 * mu * h);

    FeynmanKacResult result;
    result.value.reserve(points.size());
    result.half_width.reserve(points.size());

    std::vector<double> x(dim);
    for (std::size_t p = 0; p < points.size(); ++p) {
        NormalStream normals(split_seed(seed, p));
        double sum = 0.0, sum_sq = 0.0;
        for (int path = 0; path < num_paths; ++path) {
            std::copy(points[p].begin(), points[p].end(), x.begin());
            double v_integral = 0.0;
            for (int s = 0; s < steps; ++s) {
                v_integral += V(x) * h;
                for (int d = 0; d < dim; ++d) {
                    x[d] += root * normals.next();
                    x[d] = std::fmod(x[d], two_pi);
                    if (x[d] < 0.0) x[d] += two_pi;
                }
            }
            double y = std::exp(-(v_integral + u0(x)) / (2.0 * mu));
            sum += y;
            sum_sq += y * y;
        }
        double mean = sum / num_paths;
        if (!(mean > 0.0))
            throw std::runtime_error("feynman_kac_mc: nonpositive phi estimate");
        double var = std::max(0.0, sum_sq / num_paths - mean * mean);
        double se = std::sqrt(var / num_paths);
        result.value.push_back(-2.0 * mu * std::log(mean));
        result.half_width.push_back(2.0 * mu * 1.96 * se / mean);
    }
    return result;
}

// -- companion Burgers system --------------------------------------------------

namespace {

using VectorField = std::vector<SpatialField>;

VectorField burgers_drift(const SolverConfig& cfg, const VectorField& v,
                          const std::vector<SpatialField>& grad_V,
                          std::span<const double> symbol) {
    const int n = cfg.grid.dim;
    VectorField out;
    out.reserve(n);
    for (int j = 0; j < n; ++j) {
        SpectralField vj_hat = to_spectral(v[j]);
        SpatialField f = grad_V[j] + to_physical(apply_symbol(vj_hat, symbol));
        for (int i = 0; i < n; ++i) {
            SpatialField di_vj = to_physical(derivative(vj_hat, i));
            f = f - multiply_dealiased(v[i], di_vj);
        }
        out.push_back(std::move(f));
    }
    return out;
}

VectorField burgers_noise(const SolverConfig& cfg, const VectorField& v,
                          std::span<const double> dW) {
    const int n = cfg.grid.dim;
    VectorField out;
    out.reserve(n);
    for (int j = 0; j < n; ++j) {
        SpatialField acc = make_field(cfg.grid);
        for (int i = 0; i < n; ++i) axpy(dW[i], apply_L(*cfg.transport, i, v[j]), acc);
        out.push_back(std::move(acc));
    }
    return out;
}

bool vector_finite(const VectorField& v) {
    return std::all_of(v.begin(), v.end(), [](const SpatialField& f) { return all_finite(f); });
}

} // namespace

VectorTrajectory burgers_companion(const SolverConfig& cfg, const NoisePath& path) {
    if (!cfg.transport) throw std::invalid_argument("burgers_companion: transport required");
    if (!detect_special_class(*cfg.transport).is_special)
        throw std::invalid_argument("burgers_companion: operator not in the special class");
    const int steps = cfg.steps();
    if (path.dims != cfg.grid.dim || path.steps < steps)
        throw std::invalid_argument("burgers_companion: path does not match config");

    auto symbol = linear_symbol(cfg.grid, cfg.mu, cfg.gamma, cfg.k_prime);
    std::vector<SpatialField> grad_V = gradient(cfg.potential);
    VectorField v = gradient(cfg.initial);
    const int n = cfg.grid.dim;

    VectorTrajectory traj;
    auto snapshot = [&](int step) {
        traj.times.push_back(step * cfg.dt);
        traj.snapshots.push_back(v);
    };
    snapshot(0);

    std::vector<double> dW(n, 0.0);
    for (int m = 0; m < steps; ++m) {
        for (int i = 0; i < n; ++i) dW[i] = path.increment(m, i);

        VectorField f_v = burgers_drift(cfg, v, grad_V, symbol);
        VectorField g_v = burgers_noise(cfg, v, dW);
        VectorField predictor(n, make_field(cfg.grid));
        for (int j = 0; j < n; ++j) {
            predictor[j] = v[j] + cfg.dt * f_v[j];
            axpy(1.0, g_v[j], predictor[j]);
        }
        if (!vector_finite(predictor)) {
            traj.blowup = BlowUpEvent{true, (m + 1) * cfg.dt};
            break;
        }
        VectorField f_p = burgers_drift(cfg, predictor, grad_V, symbol);
        VectorField g_p = burgers_noise(cfg, predictor, dW);
        for (int j = 0; j < n; ++j) {
            SpatialField next = v[j] + (0.5 * cfg.dt) * (f_v[j] + f_p[j]);
            axpy(0.5, g_v[j], next);
            axpy(0.5, g_p[j], next);
            v[j] = std::move(next);
        }
        if (!vector_finite(v)) {
            traj.blowup = BlowUpEvent{true, (m + 1) * cfg.dt};
            break;
        }
        const int step = m + 1;
        if (cfg.snapshot_stride > 0 && (step % cfg.snapshot_stride == 0 || step == steps))
            snapshot(step);
    }
    return traj;
}

// -- reports -------------------------------------------------------------------

OracleReport compare_fields(const std::string& oracle, std::span<const double> times,
                            std::span<const SpatialField> candidate,
                            std::span<const SpatialField> reference, double tol_linf,
                            double beta) {
    if (candidate.size() != reference.size() || candidate.size() != times.size())
        throw std::invalid_argument("compare_fields: series length mismatch");
    OracleReport report;
    report.oracle = oracle;
    report.beta = beta;
    report.tol_linf = tol_linf;
    report.pass = true;
    for (std::size_t s = 0; s < candidate.size(); ++s) {
        SpatialField diff = candidate[s] - reference[s];
        report.times.push_back(times[s]);
        report.err_linf.push_back(sup_norm(diff));
        report.err_l2.push_back(l2_norm(diff));
        report.err_hbeta.push_back(sobolev_norm(diff, beta));
        if (report.err_linf.back() > tol_linf) report.pass = false;
    }
    return report;
}

double default_max_principle_tol(const SolverConfig& cfg) {
    return 10.0 * cfg.dt + std::pow(cfg.grid.points_per_axis, -cfg.k);
}

MaxPrincipleReport max_principle_check(const Trajectory& traj, const SolverConfig& cfg,
                                       double tol) {
    MaxPrincipleReport report;
    report.tol = tol;

    bool special = cfg.transport && detect_special_class(*cfg.transport).is_special;
    bool v_monotone = true;
    for (const auto& dv : gradient(cfg.potential))
        for (double g : dv.values)
            if (g > 1e-12) v_monotone = false;
    report.hypothesis_met = special && v_monotone;

    if (traj.diagnostics.empty()) return report;
    report.initial_grad_sup = traj.diagnostics.front().grad_sup;
    report.worst_margin = -std::numeric_limits<double>::infinity();
    for (const auto& rec : traj.diagnostics) {
        double margin = rec.grad_sup - report.initial_grad_sup;
        if (margin > report.worst_margin) {
            report.worst_margin = margin;
            report.worst_time = rec.t;
        }
    }
    report.pass = report.hypothesis_met && report.worst_margin <= tol;
    return report;
}

UniquenessReport uniqueness_experiment(const SolverConfig& cfg, std::uint64_t seed,
                                       double delta) {
    if (delta < 0.0) throw std::invalid_argument("uniqueness_experiment: delta must be >= 0");
    SolverConfig run1 = cfg;
    run1.snapshot_stride = std::max(1, cfg.snapshot_stride);
    SolverConfig run2 = run1;
    SpatialField bump = sample(cfg.grid, [](std::span<const double> x) { return std::sin(x[0]); });
    run2.initial = run1.initial + delta * bump;

    NoisePath path = sample_path(seed, cfg.grid.dim, cfg.dt, cfg.steps());
    Trajectory t1 = integrate(run1, path);
    Trajectory t2 = integrate(run2, path);

    UniquenessReport report;
    report.delta = delta;

    if (delta == 0.0) {
        report.bit_identical = t1.snapshots.size() == t2.snapshots.size();
        if (report.bit_identical)
            for (std::size_t s = 0; s < t1.snapshots.size(); ++s)
                if (t1.snapshots[s].values != t2.snapshots[s].values)
                    report.bit_identical = false;
    }

    // Gronwall rate from the recorded norm history: the L2 gap obeys
    //   d gap^2 <= [ C_ab + C_lap (||u1||_Hk + ||u2||_Hk) + 1 ] gap^2 ds
    //            + martingale,
    // with C_lap the discrete constant in |Lap w|_inf <= C_lap ||w||_Hk.
    // The martingale part is covered by a realized-noise allowance with
    // per-operator rate bound (1/2)|d a_i|_inf + |b_i|_inf.
    double c_ab = 0.0, c_noise = 0.0;
    if (cfg.transport) {
        c_ab = operator_bound_diag(*cfg.transport, run1.initial).c_ab;
        for (int i = 0; i < cfg.grid.dim; ++i) {
            SpatialField da = to_physical(derivative(to_spectral(cfg.transport->a[i]), i));
            c_noise += 0.5 * sup_norm(da) + sup_norm(cfg.transport->b[i]);
        }
    }
    double c_lap = 0.0;
    for (std::size_t flat = 0; flat < cfg.grid.total_points(); ++flat) {
        double s = wave_sq(cfg.grid, flat);
        c_lap += s * s * std::pow(1.0 + s, -cfg.k);
    }
    c_lap = std::sqrt(c_lap) * std::pow(two_pi, -0.5 * cfg.grid.dim);

    double sup_norms = 0.0;
    for (std::size_t s = 0; s < t1.diagnostics.size() && s < t2.diagnostics.size(); ++s)
        sup_norms = std::max(sup_norms, t1.diagnostics[s].hk + t2.diagnostics[s].hk);
    report.lambda = 1.0 + c_ab + c_lap * sup_norms;

    // c_noise already sums over axes; pair it with the largest running max
    double w_sup = 0.0;
    for (int i = 0; i < cfg.grid.dim; ++i) {
        double w = 0.0;
        for (int m = 0; m <= cfg.steps(); ++m)
            w = std::max(w, std::abs(path.cumulative(m, i)));
        w_sup = std::max(w_sup, w);
    }
    report.noise_allowance = 2.0 * c_noise * w_sup;

    double gap0_sq = delta * delta * std::pow(l2_norm(bump), 2);
    report.envelope_holds = true;
    report.worst_ratio = 0.0;
    std::size_t count = std::min(t1.snapshots.size(), t2.snapshots.size());
    for (std::size_t s = 0; s < count; ++s) {
        double gap = l2_norm(t1.snapshots[s] - t2.snapshots[s]);
        double envelope = gap0_sq * std::exp(report.lambda * t1.snapshot_times[s] +
                                             report.noise_allowance);
        double ratio = envelope > 0.0 ? gap * gap / envelope
                                      : (gap > 0.0 ? std::numeric_limits<double>::infinity() : 0.0);
        report.worst_ratio = std::max(report.worst_ratio, ratio);
        if (s + 1 == count) report.terminal_gap = gap;
    }
    if (delta > 0.0 && report.worst_ratio > 1.0 + 1e-9) report.envelope_holds = false;
    return report;
}

GammaStudyReport gamma_convergence_study(const SolverConfig& base,
                                         std::span<const double> gamma_list,
                                         const NoisePath& path, double beta) {
    if (gamma_list.empty())
        throw std::invalid_argument("gamma_convergence_study: empty gamma list");
    for (std::size_t j = 0; j + 1 < gamma_list.size(); ++j)
        if (gamma_list[j] <= gamma_list[j + 1])
            throw std::invalid_argument("gamma_convergence_study: list must be descending");
    for (double g : gamma_list)
        if (g <= 0.0)
            throw std::invalid_argument("gamma_convergence_study: gammas must be > 0");

    std::vector<std::vector<SpatialField>> runs;
    auto run_gamma = [&](double gamma) {
        SolverConfig cfg = base;
        cfg.gamma = gamma;
        cfg.scheme = Scheme::ito_exp_em;
        cfg.snapshot_stride = std::max(1, base.snapshot_stride);
        return integrate(cfg, path).snapshots;
    };
    for (double g : gamma_list) runs.push_back(run_gamma(g));
    runs.push_back(run_gamma(0.0)); // the gamma = 0 limit run

    auto sup_diff = [&](const std::vector<SpatialField>& a,
                        const std::vector<SpatialField>& b) {
        double m = 0.0;
        for (std::size_t s = 0; s < a.size(); ++s)
            m = std::max(m, sobolev_norm(a[s] - b[s], beta));
        return m;
    };

    GammaStudyReport report;
    report.beta = beta;
    for (std::size_t j = 0; j + 1 < runs.size(); ++j) {
        GammaStudyRow row;
        row.gamma_high = gamma_list[j];
        row.gamma_low = j + 1 < gamma_list.size() ? gamma_list[j + 1] : 0.0;
        row.sup_diff_hbeta = sup_diff(runs[j], runs[j + 1]);
        row.sup_diff_to_limit = sup_diff(runs[j], runs.back());
        report.rows.push_back(row);
    }
    report.monotone = true;
    for (std::size_t j = 0; j + 1 < report.rows.size(); ++j) {
        if (report.rows[j + 1].sup_diff_hbeta > report.rows[j].sup_diff_hbeta * report.slack)
            report.monotone = false;
        if (report.rows[j + 1].sup_diff_to_limit >
            report.rows[j].sup_diff_to_limit * report.slack)
            report.monotone = false;
    }
    return report;
}

std::string oracle_report_json(const OracleReport& report) {
    std::ostringstream os;
    os.precision(17);
    os << "{\"oracle\":\"" << report.oracle << "\",\"beta\":" << report.beta
       << ",\"tol_linf\":" << report.tol_linf << ",\"pass\":" << (report.pass ? "true" : "false")
       << ",\"metadata\":\"" << report.metadata << "\",\"samples\":[";
    for (std::size_t s = 0; s < report.times.size(); ++s) {
        if (s) os << ',';
        os << "{\"t\":" << report.times[s] << ",\"err_linf\":" << report.err_linf[s]
           << ",\"err_l2\":" << report.err_l2[s] << ",\"err_hbeta\":" << report.err_hbeta[s]
           << "}";
    }
    os << "]}";
    return os.str();
}

} // namespace shjb
