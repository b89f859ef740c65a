#include "shjb/mild.hpp"

#include <cmath>
#include <stdexcept>

namespace shjb {

MildProblem make_mild_problem(SolverConfig cfg, NoisePath path) {
    if (cfg.gamma <= 0.0)
        throw std::invalid_argument("mild: gamma must be > 0 (semigroup must smooth)");
    auto errors = cfg.validate();
    if (!errors.empty()) throw std::invalid_argument("mild: invalid config: " + errors[0]);
    if (path.dims != cfg.grid.dim || path.steps < cfg.steps() ||
        std::abs(path.dt - cfg.dt) > 1e-15 * std::max(1.0, cfg.dt))
        throw std::invalid_argument("mild: path does not match config time grid");
    return MildProblem{std::move(cfg), std::move(path)};
}

SpectralField semigroup_apply(double gamma, int k_prime, double t, const SpectralField& F) {
    if (t < 0.0) throw std::invalid_argument("semigroup_apply: t must be >= 0");
    if (k_prime % 2 == 0) throw std::invalid_argument("semigroup_apply: k_prime must be odd");
    SpectralField out = F;
    for (std::size_t flat = 0; flat < out.coefficients.size(); ++flat) {
        double s = wave_sq(F.grid, flat);
        out.coefficients[flat] *= std::exp(-t * gamma * std::pow(s, k_prime));
    }
    return out;
}

namespace {

// Integrand increment at node j: dt * (V + mu*Lap u_j + (1/2) sum L_i^2 u_j
// - (1/2) theta |grad u_j|^2) + sum_i (L_i u_j) dW_{i,j}, in spectral form.
SpectralField node_increment(const MildProblem& prob, const SpectralField& u_hat, int j) {
    const SolverConfig& cfg = prob.cfg;
    SpatialField u = to_physical(u_hat);
    SpatialField g = cfg.potential;
    if (cfg.transport) g = g + strat_correction(*cfg.transport, u);
    if (cfg.nonlinearity) g = g - truncated_nonlinearity(cfg.cutoff(), u_hat);
    SpectralField g_hat = to_spectral(g);
    axpy(cfg.mu, laplacian(u_hat), g_hat);
    g_hat = cfg.dt * g_hat;
    if (cfg.transport) {
        for (int i = 0; i < cfg.grid.dim; ++i)
            axpy(prob.path.increment(j, i), to_spectral(apply_L(*cfg.transport, i, u)),
                 g_hat);
    }
    return g_hat;
}

} // namespace

std::vector<SpectralField> picard_apply(const MildProblem& prob,
                                        const std::vector<SpectralField>& grid) {
    const SolverConfig& cfg = prob.cfg;
    const int M = cfg.steps();
    if (static_cast<int>(grid.size()) != M + 1)
        throw std::invalid_argument("picard_apply: grid must have steps+1 nodes");

    // S(t_{m+1} - t_j) = S(dt) S(t_m - t_j) lets the convolution sums be
    // accumulated in one forward sweep.
    std::vector<SpectralField> out;
    out.reserve(M + 1);
    out.push_back(to_spectral(cfg.initial));
    for (int m = 0; m < M; ++m) {
        SpectralField acc = out.back() + node_increment(prob, grid[m], m);
        out.push_back(semigroup_apply(cfg.gamma, cfg.k_prime, cfg.dt, acc));
        for (const auto& c : out.back().coefficients)
            if (!std::isfinite(c.real()) || !std::isfinite(c.imag()))
                throw std::runtime_error("picard_apply: non-finite iterate");
    }
    return out;
}

namespace {

double sup_hk_distance(const std::vector<SpectralField>& a,
                       const std::vector<SpectralField>& b, double k) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, sobolev_norm(a[j] - b[j], k));
    return m;
}

} // namespace

PicardResult fixed_point_solve(const MildProblem& prob, double tol, int max_iter) {
    if (tol <= 0.0) throw std::invalid_argument("fixed_point_solve: tol must be > 0");
    const SolverConfig& cfg = prob.cfg;
    const int M = cfg.steps();

    std::vector<SpectralField> current(M + 1, to_spectral(cfg.initial));
    PicardResult result;
    for (int it = 1; it <= max_iter; ++it) {
        std::vector<SpectralField> next = picard_apply(prob, current);
        double update = sup_hk_distance(next, current, cfg.k);
        result.update_norms.push_back(update);
        if (result.update_norms.size() >= 2) {
            double prev = result.update_norms[result.update_norms.size() - 2];
            result.contraction_ratios.push_back(prev > 0.0 ? update / prev : 0.0);
        }
        current = std::move(next);
        result.iterations = it;
        if (update < tol) {
            result.converged = true;
            break;
        }
    }
    result.residual = sup_hk_distance(picard_apply(prob, current), current, cfg.k);
    result.iterate = std::move(current);
    return result;
}

} // namespace shjb
