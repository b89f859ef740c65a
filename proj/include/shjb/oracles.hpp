#pragma once

// Independent reference solutions and theorem checkers used to verify the
// SPDE solvers: an exact Cole-Hopf solver for the deterministic reduction,
// a shift oracle for constant-coefficient transport noise, Feynman-Kac
// Monte Carlo, a companion stochastic Burgers solver for the gradient, and
// the maximum-principle / pathwise-uniqueness / gamma-refinement
// experiments. None of these share a code path with the steppers they
// check beyond the spectral primitives.

#include "shjb/config.hpp"
#include "shjb/integrator.hpp"
#include "shjb/noise.hpp"

#include <functional>
#include <span>
#include <string>
#include <vector>

namespace shjb {

// -- reference solutions -------------------------------------------------------

// Exact-in-space solver for du/dt = V + mu*Lap u - (1/2)|grad u|^2 via
// phi = exp(-u/(2mu)), which satisfies phi_t = mu*Lap phi - (V/(2mu)) phi.
// With V == 0 phi is advanced exactly per mode; otherwise by Strang
// splitting between the heat factor and the multiplication semigroup at
// substeps of length <= substep. Aborts if phi loses positivity.
std::vector<SpatialField> cole_hopf_exact(const SpatialField& u0, double mu,
                                          const SpatialField* V,
                                          std::span<const double> sample_times,
                                          double substep = 1e-5);

// Pathwise solution for constant transport coefficients a_i == -sqrt(nu),
// b == 0, V == 0: u(t,x) = v(t, x - sqrt(nu) W(t)) with v the
// deterministic Cole-Hopf solution; the displacement is applied as an
// exact Fourier phase. Sample times must lie on the path's time grid.
std::vector<SpatialField> shift_oracle(const SpatialField& u0, double mu, double nu,
                                       const NoisePath& path,
                                       std::span<const double> sample_times);

using PointFn = std::function<double(std::span<const double>)>;

// Exact Fourier evaluation of a grid field at arbitrary points.
PointFn field_evaluator(const SpatialField& f);

struct FeynmanKacResult {
    std::vector<double> value;      // u(T, x) estimates
    std::vector<double> half_width; // 95% bands via the delta method
};

// u(T,x) = -2 mu log E[ exp(-(1/(2mu)) int_0^T V(X_s) ds) exp(-u0(X_T)/(2mu)) ]
// with dX = sqrt(2 mu) dB wrapped to the torus, Euler-Maruyama at mc_dt.
FeynmanKacResult feynman_kac_mc(const PointFn& u0, const PointFn& V, double mu, double T,
                                const std::vector<std::vector<double>>& points, int dim,
                                int num_paths, std::uint64_t seed, double mc_dt = 1e-3);

// -- companion Burgers system --------------------------------------------------

struct VectorTrajectory {
    std::vector<double> times;
    std::vector<std::vector<SpatialField>> snapshots; // one field per component
    BlowUpEvent blowup;
};

// Heun integration of the gradient system, valid in the special class:
//   dv_j = sum_i L_i v_j o dW_i + ( d_j V + mu*Lap v_j + gamma*Lap^{k'} v_j
//                                   - sum_i v_i d_i v_j ) dt,
// with v_0 = grad u_0, against the same path as the HJB run.
VectorTrajectory burgers_companion(const SolverConfig& cfg, const NoisePath& path);

// -- reports -------------------------------------------------------------------

struct OracleReport {
    std::string oracle;
    std::vector<double> times;
    std::vector<double> err_linf;
    std::vector<double> err_l2;
    std::vector<double> err_hbeta;
    double beta = 2.0;
    double tol_linf = 0.0;
    bool pass = false;
    std::string metadata;
};

// Compares trajectory snapshots against reference fields at the same times.
OracleReport compare_fields(const std::string& oracle, std::span<const double> times,
                            std::span<const SpatialField> candidate,
                            std::span<const SpatialField> reference, double tol_linf,
                            double beta = 2.0);

struct MaxPrincipleReport {
    bool hypothesis_met = false; // special class and d_i V <= 0 on the grid
    bool pass = false;           // no violation beyond tol (when hypothesis met)
    double tol = 0.0;
    double initial_grad_sup = 0.0;
    double worst_margin = 0.0; // max_t grad_sup(t) - grad_sup(0)
    double worst_time = 0.0;
};

// Checks |grad u(t)|_inf <= |grad u(0)|_inf + tol along a recorded run.
// Asserted only when the lemma's hypotheses hold; tol defaults to the
// scheme-error budget 10*dt + N^{-k}.
MaxPrincipleReport max_principle_check(const Trajectory& traj, const SolverConfig& cfg,
                                       double tol);

double default_max_principle_tol(const SolverConfig& cfg);

struct UniquenessReport {
    bool bit_identical = false; // only meaningful for delta = 0
    bool envelope_holds = false;
    double delta = 0.0;
    double lambda = 0.0;          // Gronwall rate built from recorded norms
    double noise_allowance = 0.0; // exponent margin from the realized path
    double worst_ratio = 0.0;     // max_t gap^2 / envelope
    double terminal_gap = 0.0;    // ||u1(T) - u2(T)||_L2
};

// Twin runs on one path: identical data (delta = 0) must agree bit-exactly;
// perturbed data u0 + delta*sin(x_0) must stay inside the Gronwall envelope
//   gap^2(t) <= delta^2 ||sin||^2 exp(lambda t + noise_allowance)
// with lambda assembled from the run's own norm history (operator audit
// constant + discrete embedding of |Lap .|_inf) and the allowance from the
// realized increments.
UniquenessReport uniqueness_experiment(const SolverConfig& cfg, std::uint64_t seed,
                                       double delta);

struct GammaStudyRow {
    double gamma_high = 0.0;
    double gamma_low = 0.0;
    double sup_diff_hbeta = 0.0; // sup_t ||u^high - u^low||_{H^beta}
    double sup_diff_to_limit = 0.0; // sup_t ||u^high - u^0||_{H^beta}
};

struct GammaStudyReport {
    std::vector<GammaStudyRow> rows;
    double beta = 2.0;
    bool monotone = false; // each entry <= previous * slack
    double slack = 1.05;
};

// Runs the ito_exp_em stepper for each gamma in descending order plus
// gamma = 0 on the shared path and tabulates successive H^beta distances.
GammaStudyReport gamma_convergence_study(const SolverConfig& base,
                                         std::span<const double> gamma_list,
                                         const NoisePath& path, double beta = 2.0);

std::string oracle_report_json(const OracleReport& report);

} // namespace shjb
