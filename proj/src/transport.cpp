#include "shjb/transport.hpp"

#include <cmath>
#include <stdexcept>

namespace shjb {

namespace {

void require_grid(const TransportOperator& op, const SpatialField& u) {
    if (op.a.empty()) throw std::invalid_argument("transport operator has no coefficients");
    if (!(op.a[0].grid == u.grid)) throw std::invalid_argument("transport: grid mismatch");
}

// max over multi-indices of total order exactly `order` of sup |D^alpha f|.
double max_abs_derivative(const SpectralField& F, int order, int start_axis,
                          const TorusGrid& grid) {
    if (order == 0) return sup_norm(to_physical(F));
    double m = 0.0;
    for (int d = start_axis; d < grid.dim; ++d)
        m = std::max(m, max_abs_derivative(derivative(F, d), order - 1, d, grid));
    return m;
}

} // namespace

double w_inf_norm(const SpatialField& f, int order) {
    SpectralField F = to_spectral(f);
    double m = 0.0;
    for (int total = 0; total <= order; ++total)
        m = std::max(m, max_abs_derivative(F, total, 0, f.grid));
    return m;
}

TransportOperator make_transport(std::vector<SpatialField> a, std::vector<SpatialField> b,
                                 double k) {
    if (a.empty() || a.size() != b.size())
        throw std::invalid_argument("transport: need one (a_i, b_i) pair per axis");
    const TorusGrid grid = a[0].grid;
    if (static_cast<int>(a.size()) != grid.dim)
        throw std::invalid_argument("transport: coefficient count must equal grid dim");
    TransportOperator op;
    const int smoothness_order = static_cast<int>(std::floor(k)) + 1;
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (!(a[i].grid == grid) || !(b[i].grid == grid))
            throw std::invalid_argument("transport: coefficient grid mismatch");
        if (!all_finite(a[i]) || !all_finite(b[i]))
            throw std::invalid_argument("transport: non-finite coefficient");
        op.a_smoothness.push_back(w_inf_norm(a[i], smoothness_order));
        op.b_smoothness.push_back(w_inf_norm(b[i], smoothness_order));
    }
    op.a = std::move(a);
    op.b = std::move(b);
    return op;
}

SpatialField apply_L(const TransportOperator& op, int i, const SpatialField& u) {
    require_grid(op, u);
    if (i < 0 || i >= op.dims()) throw std::invalid_argument("apply_L: bad axis");
    SpatialField du = to_physical(derivative(to_spectral(u), i));
    SpatialField out = multiply_dealiased(op.a[i], du);
    return out + multiply_dealiased(op.b[i], u);
}

SpatialField apply_L_adjoint(const TransportOperator& op, int i, const SpatialField& phi) {
    require_grid(op, phi);
    if (i < 0 || i >= op.dims()) throw std::invalid_argument("apply_L_adjoint: bad axis");
    SpatialField a_phi = multiply_dealiased(op.a[i], phi);
    SpatialField d_a_phi = to_physical(derivative(to_spectral(a_phi), i));
    return multiply_dealiased(op.b[i], phi) - d_a_phi;
}

SpatialField strat_correction(const TransportOperator& op, const SpatialField& u) {
    require_grid(op, u);
    SpatialField acc = make_field(u.grid);
    for (int i = 0; i < op.dims(); ++i) acc = acc + apply_L(op, i, apply_L(op, i, u));
    return 0.5 * acc;
}

OperatorBoundDiag operator_bound_diag(const TransportOperator& op, const SpatialField& u) {
    require_grid(op, u);
    double s = 0.0;
    for (int i = 0; i < op.dims(); ++i) {
        SpatialField lu = apply_L(op, i, u);
        s += inner_product(apply_L(op, i, lu), u) + inner_product(lu, lu);
    }
    double c_ab = 0.0;
    for (int i = 0; i < op.dims(); ++i) {
        double a_inf = sup_norm(op.a[i]);
        double b_inf = sup_norm(op.b[i]);
        double a_w2 = w_inf_norm(op.a[i], 2);
        double b_w1 = w_inf_norm(op.b[i], 1);
        c_ab += 2.0 * (a_inf * a_w2 + a_inf * b_w1 + b_inf * b_inf + b_w1 * a_inf + b_inf);
    }
    double l2 = l2_norm(u);
    return OperatorBoundDiag{s, c_ab * l2 * l2, c_ab};
}

SpecialClassTag detect_special_class(const TransportOperator& op) {
    constexpr double tol = 1e-10;
    SpecialClassTag tag;
    tag.c.assign(op.dims(), 0.0);
    for (int i = 0; i < op.dims(); ++i) {
        double a_bar = mean_value(op.a[i]);
        double b_bar = mean_value(op.b[i]);
        for (double v : op.a[i].values)
            if (std::abs(v - a_bar) > tol) return SpecialClassTag{};
        for (double v : op.b[i].values)
            if (std::abs(v - b_bar) > tol) return SpecialClassTag{};
        tag.c[i] = b_bar; // grad a vanishes for periodic constants
    }
    tag.is_special = true;
    return tag;
}

} // namespace shjb
