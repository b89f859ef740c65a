#pragma once

// The first-order operators L_i u = a_i d_i u + b_i u driving the transport
// noise, their adjoints and squares, the Stratonovich-to-Ito correction
// (1/2) sum_i L_i^2, and detection of the constant-coefficient class for
// which the gradient maximum principle holds.

#include "shjb/field.hpp"

#include <optional>
#include <vector>

namespace shjb {

struct TransportOperator {
    std::vector<SpatialField> a; // one coefficient field per axis
    std::vector<SpatialField> b;
    // Smoothness budget: discrete W^{k+1,inf} norms recorded at construction.
    std::vector<double> a_smoothness;
    std::vector<double> b_smoothness;
    int dims() const { return static_cast<int>(a.size()); }
};

// Validates common grids and finiteness, records W^{k+1,inf} budgets.
TransportOperator make_transport(std::vector<SpatialField> a, std::vector<SpatialField> b,
                                 double k);

struct SpecialClassTag {
    bool is_special = false;
    std::vector<double> c; // grad a + b, per axis, when both are constant
};

// Discrete W^{m,inf} norm: max over |alpha| <= m of sup |D^alpha f|.
double w_inf_norm(const SpatialField& f, int order);

SpatialField apply_L(const TransportOperator& op, int i, const SpatialField& u);

// L*_i phi = -d_i(a_i phi) + b_i phi.
SpatialField apply_L_adjoint(const TransportOperator& op, int i, const SpatialField& phi);

// (1/2) sum_i L_i(L_i u).
SpatialField strat_correction(const TransportOperator& op, const SpatialField& u);

struct OperatorBoundDiag {
    double s;     // sum_i <L_i^2 u, u> + <L_i u, L_i u>
    double bound; // c_ab * ||u||_L2^2
    double c_ab;
};

// Numerical audit of the first-order-operator inequality
//   sum_i <L_i^2 u, u> + <L_i u, L_i u>  <=  C(a,b) ||u||_L2^2.
// The constant is assembled from the recorded coefficient norms as
//   C = 2( |a|_inf |a|_{W2inf} + |a|_inf |b|_{W1inf} + |b|_inf^2
//          + |b|_{W1inf} |a|_inf + |b|_inf ),
// summed over axes.
OperatorBoundDiag operator_bound_diag(const TransportOperator& op, const SpatialField& u);

// Special class: every a_i and b_i constant over the grid to 1e-10 absolute
// (on a periodic domain a constant gradient forces grad a = 0, so c = b).
SpecialClassTag detect_special_class(const TransportOperator& op);

} // namespace shjb
