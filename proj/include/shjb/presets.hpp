#pragma once

// Canonical closed-form presets for initial data, potentials and transport
// coefficients, shared by the CLI and the test suites.

#include "shjb/field.hpp"
#include "shjb/transport.hpp"

#include <string>

namespace shjb {

// Named scalar fields:
//   zero            0
//   constant        amplitude
//   sin             amplitude * sum_i sin(x_i)
//   neg_cos_well    -amplitude * (1 + sum_i cos(x_i))
//   gaussian_bump   periodic bump from the truncated series
//                   amplitude * c * sum_{|xi|<=8} exp(-width^2 xi^2 / 2) cos(xi (x-pi))
//                   per axis, normalized to peak amplitude
SpatialField field_preset(const TorusGrid& grid, const std::string& name,
                          double amplitude = 1.0, double width = 0.5);

// Named coefficient families:
//   zero        a_i = 0,   b_i = 0
//   constant    a_i = a,   b_i = b
//   sine        a_i = a * sin(x_i), b_i = b
TransportOperator transport_preset(const TorusGrid& grid, const std::string& name,
                                   double a, double b, double k);

} // namespace shjb
