#include "shjb/presets.hpp"

#include <cmath>
#include <stdexcept>

namespace shjb {

SpatialField field_preset(const TorusGrid& grid, const std::string& name, double amplitude,
                          double width) {
    if (name == "zero") return make_field(grid, 0.0);
    if (name == "constant") return make_field(grid, amplitude);
    if (name == "sin")
        return sample(grid, [&](std::span<const double> x) {
            double s = 0.0;
            for (double xi : x) s += std::sin(xi);
            return amplitude * s;
        });
    if (name == "neg_cos_well")
        return sample(grid, [&](std::span<const double> x) {
            double s = 1.0;
            for (double xi : x) s += std::cos(xi);
            return -amplitude * s;
        });
    if (name == "gaussian_bump") {
        constexpr int modes = 8;
        // peak of the truncated series at x = pi, used to normalize
        double peak = 0.0;
        for (int m = 1; m <= modes; ++m) peak += std::exp(-0.5 * width * width * m * m);
        return sample(grid, [&](std::span<const double> x) {
            double value = 0.0;
            for (double xi : x) {
                double axis = 0.0;
                for (int m = 1; m <= modes; ++m)
                    axis += std::exp(-0.5 * width * width * m * m) *
                            std::cos(m * (xi - 3.14159265358979323846));
                value += axis / peak;
            }
            return amplitude * value;
        });
    }
    throw std::invalid_argument("unknown field preset: " + name);
}

TransportOperator transport_preset(const TorusGrid& grid, const std::string& name, double a,
                                   double b, double k) {
    std::vector<SpatialField> as, bs;
    for (int i = 0; i < grid.dim; ++i) {
        if (name == "zero") {
            as.push_back(make_field(grid, 0.0));
            bs.push_back(make_field(grid, 0.0));
        } else if (name == "constant") {
            as.push_back(make_field(grid, a));
            bs.push_back(make_field(grid, b));
        } else if (name == "sine") {
            as.push_back(sample(grid, [&](std::span<const double> x) {
                return a * std::sin(x[static_cast<std::size_t>(i)]);
            }));
            bs.push_back(make_field(grid, b));
        } else {
            throw std::invalid_argument("unknown transport preset: " + name);
        }
    }
    return make_transport(std::move(as), std::move(bs), k);
}

} // namespace shjb
