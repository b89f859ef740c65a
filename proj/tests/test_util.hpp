#pragma once

#include "shjb/field.hpp"

#include <cmath>
#include <random>

namespace shjb::testutil {

inline SpatialField sin_field(const TorusGrid& grid, double amplitude = 1.0, int mode = 1) {
    return sample(grid, [&](std::span<const double> x) {
        double s = 0.0;
        for (double xi : x) s += std::sin(mode * xi);
        return amplitude * s;
    });
}

// Random real trig polynomial with modes up to max_mode per axis.
inline SpatialField random_band_limited(const TorusGrid& grid, std::uint64_t seed,
                                        int max_mode = 8, double amplitude = 1.0) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coef(-1.0, 1.0);
    std::vector<double> cs, ss;
    for (int m = 1; m <= max_mode; ++m) {
        cs.push_back(coef(rng) / m);
        ss.push_back(coef(rng) / m);
    }
    double c0 = coef(rng);
    return sample(grid, [&](std::span<const double> x) {
        double v = c0;
        for (double xi : x)
            for (int m = 1; m <= max_mode; ++m)
                v += cs[m - 1] * std::cos(m * xi) + ss[m - 1] * std::sin(m * xi);
        return amplitude * v;
    });
}

inline double max_abs_diff(const SpatialField& f, const SpatialField& g) {
    double m = 0.0;
    for (std::size_t j = 0; j < f.values.size(); ++j)
        m = std::max(m, std::abs(f.values[j] - g.values[j]));
    return m;
}

inline std::size_t mode_index(const TorusGrid& grid, std::span<const int> xi) {
    const int N = grid.points_per_axis;
    std::size_t flat = 0;
    for (int d = 0; d < grid.dim; ++d) {
        int idx = xi[d] >= 0 ? xi[d] : xi[d] + N;
        flat = flat * N + idx;
    }
    return flat;
}

} // namespace shjb::testutil
