#include "shjb/noise.hpp"

#include <cmath>
#include <stdexcept>

namespace shjb {

double NormalStream::next() {
    if (have_spare_) {
        have_spare_ = false;
        return spare_;
    }
    // Box-Muller on uniforms built from the top 53 bits of the engine output.
    constexpr double inv53 = 1.0 / 9007199254740992.0; // 2^-53
    double u1, u2;
    do {
        u1 = static_cast<double>(engine_() >> 11) * inv53;
    } while (u1 <= 0.0);
    u2 = static_cast<double>(engine_() >> 11) * inv53;
    double radius = std::sqrt(-2.0 * std::log(u1));
    double angle = 6.283185307179586476925286766559 * u2;
    spare_ = radius * std::sin(angle);
    have_spare_ = true;
    return radius * std::cos(angle);
}

double NoisePath::cumulative(int step, int axis) const {
    double w = 0.0;
    for (int m = 0; m < step; ++m) w += increment(m, axis);
    return w;
}

NoisePath NoisePath::coarsen(int factor) const {
    if (factor < 1 || steps % factor != 0)
        throw std::invalid_argument("coarsen: factor must divide steps");
    NoisePath out;
    out.seed = seed;
    out.dt = dt * factor;
    out.dims = dims;
    out.steps = steps / factor;
    out.increments.assign(static_cast<std::size_t>(out.steps) * dims, 0.0);
    for (int m = 0; m < steps; ++m)
        for (int i = 0; i < dims; ++i)
            out.increments[static_cast<std::size_t>(m / factor) * dims + i] +=
                increment(m, i);
    return out;
}

NoisePath sample_path(std::uint64_t seed, int dims, double dt, int steps) {
    if (dims < 1 || steps < 1 || dt <= 0.0)
        throw std::invalid_argument("sample_path: bad arguments");
    NoisePath path;
    path.seed = seed;
    path.dt = dt;
    path.dims = dims;
    path.steps = steps;
    path.increments.resize(static_cast<std::size_t>(steps) * dims);
    NormalStream normals(seed);
    const double scale = std::sqrt(dt);
    for (auto& dw : path.increments) dw = scale * normals.next();
    return path;
}

std::uint64_t split_seed(std::uint64_t master, std::uint64_t index) {
    // splitmix64 finalizer
    std::uint64_t z = master ^ (index + 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace shjb
