#pragma once

// Seeded Brownian increment tables. The finest path is generated once; all
// coarser time grids consume sums of consecutive fine increments, so every
// refinement level is coupled to the same Brownian path.
//
// Normals come from mt19937_64 through a fixed Box-Muller map rather than
// std::normal_distribution, whose output is implementation-defined; the
// table is therefore bit-reproducible for a given seed across toolchains.

#include <cstdint>
#include <random>
#include <vector>

namespace shjb {

struct NoisePath {
    std::uint64_t seed = 0;
    double dt = 0.0;
    int dims = 0;
    int steps = 0;
    std::vector<double> increments; // layout: step * dims + axis

    double increment(int step, int axis) const {
        return increments[static_cast<std::size_t>(step) * dims + axis];
    }

    // W_axis(t_m) = sum of the first m increments.
    double cumulative(int step, int axis) const;

    // Sums groups of `factor` consecutive increments; steps must divide evenly.
    NoisePath coarsen(int factor) const;
};

NoisePath sample_path(std::uint64_t seed, int dims, double dt, int steps);

// Documented seed-splitting rule for parallel ensembles: member i of an
// ensemble derived from `master` uses split_seed(master, i) (splitmix64 of
// master xor index).
std::uint64_t split_seed(std::uint64_t master, std::uint64_t index);

// Standard normal stream shared by sample_path and the MC oracle.
class NormalStream {
  public:
    explicit NormalStream(std::uint64_t seed) : engine_(seed) {}
    double next();

  private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace shjb
