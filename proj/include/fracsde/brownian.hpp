#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "fracsde/core.hpp"

namespace fracsde {

namespace rng {

/// xoshiro256++ seeded through splitmix64 from a single 64-bit value.
class Xoshiro256pp {
public:
    explicit Xoshiro256pp(std::uint64_t seed);

    std::uint64_t next_u64();

    /// Uniform draw in the open interval (0, 1).
    double next_unit();

    /// Standard normal draw via the inverse-CDF transform.
    double next_normal();

private:
    std::array<std::uint64_t, 4> state_;
};

/// Inverse of the standard normal CDF, accurate to ~1e-15 relative for
/// p in (0, 1); throws OutOfDomain outside.
double inverse_normal_cdf(double p);

inline constexpr const char* kGeneratorId =
    "xoshiro256++(splitmix64-seeded), N(0,1) via inverse-CDF";

}  // namespace rng

/// Increments of a scalar Brownian motion on a uniform grid.
struct BrownianPath {
    TimeGrid grid;
    std::uint64_t seed = 0;
    std::vector<double> increments;  // increments[j] = W(t_j+1) - W(t_j)

    double increment(std::int64_t j) const { return increments[static_cast<std::size_t>(j)]; }
};

/// Draw the grid.steps() increments for one path; same seed, same bits.
BrownianPath sample_path(std::uint64_t seed, const TimeGrid& grid);

/// Merge each run of `factor` consecutive increments (left-to-right sums)
/// into one coarse increment; factor must divide the step count.
BrownianPath coarsen(const BrownianPath& path, std::int64_t factor);

}  // namespace fracsde
