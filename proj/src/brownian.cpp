#include "fracsde/brownian.hpp"

#include <cmath>

namespace fracsde {
namespace rng {

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
}

}  // namespace

Xoshiro256pp::Xoshiro256pp(std::uint64_t seed) {
    std::uint64_t s = seed;
    for (auto& word : state_) word = splitmix64(s);
}

std::uint64_t Xoshiro256pp::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Xoshiro256pp::next_unit() {
    // top 53 bits, centred so 0 and 1 are unreachable
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Xoshiro256pp::next_normal() {
    return inverse_normal_cdf(next_unit());
}

double inverse_normal_cdf(double p) {
    // Wichura's PPND16 rational approximations
    if (!(p > 0.0 && p < 1.0))
        throw Error(Errc::out_of_domain, "inverse normal CDF needs p in (0, 1)");

    static constexpr double a[8] = {
        3.3871328727963666080e0,  1.3314166789178437745e2,
        1.9715909503065514427e3,  1.3731693765509461125e4,
        4.5921953931549871457e4,  6.7265770927008700853e4,
        3.3430575583588128105e4,  2.5090809287301226727e3};
    static constexpr double b[8] = {
        1.0,                      4.2313330701600911252e1,
        6.8718700749205790830e2,  5.3941960214247511077e3,
        2.1213794301586595867e4,  3.9307895800092710610e4,
        2.8729085735721942674e4,  5.2264952788528545610e3};
    static constexpr double c[8] = {
        1.42343711074968357734e0, 4.63033784615654529590e0,
        5.76949722146069140550e0, 3.64784832476320460504e0,
        1.27045825245236838258e0, 2.41780725177450611770e-1,
        2.27238449892691845833e-2, 7.74545014278341407640e-4};
    static constexpr double d[8] = {
        1.0,                      2.05319162663775882187e0,
        1.67638483018380384940e0, 6.89767334985100004550e-1,
        1.48103976427480074590e-1, 1.51986665636164571966e-2,
        5.47593808499534494600e-4, 1.05075007164441684324e-9};
    static constexpr double e[8] = {
        6.65790464350110377720e0, 5.46378491116411436990e0,
        1.78482653991729133580e0, 2.96560571828504891230e-1,
        2.65321895265761230930e-2, 1.24266094738807843860e-3,
        2.71155556874348757815e-5, 2.01033439929228813265e-7};
    static constexpr double f[8] = {
        1.0,                      5.99832206555887937690e-1,
        1.36929880922735805310e-1, 1.48753612908506148525e-2,
        7.86869131145613259100e-4, 1.84631831751005468180e-5,
        1.42151175831644588870e-7, 2.04426310338993978564e-15};

    auto poly = [](const double (&coef)[8], double x) {
        double acc = coef[7];
        for (int i = 6; i >= 0; --i) acc = acc * x + coef[i];
        return acc;
    };

    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q * poly(a, r) / poly(b, r);
    }
    double r = (q < 0.0) ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double x;
    if (r <= 5.0) {
        r -= 1.6;
        x = poly(c, r) / poly(d, r);
    } else {
        r -= 5.0;
        x = poly(e, r) / poly(f, r);
    }
    return (q < 0.0) ? -x : x;
}

}  // namespace rng

BrownianPath sample_path(std::uint64_t seed, const TimeGrid& grid) {
    BrownianPath path{grid, seed, {}};
    path.increments.resize(static_cast<std::size_t>(grid.steps()));
    rng::Xoshiro256pp gen(seed);
    const double scale = std::sqrt(grid.dt());
    for (auto& dw : path.increments) dw = scale * gen.next_normal();
    return path;
}

BrownianPath coarsen(const BrownianPath& path, std::int64_t factor) {
    const std::int64_t n = path.grid.steps();
    if (factor < 1 || n % factor != 0)
        throw Error(Errc::factor_does_not_divide_n,
                    "coarsening factor " + std::to_string(factor) +
                        " does not divide " + std::to_string(n));
    BrownianPath coarse{TimeGrid(path.grid.horizon(), n / factor), path.seed, {}};
    coarse.increments.resize(static_cast<std::size_t>(n / factor));
    std::size_t j = 0;
    for (auto& dw : coarse.increments) {
        double sum = 0.0;
        for (std::int64_t k = 0; k < factor; ++k) sum += path.increments[j++];
        dw = sum;
    }
    return coarse;
}

}  // namespace fracsde
