#include "ousv/rng.hpp"

#include <cmath>
#include <numbers>

namespace ousv {

NormalRng::NormalRng(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
    engine_.seed(seq);
}

double NormalRng::next_uniform() {
    // 53 random bits shifted to the open interval (0,1)
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
}

double NormalRng::next() {
    if (has_spare_) {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = next_uniform();
    const double u2 = next_uniform();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

void NormalRng::fill(std::span<double> out) {
    for (double& x : out) x = next();
}

}  // namespace ousv
