#pragma once

#include <cstdint>
#include <random>
#include <span>

namespace ousv {

/// Standard-normal generator for one reproducible substream. A stream is
/// fully determined by (seed, stream), so work split across MC sets gives
/// bit-identical results no matter how the sets are scheduled over threads.
/// Box-Muller over mt19937_64; the second normal of each pair is cached.
class NormalRng {
  public:
    NormalRng(std::uint64_t seed, std::uint64_t stream);

    double next();
    void fill(std::span<double> out);

  private:
    double next_uniform();  // strictly inside (0,1)

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace ousv
