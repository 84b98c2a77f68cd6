#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

namespace tilelab {

// Deterministic RNG. Distributions are implemented by hand because the
// standard <random> distributions are implementation-defined and would
// break byte-identical artifacts across standard libraries.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(static_cast<std::uint32_t>(seed)) {}

    std::uint32_t next_u32() { return engine_(); }

    // Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(engine_()) * (1.0 / 4294967296.0);
    }

    // Uniform integer in [0, n).
    std::uint32_t below(std::uint32_t n) {
        return n == 0 ? 0 : engine_() % n;
    }

    // Standard normal via Box-Muller.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

    // Fisher-Yates shuffle.
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = below(static_cast<std::uint32_t>(i));
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace tilelab
