#pragma once

#include <cmath>
#include <cstdint>

namespace pbsa {

/// Deterministic generator with a fully pinned algorithm (splitmix64 core,
/// Box-Muller normals) so outputs are bit-identical across platforms and
/// standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// uniform in [0, 1)
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// uniform in [lo, hi)
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

    /// standard normal via Box-Muller
    float normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * 3.14159265358979323846 * u2;
        spare_ = static_cast<float>(r * std::sin(theta));
        have_spare_ = true;
        return static_cast<float>(r * std::cos(theta));
    }

    /// derive an independent stream seed
    static std::uint64_t derive(std::uint64_t seed, std::uint64_t stream) {
        Rng r(seed ^ (0xd1b54a32d192ed03ULL * (stream + 1)));
        return r.next_u64();
    }

private:
    std::uint64_t state_;
    bool have_spare_ = false;
    float spare_ = 0.0f;
};

}  // namespace pbsa
