#ifndef ETYMOGRAPH_RNG_HPP
#define ETYMOGRAPH_RNG_HPP

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace etymograph {

// Splitmix64 generator. Chosen over std::mt19937 + std::normal_distribution
// because the standard distributions are implementation-defined; this keeps
// byte-identical output across standard libraries. The exact update rule is
// documented in the README.
class SplitMix64 {
public:
    explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1), 53-bit resolution.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Unbiased integer in [0, bound) by rejection.
    std::uint64_t next_below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    // Standard normal via Box-Muller; one value per call, cache for the pair.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1;
        do {
            u1 = next_unit();
        } while (u1 == 0.0);
        const double u2 = next_unit();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::uint64_t state_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Derives a sub-seed from the run seed and a subsystem label (FNV-1a over the
// label folded into the seed), so one --seed reproduces a whole experiment
// while subsystems still draw from independent streams.
inline std::uint64_t derive_seed(std::uint64_t seed, std::string_view label) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (char c : label) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return SplitMix64(seed ^ h).next_u64();
}

}  // namespace etymograph

#endif
