#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

namespace ellipfuse {

/// splitmix64 step; used to derive independent stream seeds from a root seed.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Purposes for deriving sub-streams. Each (purpose, index) pair gets its own
/// generator, so adding agents or runs never perturbs existing streams.
enum class StreamPurpose : std::uint64_t {
    measurement_noise = 1,
    message_drops = 2,
    monte_carlo_params = 3,
    monte_carlo_run = 4,
    pair_generation = 5,
};

inline std::uint64_t derive_seed(std::uint64_t root, StreamPurpose purpose, std::uint64_t index) {
    std::uint64_t s = root;
    splitmix64(s);
    s ^= static_cast<std::uint64_t>(purpose) * 0xD6E8FEB86659FD93ULL;
    splitmix64(s);
    s ^= index * 0xA5A5A5A5A5A5A5A5ULL;
    return splitmix64(s);
}

/// Deterministic random stream. The engine is std::mt19937_64; normal draws
/// use the Box-Muller transform with no cached spare, so every normal() call
/// consumes exactly two engine words and replay is trivially reproducible.
/// A running FNV-style checksum of the raw engine output supports the paired
/// noise-stream accounting in the simulator.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng stream(std::uint64_t root, StreamPurpose purpose, std::uint64_t index) {
        return Rng(derive_seed(root, purpose, index));
    }

    std::uint64_t next_u64() {
        const std::uint64_t w = engine_();
        checksum_ = (checksum_ ^ w) * 0x100000001B3ULL;
        return w;
    }

    /// Uniform in [0, 1).
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    /// Standard normal deviate.
    double normal() {
        // u1 in (0, 1] so the log stays finite.
        const double u1 = static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
        const double u2 = static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    std::uint64_t checksum() const { return checksum_; }

private:
    std::mt19937_64 engine_;
    std::uint64_t checksum_ = 0xCBF29CE484222325ULL;
};

} // namespace ellipfuse
