#pragma once

#include <cmath>
#include <cstdint>

namespace frsde::core {

/// Counter-based pseudo-random stream (SplitMix64 finalizer over a Weyl
/// sequence). A stream is fully determined by (master seed, stream id),
/// so trajectory j reproduces bit-identically no matter how many streams
/// run in parallel or in what order.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
        : state_(mix(seed ^ mix(stream_id + 0x6A09E667F3BCC909ULL))), tag_(state_) {}

    /// Stable identifier of the stream's starting point (reproducibility tag).
    std::uint64_t tag() const { return tag_; }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform double in (0, 1].
    double next_uniform() {
        const std::uint64_t bits = next_u64() >> 11;
        return (static_cast<double>(bits) + 1.0) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller (pairs cached).
    double next_normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = next_uniform();
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double th = 2.0 * M_PI * u2;
        spare_ = r * std::sin(th);
        have_spare_ = true;
        return r * std::cos(th);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
    std::uint64_t tag_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace frsde::core
