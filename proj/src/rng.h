#pragma once

#include <array>
#include <cmath>
#include <cstdint>

namespace pbtzero {

inline uint64_t splitmix64(uint64_t& x) {
    x += 0x9e3779b97f4a7c15ULL;
    uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Mixes a variable number of 64-bit values into one seed. Used to derive
/// independent per-game / per-agent streams from a master seed so that
/// results do not depend on worker count or scheduling order.
inline uint64_t mix_seed(uint64_t a) {
    uint64_t s = a;
    return splitmix64(s);
}
template <typename... Rest>
inline uint64_t mix_seed(uint64_t a, Rest... rest) {
    uint64_t s = a ^ (0x632be59bd9b4e019ULL + mix_seed(static_cast<uint64_t>(rest)...));
    return splitmix64(s);
}

/// xoshiro256** generator. Chosen over std:: engines because its state is
/// four words (trivially checkpointable) and all sampling helpers below are
/// implemented here, so streams are identical across platforms and standard
/// library versions.
class Rng {
public:
    Rng() : Rng(0) {}
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& w : state_) w = splitmix64(x);
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(state_[1] * 5, 7) * 9;
        const uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = rotl(state_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double next_double() { return (next_u64() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, n), n >= 1, unbiased via rejection
    uint64_t next_below(uint64_t n) {
        const uint64_t threshold = (0 - n) % n;
        for (;;) {
            uint64_t r = next_u64();
            if (r >= threshold) return r % n;
        }
    }

    bool next_bool() { return (next_u64() >> 63) != 0; }

    double normal() {
        // Box-Muller, one output per call
        double u1;
        do {
            u1 = next_double();
        } while (u1 <= 0.0);
        double u2 = next_double();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    // Marsaglia-Tsang; alpha < 1 handled by the boost trick
    double gamma(double alpha) {
        if (alpha < 1.0) {
            double u;
            do {
                u = next_double();
            } while (u <= 0.0);
            return gamma(alpha + 1.0) * std::pow(u, 1.0 / alpha);
        }
        const double d = alpha - 1.0 / 3.0;
        const double c = 1.0 / std::sqrt(9.0 * d);
        for (;;) {
            double x, v;
            do {
                x = normal();
                v = 1.0 + c * x;
            } while (v <= 0.0);
            v = v * v * v;
            double u = next_double();
            if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
            if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
        }
    }

    std::array<uint64_t, 4> state() const { return state_; }
    void set_state(const std::array<uint64_t, 4>& s) { state_ = s; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    std::array<uint64_t, 4> state_{};
};

}  // namespace pbtzero
