// Deterministic RNG stack: splitmix64 for seeding/stream derivation,
// xoshiro256++ for the draws. No libstdc++ distributions are used so that
// streams are bit-identical across platforms and compiler versions.
#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace assoclab {

inline uint64_t splitmix64_next(uint64_t& state) {
    uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Child stream seed for (master, index, tag). Replicate r of stream X uses
// derive_seed(master, r, kStreamX); independence of X and Y is structural
// because the tags differ.
inline uint64_t derive_seed(uint64_t master, uint64_t index, uint64_t tag) {
    uint64_t s = master;
    uint64_t a = splitmix64_next(s);
    s = a ^ (index * 0xd1342543de82ef95ULL + 0x2545f4914f6cdd1dULL);
    uint64_t b = splitmix64_next(s);
    s = b ^ (tag * 0x9e3779b97f4a7c15ULL);
    return splitmix64_next(s);
}

inline constexpr uint64_t kStreamX = 0x586d61696eULL;        // "Xmain"
inline constexpr uint64_t kStreamY = 0x596d61696eULL;        // "Ymain"
inline constexpr uint64_t kStreamGraph = 0x677261706830ULL;  // graph build
inline constexpr uint64_t kStreamBoot = 0x626f6f7431ULL;     // bootstrap

class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t sm = seed;
        for (auto& w : s_) w = splitmix64_next(sm);
        have_spare_ = false;
    }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; second value of each pair is cached.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        double u2 = uniform();
        // 1-u1 keeps the log argument in (0,1].
        double r = std::sqrt(-2.0 * std::log1p(-u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Unbiased integer in [0, n), Lemire's method with rejection.
    uint64_t below(uint64_t n) {
        uint64_t x = next_u64();
        __uint128_t m = static_cast<__uint128_t>(x) * n;
        uint64_t l = static_cast<uint64_t>(m);
        if (l < n) {
            uint64_t t = (-n) % n;
            while (l < t) {
                x = next_u64();
                m = static_cast<__uint128_t>(x) * n;
                l = static_cast<uint64_t>(m);
            }
        }
        return static_cast<uint64_t>(m >> 64);
    }

    bool bernoulli(double p) { return uniform() < p; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(below(i));
            std::swap(v[i - 1], v[j]);
        }
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

    uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_;
};

}  // namespace assoclab
