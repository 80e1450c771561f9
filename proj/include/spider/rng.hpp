#pragma once

#include <cmath>
#include <cstdint>

namespace spider {

// SplitMix64 finalizer. Full-avalanche 64-bit mixer; the basis for both the
// counter-based site sampler and stream seeding.
inline uint64_t mix64(uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Counter-based draw: a pure function of (key, counter). Used for the lazy
// environment realization so sites can be materialized in any order.
inline uint64_t counter_hash(uint64_t key, uint64_t counter) {
    return mix64(key ^ mix64(counter));
}

inline double to_unit_double(uint64_t bits) {
    // 53 high bits -> [0, 1)
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

inline double counter_uniform01(uint64_t key, uint64_t counter) {
    return to_unit_double(counter_hash(key, counter));
}

// Xoshiro256++ for trajectory streams. One instance per replica, seeded from
// (master seed, stream id) through SplitMix64.
class Xoshiro256pp {
public:
    Xoshiro256pp() : Xoshiro256pp(0, 0) {}

    Xoshiro256pp(uint64_t master_seed, uint64_t stream_id) {
        uint64_t sm = mix64(master_seed ^ mix64(stream_id ^ 0x5851f42d4c957f2dULL));
        for (auto& w : s_) {
            sm += 0x9e3779b97f4a7c15ULL;
            w = mix64(sm);
        }
        // All-zero state is invalid; the mixer makes this astronomically
        // unlikely, but guard anyway.
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
    }

    uint64_t next() {
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

    // uniform on [0, 1)
    double uniform() { return to_unit_double(next()); }

    // uniform on (0, 1], safe as an argument to log
    double uniform_pos() { return 1.0 - uniform(); }

    double exponential(double rate) { return -std::log(uniform_pos()) / rate; }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
};

}  // namespace spider
