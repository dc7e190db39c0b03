#pragma once

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>

namespace selfnorm {

// Counter-addressable random stream built on xoshiro256**.
//
// Each (master_seed, stream_id) pair expands through SplitMix64 into an
// independent 256-bit state, so replication r of an experiment can always draw
// from RngStream(seed, r) and get the same sequence no matter which worker
// thread runs it or in which order results are collected.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_id)
        : master_seed_(master_seed), stream_id_(stream_id) {
        std::uint64_t sm = master_seed ^ (stream_id * 0x9e3779b97f4a7c15ULL) ^ 0xd1b54a32d192ed03ULL;
        for (auto& word : state_) word = splitmix64(sm);
        // A cold state of all zeroes would be absorbing; the constant above
        // makes that unreachable, but keep the guard for belt and braces.
        if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
    }

    std::uint64_t next_u64() {
        const std::uint64_t result = std::rotl(state_[1] * 5, 7) * 9;
        const std::uint64_t t = state_[1] << 17;
        state_[2] ^= state_[0];
        state_[3] ^= state_[1];
        state_[1] ^= state_[2];
        state_[0] ^= state_[3];
        state_[2] ^= t;
        state_[3] = std::rotl(state_[3], 45);
        return result;
    }

    // Uniform on [0, 1), 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform on (0, 1]; safe to pass to log().
    double uniform_pos() { return 1.0 - uniform01(); }

    // Standard normal via the Marsaglia polar method with a cached spare.
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double scale = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * scale;
        has_spare_ = true;
        return u * scale;
    }

    // Exponential with mean 1.
    double exponential() { return -std::log(uniform_pos()); }

    // Fair +/-1.
    double rademacher() { return (next_u64() >> 63) ? 1.0 : -1.0; }

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_id() const { return stream_id_; }

private:
    static std::uint64_t splitmix64(std::uint64_t& x) {
        x += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = x;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t master_seed_;
    std::uint64_t stream_id_;
    std::array<std::uint64_t, 4> state_{};
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace selfnorm
