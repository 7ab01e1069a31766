#pragma once

#include <array>
#include <cstdint>

namespace gibbslab {

// xoshiro256** seeded from (master_seed, stream_index).
//
// The four state words are consecutive splitmix64 outputs starting from
// mix64(master_seed) ^ mix64(stream_index + 0x9E3779B97F4A7C15), where mix64 is
// the splitmix64 finalizer. Normals use a single uniform through the normal
// quantile, so the sample sequence is a pure function of the integer output.
class RngStream {
public:
    RngStream(std::uint64_t master_seed, std::uint64_t stream_index);

    std::uint64_t next();
    double uniform();       // [0, 1)
    double uniform_open();  // (0, 1)
    double normal();
    double exponential();

    // Independent child stream keyed by salt.
    RngStream derive(std::uint64_t salt) const;
    // Fresh stream seeded by one draw of this stream (advances this stream).
    RngStream spawn();

    std::uint64_t master_seed() const { return master_seed_; }
    std::uint64_t stream_index() const { return stream_index_; }

private:
    std::uint64_t master_seed_;
    std::uint64_t stream_index_;
    std::array<std::uint64_t, 4> s_{};
};

std::uint64_t mix64(std::uint64_t x);
std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b);

}  // namespace gibbslab
