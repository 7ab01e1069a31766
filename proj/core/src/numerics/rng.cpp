#include "gibbslab/numerics/rng.hpp"

#include <cmath>

#include "gibbslab/numerics/special.hpp"

namespace gibbslab {

namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

}  // namespace

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ (mix64(b + kGolden) + kGolden + (a << 6) + (a >> 2)));
}

RngStream::RngStream(std::uint64_t master_seed, std::uint64_t stream_index)
    : master_seed_(master_seed), stream_index_(stream_index) {
    std::uint64_t z = mix64(master_seed) ^ mix64(stream_index + kGolden);
    for (auto& word : s_) {
        z += kGolden;
        word = mix64(z);
    }
}

std::uint64_t RngStream::next() {
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double RngStream::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double RngStream::uniform_open() {
    return (static_cast<double>(next() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() { return normal_quantile(uniform_open()); }

double RngStream::exponential() { return -std::log(uniform_open()); }

RngStream RngStream::derive(std::uint64_t salt) const {
    return RngStream(master_seed_, hash_combine(stream_index_, salt));
}

RngStream RngStream::spawn() {
    const std::uint64_t seed = next();
    return RngStream(seed, stream_index_);
}

}  // namespace gibbslab
