#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>

namespace purt::rng {

/// SplitMix64 step; used to decorrelate derived seeds.
[[nodiscard]] constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// FNV-1a over a string, for deriving table seeds from (master seed, key).
[[nodiscard]] std::uint64_t hash_string(const std::string& s) noexcept;

/// Seed for a named sub-stream of a master seed.
[[nodiscard]] std::uint64_t derive_seed(std::uint64_t master, const std::string& tag) noexcept;

/// Deterministic per-replication random stream. Stream (seed, r) yields the
/// same draws regardless of which thread or order replications run in.
class Stream {
public:
    Stream(std::uint64_t seed, std::uint64_t replication)
        : engine_(splitmix64(splitmix64(seed) ^ splitmix64(replication + 0x51ed2701a419bd1fULL))) {}

    [[nodiscard]] double normal() { return normal_(engine_); }
    [[nodiscard]] double uniform() { return uniform_(engine_); }
    [[nodiscard]] std::mt19937_64& engine() noexcept { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
    std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

/// Runs body(i) for i in [0, n). With threads > 1 the index range is split in
/// contiguous blocks; bodies must only write to their own slot so results do
/// not depend on scheduling. threads == 0 means hardware concurrency.
void parallel_for(std::size_t n, unsigned threads, const std::function<void(std::size_t)>& body);

}  // namespace purt::rng
