#pragma once

#include <cstdint>
#include <random>

namespace sdbf {

/// Seeded random stream. A (seed, stream_id) pair fully determines the
/// sequence, so per-replicate streams can be created in any order on any
/// thread and still reproduce the same draws.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed, std::uint64_t stream_id = 0);

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform on the open interval (0, 1), 53 bits of resolution.
    double uniform();

    /// Standard normal via inverse CDF (one uniform per draw).
    double normal();

private:
    std::mt19937_64 engine_;
};

}  // namespace sdbf
