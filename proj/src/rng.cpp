#include "sdbf/rng.hpp"

#include "sdbf/special.hpp"

namespace sdbf {

namespace {

std::seed_seq make_seed_seq(std::uint64_t seed, std::uint64_t stream_id) {
    const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v & 0xffffffffu); };
    const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    return std::seed_seq{lo(seed), hi(seed), lo(stream_id), hi(stream_id), 0x5dbfu};
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id) {
    auto seq = make_seed_seq(seed, stream_id);
    engine_.seed(seq);
}

double RandomStream::uniform() {
    constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
    return (static_cast<double>(engine_() >> 11) + 0.5) * kScale;
}

double RandomStream::normal() { return special::normal_quantile(uniform()); }

}  // namespace sdbf
