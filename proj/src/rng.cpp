#include "stegokey/rng.hpp"

namespace stegokey
{

namespace
{

// Odd multipliers keep length -> length * c injective mod 2^w.
constexpr std::uint32_t len_mix32 = 0x9E3779B9u;
constexpr std::uint64_t len_mix64 = 0x9E3779B97F4A7C15ull;
constexpr std::uint32_t tag_mix32 = 0x85EBCA6Bu;
constexpr std::uint64_t tag_mix64 = 0xC2B2AE3D27D4EB4Full;

} // namespace

KeyedRng::KeyedRng(RngKind kind, std::uint32_t seed, std::uint32_t message_len_bytes,
                   Stream stream)
    : kind_(kind)
{
    const auto tag = static_cast<std::uint32_t>(stream);
    if (kind_ == RngKind::borland_lcg)
    {
        // The whole key collapses into the 32-bit LCG state: seed XOR
        // (length * odd constant), with the stream tag folded the same way.
        lcg_state_ = seed ^ (message_len_bytes * len_mix32) ^ (tag * tag_mix32);
    }
    else
    {
        sm_state_ = (std::uint64_t(seed) << 32) ^ (std::uint64_t(message_len_bytes) * len_mix64) ^
                    (std::uint64_t(tag) * tag_mix64);
    }
}

std::uint32_t KeyedRng::next15()
{
    lcg_state_ = lcg_state_ * 0x015A4E35u + 1;
    return (lcg_state_ >> 16) & 0x7FFF;
}

std::uint64_t KeyedRng::next64()
{
    sm_state_ += 0x9E3779B97F4A7C15ull;
    std::uint64_t z = sm_state_;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::uint32_t KeyedRng::below(std::uint32_t bound)
{
    if (bound <= 1)
        return 0;
    if (kind_ == RngKind::borland_lcg)
        return next15() % bound;

    // multiply-shift with rejection: exactly uniform on [0, bound)
    std::uint64_t m = (next64() >> 32) * bound;
    auto low = std::uint32_t(m);
    if (low < bound)
    {
        const std::uint32_t cutoff = std::uint32_t(-bound) % bound; // 2^32 mod bound
        while (low < cutoff)
        {
            m = (next64() >> 32) * bound;
            low = std::uint32_t(m);
        }
    }
    return std::uint32_t(m >> 32);
}

} // namespace stegokey
