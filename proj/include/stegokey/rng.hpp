#pragma once

#include <cstdint>

namespace stegokey
{

enum class RngKind
{
    borland_lcg, // Turbo/Borland C++ 3.1 rand(): 15-bit outputs, modulo reduction
    splitmix,    // SplitMix64: full-width outputs, unbiased bounded draws
};

// One keyed pseudorandom stream. A stego key (seed, message length) plus a
// stream tag seeds it; the tag keeps the path, the +/-1 direction choices and
// the header filler on independent streams.
class KeyedRng
{
public:
    enum class Stream : std::uint32_t
    {
        path = 0,
        direction = 0x55555555,
        header = 0x33333333,
    };

    KeyedRng(RngKind kind, std::uint32_t seed, std::uint32_t message_len_bytes, Stream stream);

    // Uniform draw in [0, bound); bound >= 1.
    //
    // borland_lcg reproduces random(n) = ((state >> 16) & 0x7FFF) % n faithfully,
    // including its modulo bias and its 15-bit ceiling: bounds above 2^15 cannot
    // be reached in one draw. splitmix uses rejection sampling and is exact.
    std::uint32_t below(std::uint32_t bound);

    std::uint32_t bit() { return below(2); }

private:
    std::uint32_t next15(); // borland step
    std::uint64_t next64(); // splitmix step

    RngKind kind_;
    std::uint32_t lcg_state_ = 0;
    std::uint64_t sm_state_ = 0;
};

} // namespace stegokey
