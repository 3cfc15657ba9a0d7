#pragma once

#include "stegokey/image.hpp"
#include "stegokey/rng.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stegokey
{

// A stego key as Hide-and-Seek derives it: a 16-bit seed plus the message
// length in bytes (both feed the PRNG, so both are secret material).
struct KeyCandidate
{
    std::uint32_t seed = 0;              // < 2^16
    std::uint32_t message_len_bytes = 1; // >= 1

    friend bool operator==(const KeyCandidate&, const KeyCandidate&) = default;
};

enum class EmbedOp
{
    replace,        // overwrite the LSB with the message bit
    plus_minus_one, // match parity by adding or subtracting 1
};

struct EmbedConfig
{
    EmbedOp operation = EmbedOp::replace;
    bool reserve_header = true;        // keep the first pixels off the path
    std::uint32_t header_pixels = 64;  // Hide-and-Seek stores its header there
    RngKind rng_kind = RngKind::splitmix;

    std::uint32_t header_offset() const { return reserve_header ? header_pixels : 0; }
};

struct CapacityError : std::runtime_error
{
    CapacityError(std::size_t required_bits, std::size_t available_bits);

    std::size_t required = 0;
    std::size_t available = 0;
};

struct LengthMismatchError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

// Embedding path capacity in bits for an image of `image_size` pixels.
std::size_t path_capacity_bits(std::size_t image_size, const EmbedConfig& config);

// Reusable overlay for the partial Fisher-Yates walk, so scoring millions of
// candidate keys does not rebuild a full permutation array per key. Epoch
// stamps make reset O(1).
class PathScratch
{
public:
    void prepare(std::size_t size);

    std::uint32_t load(std::uint32_t i) const
    {
        return stamp_[i] == epoch_ ? value_[i] : i;
    }
    void store(std::uint32_t i, std::uint32_t v)
    {
        value_[i] = v;
        stamp_[i] = epoch_;
    }

private:
    std::vector<std::uint32_t> value_;
    std::vector<std::uint32_t> stamp_;
    std::uint32_t epoch_ = 0;
};

// Streams the pixel indices of a key's embedding path one draw at a time.
// Draw i is step i of a Fisher-Yates walk over the eligible index range, so
// any prefix of the path is sampled without replacement, and the n-sample
// prefix used by the key search is exactly the start of the embedding path.
class PathGenerator
{
public:
    PathGenerator(const KeyCandidate& key, const EmbedConfig& config, std::size_t image_size,
                  PathScratch& scratch);

    std::size_t length_bits() const { return length_bits_; }

    std::uint32_t next()
    {
        const std::uint32_t i = drawn_++;
        const std::uint32_t j = i + rng_.below(eligible_ - i);
        const std::uint32_t vj = scratch_->load(j);
        scratch_->store(j, scratch_->load(i));
        return offset_ + vj;
    }

private:
    KeyedRng rng_;
    PathScratch* scratch_;
    std::uint32_t eligible_ = 0;
    std::uint32_t offset_ = 0;
    std::uint32_t drawn_ = 0;
    std::size_t length_bits_ = 0;
};

// Full embedding path of 8 * message_len_bytes distinct pixel indices.
// Shared by embed, extract and the key search; that self-consistency is the
// attack's actual correctness requirement.
std::vector<std::uint32_t> keyed_path(const KeyCandidate& key, const EmbedConfig& config,
                                      std::size_t image_size);

// message is one bit per element (0/1), MSB-first within each original byte,
// length exactly 8 * key.message_len_bytes.
GrayImage embed(const GrayImage& cover, const std::vector<std::uint8_t>& message,
                const KeyCandidate& key, const EmbedConfig& config);

std::vector<std::uint8_t> extract(const GrayImage& stego, const KeyCandidate& key,
                                  const EmbedConfig& config);

// Fraction of pixels whose values differ.
double hamming_distortion(const GrayImage& cover, const GrayImage& stego);

std::vector<std::uint8_t> bytes_to_bits(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> bits_to_bytes(const std::vector<std::uint8_t>& bits);

} // namespace stegokey
