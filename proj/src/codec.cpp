#include "stegokey/codec.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace stegokey
{

CapacityError::CapacityError(std::size_t required_bits, std::size_t available_bits)
    : std::runtime_error("capacity exceeded: message needs " + std::to_string(required_bits) +
                         " path bits, image offers " + std::to_string(available_bits)),
      required(required_bits),
      available(available_bits)
{
}

std::size_t path_capacity_bits(std::size_t image_size, const EmbedConfig& config)
{
    const std::size_t offset = config.header_offset();
    return image_size > offset ? image_size - offset : 0;
}

void PathScratch::prepare(std::size_t size)
{
    if (value_.size() < size)
    {
        value_.resize(size);
        stamp_.assign(size, 0);
        epoch_ = 0;
    }
    if (++epoch_ == 0)
    {
        // stamp counter wrapped: stale marks from 2^32 walks ago would read as
        // fresh, so pay for one full clear
        std::fill(stamp_.begin(), stamp_.end(), 0);
        epoch_ = 1;
    }
}

PathGenerator::PathGenerator(const KeyCandidate& key, const EmbedConfig& config,
                             std::size_t image_size, PathScratch& scratch)
    : rng_(config.rng_kind, key.seed, key.message_len_bytes, KeyedRng::Stream::path),
      scratch_(&scratch)
{
    if (key.seed >= (1u << 16))
        throw std::invalid_argument("keyed path: seed must fit in 16 bits");
    if (key.message_len_bytes == 0)
        throw std::invalid_argument("keyed path: message length must be at least one byte");
    if (image_size > 0xFFFFFFFFull)
        throw DimensionError("keyed path: image exceeds 2^32 pixels");

    length_bits_ = std::size_t(8) * key.message_len_bytes;
    const std::size_t capacity = path_capacity_bits(image_size, config);
    if (length_bits_ > capacity)
        throw CapacityError(length_bits_, capacity);

    offset_ = config.header_offset();
    eligible_ = std::uint32_t(image_size - offset_);
    scratch_->prepare(eligible_);
}

std::vector<std::uint32_t> keyed_path(const KeyCandidate& key, const EmbedConfig& config,
                                      std::size_t image_size)
{
    PathScratch scratch;
    PathGenerator gen(key, config, image_size, scratch);
    std::vector<std::uint32_t> path(gen.length_bits());
    for (auto& j : path)
        j = gen.next();
    return path;
}

GrayImage embed(const GrayImage& cover, const std::vector<std::uint8_t>& message,
                const KeyCandidate& key, const EmbedConfig& config)
{
    if (message.size() != std::size_t(8) * key.message_len_bytes)
        throw LengthMismatchError("embed: message holds " + std::to_string(message.size()) +
                                  " bits but the key declares " +
                                  std::to_string(std::size_t(8) * key.message_len_bytes));

    GrayImage stego = cover;
    PathScratch scratch;
    PathGenerator path(key, config, cover.size(), scratch);
    KeyedRng direction(config.rng_kind, key.seed, key.message_len_bytes,
                       KeyedRng::Stream::direction);

    for (const std::uint8_t bit : message)
    {
        std::uint8_t& s = stego.pixels[path.next()];
        if (config.operation == EmbedOp::replace)
        {
            s = std::uint8_t((s & 0xFEu) | bit);
        }
        else if ((s & 1u) != bit)
        {
            // direction drawn only when a change happens, saturating inward so
            // parity still lands on the message bit
            if (s == 0)
                s = 1;
            else if (s == 255)
                s = 254;
            else
                s = std::uint8_t(direction.bit() ? s + 1 : s - 1);
        }
    }

    if (config.reserve_header)
    {
        // stands in for the encrypted length header: keyed bits a third party
        // cannot tell from payload
        KeyedRng header(config.rng_kind, key.seed, key.message_len_bytes,
                        KeyedRng::Stream::header);
        const std::size_t limit = std::min<std::size_t>(config.header_pixels, stego.size());
        for (std::size_t i = 0; i < limit; ++i)
            stego.pixels[i] = std::uint8_t((stego.pixels[i] & 0xFEu) | header.bit());
    }
    return stego;
}

std::vector<std::uint8_t> extract(const GrayImage& stego, const KeyCandidate& key,
                                  const EmbedConfig& config)
{
    PathScratch scratch;
    PathGenerator path(key, config, stego.size(), scratch);
    std::vector<std::uint8_t> bits(path.length_bits());
    for (auto& b : bits)
        b = stego.pixels[path.next()] & 1u;
    return bits;
}

double hamming_distortion(const GrayImage& cover, const GrayImage& stego)
{
    if (cover.width != stego.width || cover.height != stego.height)
        throw DimensionError("hamming_distortion: image dimensions differ");
    if (cover.size() == 0)
        throw DimensionError("hamming_distortion: empty image");
    std::size_t changed = 0;
    for (std::size_t i = 0; i < cover.pixels.size(); ++i)
        changed += cover.pixels[i] != stego.pixels[i];
    return double(changed) / double(cover.size());
}

std::vector<std::uint8_t> bytes_to_bits(const std::vector<std::uint8_t>& bytes)
{
    std::vector<std::uint8_t> bits;
    bits.reserve(bytes.size() * 8);
    for (const std::uint8_t byte : bytes)
        for (int shift = 7; shift >= 0; --shift)
            bits.push_back((byte >> shift) & 1u);
    return bits;
}

std::vector<std::uint8_t> bits_to_bytes(const std::vector<std::uint8_t>& bits)
{
    if (bits.size() % 8 != 0)
        throw LengthMismatchError("bits_to_bytes: bit count is not a whole number of bytes");
    std::vector<std::uint8_t> bytes(bits.size() / 8, 0);
    for (std::size_t i = 0; i < bits.size(); ++i)
        bytes[i / 8] = std::uint8_t((bytes[i / 8] << 1) | (bits[i] & 1u));
    return bytes;
}

} // namespace stegokey
