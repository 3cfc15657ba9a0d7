#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

namespace stegokey
{

// 8-bit grayscale raster, row-major.
struct GrayImage
{
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::uint8_t> pixels;

    std::size_t size() const { return width * height; }

    std::uint8_t& at(std::size_t x, std::size_t y) { return pixels[y * width + x]; }
    std::uint8_t at(std::size_t x, std::size_t y) const { return pixels[y * width + x]; }

    static GrayImage filled(std::size_t width, std::size_t height, std::uint8_t value)
    {
        GrayImage img;
        img.width = width;
        img.height = height;
        img.pixels.assign(width * height, value);
        return img;
    }
};

struct DimensionError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

} // namespace stegokey
