#include "stegokey/noise.hpp"

#include "stegokey/codec.hpp"
#include "stegokey/workbench.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <vector>

using namespace stegokey;

namespace
{

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// pure i.i.d. Gaussian raster (no low-frequency field), for filter statistics
GrayImage gaussian_image(std::size_t width, std::size_t height, double base, double sigma,
                         std::uint64_t seed)
{
    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.resize(width * height);
    for (std::size_t i = 0; i < img.pixels.size(); ++i)
    {
        const double u1 = double((mix64(seed ^ (2 * i + 1)) >> 11) + 1) * 0x1.0p-53;
        const double u2 = double(mix64(seed ^ (2 * i + 2)) >> 11) * 0x1.0p-53;
        const double g = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
        const double v = std::round(base + sigma * g);
        img.pixels[i] = std::uint8_t(std::clamp(v, 0.0, 255.0));
    }
    return img;
}

std::vector<std::uint8_t> random_bits(std::size_t count, std::uint64_t seed)
{
    std::vector<std::uint8_t> bits(count);
    for (std::size_t i = 0; i < count; ++i)
        bits[i] = mix64(seed ^ i) & 1u;
    return bits;
}

} // namespace

TEST_CASE("the averaging filter excludes the center and truncates at edges")
{
    GrayImage img;
    img.width = 3;
    img.height = 3;
    img.pixels = {1, 2, 3, 4, 5, 6, 7, 8, 9};

    const auto f = spatial_average_filter(img, 1);
    CHECK(f[0] == (2.0 + 4.0 + 5.0) / 3.0); // corner: 3 neighbors
    CHECK(f[1] == (1.0 + 3.0 + 4.0 + 5.0 + 6.0) / 5.0);
    CHECK(f[4] == (1 + 2 + 3 + 4 + 6 + 7 + 8 + 9) / 8.0);
    CHECK(f[8] == (5.0 + 6.0 + 8.0) / 3.0);

    CHECK_THROWS_AS(spatial_average_filter(img, 0), DimensionError);
    CHECK_THROWS_AS(spatial_average_filter(GrayImage::filled(2, 2, 1), 1), DimensionError);
}

TEST_CASE("filtering i.i.d. noise divides the variance by the window size")
{
    const GrayImage img = gaussian_image(400, 300, 128.0, 4.0, 71);
    const auto f = spatial_average_filter(img, 1);

    // interior pixels only: full 8-cell windows
    double sum = 0, sum2 = 0;
    std::size_t count = 0;
    for (std::size_t y = 1; y + 1 < img.height; ++y)
        for (std::size_t x = 1; x + 1 < img.width; ++x)
        {
            const double v = f[y * img.width + x];
            sum += v;
            sum2 += v * v;
            ++count;
        }
    const double mean = sum / double(count);
    const double var = sum2 / double(count) - mean * mean;
    const double want = (16.0 + 1.0 / 12.0) / 8.0; // quantization adds 1/12
    CHECK(std::fabs(var - want) < 0.05 * want);
}

TEST_CASE("a constant image has an identically zero residual field")
{
    const auto noise = compute_noise(GrayImage::filled(64, 64, 77), 1, 64);
    for (const double w : noise.values)
        CHECK(w == 0.0);
    CHECK(noise.mean == 0.0);
    CHECK(noise.second_moment == 0.0);
    CHECK(noise.counted == 64 * 64 - 64);
}

TEST_CASE("a single LSB change yields residual +1 for either direction")
{
    // +1 change: even background, pixel made odd
    GrayImage up = GrayImage::filled(32, 32, 100);
    up.at(10, 10) = 101;
    const auto wu = compute_noise(up, 1, 0);
    CHECK(wu.values[10 * 32 + 10] == 1.0);
    // its neighbor sees only the 1/8 shift of its own window average
    CHECK(wu.values[10 * 32 + 11] == doctest::Approx(0.125).epsilon(1e-12));

    // -1 change: odd background, pixel made even
    GrayImage down = GrayImage::filled(32, 32, 101);
    down.at(10, 10) = 100;
    const auto wd = compute_noise(down, 1, 0);
    CHECK(wd.values[10 * 32 + 10] == 1.0);
}

TEST_CASE("cached moments match a recomputation from the residuals")
{
    GrayImage img;
    img.width = 160;
    img.height = 120;
    img.pixels.resize(img.size());
    for (std::size_t i = 0; i < img.size(); ++i)
        img.pixels[i] = std::uint8_t(mix64(3 * i + 5));

    const auto noise = compute_noise(img, 1, 64);
    CHECK(noise.values.size() == img.size());
    CHECK(noise.skip_header == 64);
    CHECK(noise.counted == img.size() - 64);

    double sum = 0, sum2 = 0;
    for (std::size_t i = 64; i < noise.values.size(); ++i)
    {
        sum += noise.values[i];
        sum2 += noise.values[i] * noise.values[i];
    }
    CHECK(noise.mean == doctest::Approx(sum / double(noise.counted)).epsilon(1e-9));
    CHECK(noise.second_moment == doctest::Approx(sum2 / double(noise.counted)).epsilon(1e-9));
}

TEST_CASE("residual moments ignore pixel ordering")
{
    GrayImage img;
    img.width = 200;
    img.height = 150;
    img.pixels.resize(img.size());
    for (std::size_t i = 0; i < img.size(); ++i)
        img.pixels[i] = std::uint8_t(mix64(7 * i + 1));

    GrayImage t;
    t.width = img.height;
    t.height = img.width;
    t.pixels.resize(img.size());
    for (std::size_t y = 0; y < img.height; ++y)
        for (std::size_t x = 0; x < img.width; ++x)
            t.at(y, x) = img.at(x, y);

    const auto a = compute_noise(img, 1, 0);
    const auto b = compute_noise(t, 1, 0);
    CHECK(a.mean == doctest::Approx(b.mean).epsilon(1e-12));
    CHECK(a.second_moment == doctest::Approx(b.second_moment).epsilon(1e-12));
}

TEST_CASE("rate estimation brackets the true embedding rate")
{
    const GrayImage cover = synth_cover(320, 480, 128.0, 1.0, 20260501);
    const EmbedConfig config;
    const std::size_t capacity = path_capacity_bits(cover.size(), config);

    // r = 0.5
    {
        const std::uint32_t len = std::uint32_t(capacity / 2 / 8); // 9596
        const GrayImage stego =
            embed(cover, random_bits(8 * len, 11), {4321, len}, config);
        const auto est = estimate_rate(compute_noise(stego, 1, config.header_offset()));
        CHECK(est.value > 0.48);
        CHECK(est.value < 0.52);
        const double true_r = 8.0 * len / double(capacity);
        CHECK(std::fabs(est.value - true_r) < est.half_width);
    }

    // r = 1 exactly (no reserved header so the path is the whole image)
    {
        EmbedConfig open;
        open.reserve_header = false;
        const std::uint32_t len = std::uint32_t(cover.size() / 8); // 19200
        const GrayImage stego = embed(cover, random_bits(8 * len, 12), {4321, len}, open);
        const auto est = estimate_rate(compute_noise(stego, 1, 0));
        CHECK(est.value > 0.98);
        CHECK(est.value <= 1.0);
    }

    // clean cover
    {
        const auto est = estimate_rate(compute_noise(cover, 1, config.header_offset()));
        CHECK(est.value <= 0.02);
    }
}

TEST_CASE("variance estimation removes the embedding contribution")
{
    const GrayImage cover = synth_cover(320, 480, 120.0, 2.0, 98765);
    const EmbedConfig config;
    const std::size_t capacity = path_capacity_bits(cover.size(), config);
    const std::uint32_t len = std::uint32_t(std::llround(0.4 * double(capacity) / 8.0));
    const GrayImage stego = embed(cover, random_bits(8 * len, 13), {100, len}, config);

    const auto noise = compute_noise(stego, 1, config.header_offset());
    const auto rate = estimate_rate(noise);
    CHECK(std::fabs(rate.value - 0.4) < 0.02);

    const auto s2 = estimate_sigma2(noise, rate.value);
    CHECK_FALSE(s2.clamped);
    CHECK(std::fabs(s2.value - 4.0) < 0.15);

    // the clean cover agrees, so the r/2 subtraction really cancels the embedding
    const auto cover_s2 = estimate_sigma2(compute_noise(cover, 1, config.header_offset()), 0.0);
    CHECK(std::fabs(cover_s2.value - 4.0) < 0.15);
    CHECK(std::fabs(s2.value - cover_s2.value) < 0.1);
}

TEST_CASE("degenerate inputs clamp or throw")
{
    const auto flat = compute_noise(GrayImage::filled(32, 32, 50), 1, 64);
    const auto s2 = estimate_sigma2(flat, 0.5);
    CHECK(s2.clamped);
    CHECK(s2.value == 1e-6);

    const auto empty = compute_noise(GrayImage::filled(32, 32, 50), 1, 32 * 32);
    CHECK(empty.counted == 0);
    CHECK_THROWS_AS(estimate_rate(empty), std::invalid_argument);
}
