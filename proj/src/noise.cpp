#include "stegokey/noise.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stegokey
{

std::vector<double> spatial_average_filter(const GrayImage& image, std::size_t radius)
{
    if (radius < 1)
        throw DimensionError("spatial_average_filter: radius must be at least 1");
    const std::size_t side = 2 * radius + 1;
    if (image.width == 0 || image.height == 0 || image.size() < side * side)
        throw DimensionError("spatial_average_filter: image smaller than one kernel window");

    const std::ptrdiff_t w = std::ptrdiff_t(image.width);
    const std::ptrdiff_t h = std::ptrdiff_t(image.height);
    const std::ptrdiff_t rad = std::ptrdiff_t(radius);

    std::vector<double> out(image.size());
    for (std::ptrdiff_t y = 0; y < h; ++y)
    {
        const std::ptrdiff_t y0 = std::max<std::ptrdiff_t>(0, y - rad);
        const std::ptrdiff_t y1 = std::min<std::ptrdiff_t>(h - 1, y + rad);
        for (std::ptrdiff_t x = 0; x < w; ++x)
        {
            const std::ptrdiff_t x0 = std::max<std::ptrdiff_t>(0, x - rad);
            const std::ptrdiff_t x1 = std::min<std::ptrdiff_t>(w - 1, x + rad);
            std::uint64_t sum = 0;
            for (std::ptrdiff_t ny = y0; ny <= y1; ++ny)
                for (std::ptrdiff_t nx = x0; nx <= x1; ++nx)
                    sum += image.pixels[std::size_t(ny * w + nx)];
            sum -= image.pixels[std::size_t(y * w + x)];
            const std::ptrdiff_t count = (y1 - y0 + 1) * (x1 - x0 + 1) - 1;
            out[std::size_t(y * w + x)] = double(sum) / double(count);
        }
    }
    return out;
}

NoiseField compute_noise(const GrayImage& stego, std::size_t radius, std::size_t skip_header)
{
    const std::vector<double> avg = spatial_average_filter(stego, radius);

    NoiseField field;
    field.skip_header = skip_header;
    field.values.resize(stego.size());

    long double sum = 0;
    long double sum2 = 0;
    std::size_t counted = 0;
    for (std::size_t i = 0; i < stego.size(); ++i)
    {
        const double s = stego.pixels[i];
        const double w = (stego.pixels[i] & 1u) ? s - avg[i] : avg[i] - s;
        field.values[i] = w;
        if (i >= skip_header)
        {
            sum += w;
            sum2 += static_cast<long double>(w) * w;
            ++counted;
        }
    }
    field.counted = counted;
    if (counted > 0)
    {
        field.mean = double(sum / counted);
        field.second_moment = double(sum2 / counted);
    }
    return field;
}

Sigma2Estimate estimate_sigma2(const NoiseField& noise, double rate)
{
    Sigma2Estimate est;
    est.value = noise.second_moment - 0.5 * rate;
    if (est.value < 1e-6)
    {
        est.value = 1e-6; // a2 below r/2 means the mixture model does not fit
        est.clamped = true;
    }
    return est;
}

RateEstimate estimate_rate(const NoiseField& noise)
{
    if (noise.counted == 0)
        throw std::invalid_argument("estimate_rate: noise field holds no counted samples");
    RateEstimate est;
    est.value = std::clamp(2.0 * noise.mean, 0.0, 1.0);
    // r_hat = 2 * mean doubles the mean's standard error; three of those
    const double var = std::max(0.0, noise.second_moment - noise.mean * noise.mean);
    est.half_width = 6.0 * std::sqrt(var / double(noise.counted));
    return est;
}

} // namespace stegokey
