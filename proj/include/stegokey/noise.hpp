#pragma once

#include "stegokey/image.hpp"

#include <cstddef>
#include <vector>

namespace stegokey
{

// Parity-signed residual field of a stego image. values covers every pixel
// (so path indices align); the cached moments cover only pixels at or beyond
// skip_header.
struct NoiseField
{
    std::vector<double> values;
    std::size_t skip_header = 0;
    std::size_t counted = 0;  // pixels entering the moments
    double mean = 0;          // (1/counted) * sum w_i
    double second_moment = 0; // (1/counted) * sum w_i^2
};

// Mean of the (2r+1)x(2r+1) neighborhood EXCLUDING the center pixel, edge
// neighborhoods truncated to in-bounds cells.
//
// Excluding the center is deliberate: with the center included, a modified
// pixel drags its own average along and the modified-pixel residual mean
// shrinks from 1 toward 8/9. This choice changes sigma and therefore every
// planned (n, T).
std::vector<double> spatial_average_filter(const GrayImage& image, std::size_t radius);

// w_i = s_i - sbar_i for odd s_i, sbar_i - s_i for even s_i. Either way a
// Table-I LSB modification pushes the residual mean to +1: the change that
// made the pixel odd was +1, the change that made it even was -1.
NoiseField compute_noise(const GrayImage& stego, std::size_t radius, std::size_t skip_header);

struct Sigma2Estimate
{
    double value = 0;
    bool clamped = false; // a2 fell below r/2: model mismatch warning
};

// sigma^2 = a2 - r/2 (the unmodified and modified components share the
// variance; the mixture adds r/2 to the second moment).
Sigma2Estimate estimate_sigma2(const NoiseField& noise, double rate);

struct RateEstimate
{
    double value = 0;      // clamp(2 * mean(W), 0, 1)
    double half_width = 0; // 3 standard errors of the estimator
};

// E[W] = r/2 under the mixture, so 2 * mean(W) estimates r.
RateEstimate estimate_rate(const NoiseField& noise);

} // namespace stegokey
