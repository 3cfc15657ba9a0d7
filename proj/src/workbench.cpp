#include "stegokey/workbench.hpp"

#include "stegokey/noise.hpp"
#include "stegokey/stats.hpp"
#include "stegokey/theory.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace stegokey
{

namespace
{

std::uint64_t mix64(std::uint64_t x)
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

double unit_open(std::uint64_t h) // (0, 1]
{
    return double((h >> 11) + 1) * 0x1.0p-53;
}

std::string fmt(double v)
{
    std::ostringstream os;
    os << std::setprecision(12) << v;
    return os.str();
}

const char* to_string(SweepOutcome outcome)
{
    switch (outcome)
    {
    case SweepOutcome::succeed: return "succeed";
    case SweepOutcome::fail: return "fail";
    case SweepOutcome::skipped: return "skipped";
    }
    return "unknown";
}

} // namespace

GrayImage synth_cover(std::size_t width, std::size_t height, double base, double texture_sigma,
                      std::uint64_t gen_seed)
{
    if (texture_sigma < 0)
        throw std::invalid_argument("synth_cover: texture_sigma must be nonnegative");

    GrayImage img;
    img.width = width;
    img.height = height;
    img.pixels.resize(width * height);

    // Calibrated so the 3x3 residual of the ROUNDED raster measures back as
    // texture_sigma: the center-excluded filter inflates variance by 9/8 and
    // rounding adds ~1/12, so generate with 8/9 sigma^2 - 1/12.
    const double gen_var = std::max(texture_sigma * texture_sigma * (8.0 / 9.0) - 1.0 / 12.0,
                                    texture_sigma * texture_sigma * 1e-4);
    const double gen_sigma = texture_sigma > 0 ? std::sqrt(gen_var) : 0.0;

    const std::uint64_t stream = mix64(gen_seed ^ 0xC0FFEEull);
    // smooth illumination field; wavelengths of 48..96 px keep its curvature
    // far below the texture so it barely registers in the residual
    const double amp = 4.0 * texture_sigma;
    const double fx = 2.0 * std::numbers::pi / (48.0 + double(mix64(stream + 1) % 49));
    const double fy = 2.0 * std::numbers::pi / (48.0 + double(mix64(stream + 2) % 49));
    const double phase_x = unit_open(mix64(stream + 3)) * 2.0 * std::numbers::pi;
    const double phase_y = unit_open(mix64(stream + 4)) * 2.0 * std::numbers::pi;

    for (std::size_t y = 0; y < height; ++y)
    {
        const double row_field = std::sin(fy * double(y) + phase_y);
        for (std::size_t x = 0; x < width; ++x)
        {
            const std::size_t i = y * width + x;
            const double u1 = unit_open(mix64(stream ^ (2 * i + 11)));
            const double u2 = unit_open(mix64(stream ^ (2 * i + 12)));
            const double gauss = gen_sigma * std::sqrt(-2.0 * std::log(u1)) *
                                 std::cos(2.0 * std::numbers::pi * u2);
            const double field = amp * std::sin(fx * double(x) + phase_x) * row_field;
            const double v = std::round(base + field + gauss);
            img.pixels[i] = std::uint8_t(std::clamp(v, 0.0, 255.0));
        }
    }
    return img;
}

std::vector<SweepRow> run_sweep(const GrayImage& cover, const std::vector<std::uint32_t>& lengths,
                                const SweepConfig& config)
{
    if (config.seed_bits == 0 || config.seed_bits > 16)
        throw std::invalid_argument("run_sweep: seed_bits must lie in [1, 16]");
    const std::size_t capacity = path_capacity_bits(cover.size(), config.embed);
    const std::uint32_t seed_count = 1u << config.seed_bits;

    std::uint64_t counter = mix64(config.gen_seed ^ 0x5EED5EEDull);
    auto draw64 = [&counter]() { return mix64(++counter); };

    std::vector<SweepRow> rows;
    rows.reserve(std::size_t(lengths.size()) * config.trials);
    for (const std::uint32_t len : lengths)
    {
        for (std::uint32_t trial = 0; trial < config.trials; ++trial)
        {
            SweepRow row;
            row.message_len_bytes = len;
            const std::size_t bits = std::size_t(8) * len;
            if (capacity > 0)
                row.r = double(bits) / double(capacity);
            if (len == 0 || bits > capacity)
            {
                row.outcome = SweepOutcome::skipped;
                rows.push_back(row);
                continue;
            }

            const KeyCandidate true_key{std::uint32_t(draw64() % seed_count), len};
            std::vector<std::uint8_t> message(bits);
            for (std::size_t i = 0; i < bits; i += 64)
            {
                std::uint64_t word = draw64();
                const std::size_t stop = std::min(bits, i + 64);
                for (std::size_t b = i; b < stop; ++b, word >>= 1)
                    message[b] = word & 1u;
            }

            const GrayImage stego = embed(cover, message, true_key, config.embed);

            AttackOptions opts = config.attack;
            opts.rate = row.r; // known length pins the rate
            Keyspace space;
            space.seed_count = seed_count;
            space.lengths = {len};
            const AttackResult result = correlation_attack(stego, space, config.embed, opts);

            row.rate_used = result.rate_used;
            row.sigma2_used = result.sigma2_used;
            row.planned_keyspace = result.plan.keyspace_size;
            row.p_m_used = result.plan.p_m;
            row.n_planned = result.plan.n;
            row.T = result.plan.T;
            row.stage = result.stage;
            row.threshold_attempted = result.plan.n > 0 && result.plan.n <= bits;
            row.outcome = (result.outcome == AttackOutcome::unique_key && result.recovered &&
                           *result.recovered == true_key)
                              ? SweepOutcome::succeed
                              : SweepOutcome::fail;

            const NoiseField noise =
                compute_noise(stego, opts.radius, config.embed.header_offset());
            const std::uint64_t n_for_t0 =
                row.threshold_attempted ? result.plan.n : std::uint64_t(bits);
            row.t_k0 = score_key(noise, true_key, n_for_t0, opts.A, config.embed).t_k;

            rows.push_back(row);
        }
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows)
{
    std::ostringstream os;
    os << "message_len_bytes,r,n,T,t_k0,result,stage\n";
    for (const SweepRow& row : rows)
    {
        os << row.message_len_bytes << ',' << fmt(row.r) << ',';
        if (row.threshold_attempted)
            os << row.n_planned << ',' << fmt(row.T) << ',' << row.t_k0;
        else
            os << "--,--,--";
        os << ',' << to_string(row.outcome) << ','
           << (row.outcome == SweepOutcome::skipped ? "--" : stegokey::to_string(row.stage))
           << '\n';
    }
    return os.str();
}

std::string redundancy_curve_csv(std::size_t points)
{
    std::ostringstream os;
    os << "r,capacity,message_rate,redundancy\n";
    for (std::size_t i = 0; i < points; ++i)
    {
        const double r = points == 1 ? 0.5 : double(i) / double(points - 1);
        os << fmt(r) << ',' << fmt(hiding_capacity(0.5 * r)) << ',' << fmt(r) << ','
           << fmt(hiding_redundancy(r)) << '\n';
    }
    return os.str();
}

std::string nstar_curve_csv(std::size_t points, double sigma, std::uint64_t keyspace_size,
                            double p_m)
{
    std::ostringstream os;
    os << "r,n,T,n_star\n";
    for (std::size_t i = 0; i < points; ++i)
    {
        const double r = double(i + 1) / double(points + 1); // open grid: ends diverge
        try
        {
            const AttackPlan plan = plan_attack(build_mixture(r, sigma), keyspace_size, p_m);
            os << fmt(r) << ',' << plan.n << ',' << fmt(plan.T) << ',' << fmt(plan.n_star)
               << '\n';
        }
        catch (const InfeasiblePlanError&)
        {
            // rate too extreme to plan: skip the row
        }
    }
    return os.str();
}

} // namespace stegokey
