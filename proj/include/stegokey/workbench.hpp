#pragma once

#include "stegokey/attack.hpp"
#include "stegokey/codec.hpp"
#include "stegokey/image.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace stegokey
{

// Deterministic synthetic cover: base level + a smooth low-frequency field
// (amplitude scales with texture_sigma) + i.i.d. Gaussian texture, rounded
// and clamped to [0, 255]. Stands in for photographic test material.
GrayImage synth_cover(std::size_t width, std::size_t height, double base, double texture_sigma,
                      std::uint64_t gen_seed);

enum class SweepOutcome
{
    succeed, // attack returned unique_key equal to the embedding key
    fail,
    skipped, // length over capacity
};

struct SweepRow
{
    std::uint32_t message_len_bytes = 0;
    double r = 0;
    std::uint64_t n_planned = 0; // bits
    double T = 0;
    std::uint64_t t_k0 = 0;      // correct key's statistic
    SweepOutcome outcome = SweepOutcome::fail;
    AttackStage stage = AttackStage::threshold_stage;
    bool threshold_attempted = false; // false when n_planned exceeded the path
    double rate_used = 0;             // parameters the row's plan came from
    double sigma2_used = 0;
    std::uint64_t planned_keyspace = 0;
    double p_m_used = 0;
};

struct SweepConfig
{
    std::uint32_t seed_bits = 12;
    std::uint32_t trials = 1;
    std::uint64_t gen_seed = 1;
    EmbedConfig embed;
    AttackOptions attack;
};

// One row per (length, trial): embed under a fresh random key, attack with
// the true length known, compare against ground truth.
std::vector<SweepRow> run_sweep(const GrayImage& cover, const std::vector<std::uint32_t>& lengths,
                                const SweepConfig& config);

// CSV with the classic result-table columns; threshold columns print "--"
// on rows where the planned n exceeded the path length.
std::string sweep_csv(const std::vector<SweepRow>& rows);

// r,capacity,message_rate,redundancy over a uniform rate grid.
std::string redundancy_curve_csv(std::size_t points);

// r,n,T,n_star for a fixed sigma over a uniform rate grid (infeasible rates skipped).
std::string nstar_curve_csv(std::size_t points, double sigma, std::uint64_t keyspace_size,
                            double p_m);

} // namespace stegokey
