#pragma once

#include "stegokey/codec.hpp"
#include "stegokey/noise.hpp"
#include "stegokey/stats.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace stegokey
{

// Candidate key enumeration: every seed below 2^seed_bits crossed with every
// candidate message length. Iteration order is lengths ascending, seeds
// ascending within a length; index addressing keeps parallel chunking simple.
struct Keyspace
{
    std::uint32_t seed_count = 1u << 12;
    std::vector<std::uint32_t> lengths; // bytes, ascending

    std::uint64_t size() const { return std::uint64_t(seed_count) * lengths.size(); }

    KeyCandidate at(std::uint64_t index) const
    {
        return KeyCandidate{std::uint32_t(index % seed_count),
                            lengths[std::size_t(index / seed_count)]};
    }
};

struct DecisionStatistic
{
    KeyCandidate key;
    std::uint64_t t_k = 0; // residuals above A among the first n path samples
};

// t_k over the first n indices of the key's path. Shares PathGenerator with
// the codec, so the samples are exactly the start of the embedding path.
DecisionStatistic score_key(const NoiseField& noise, const KeyCandidate& key, std::uint64_t n,
                            double A, const EmbedConfig& config);

enum class AttackOutcome
{
    unique_key,
    ambiguous,
    failed,
};

enum class AttackStage
{
    threshold_stage, // survivor set B = {k : t_k >= T} over the planned n
    max_stage,       // argmax over full-length paths
};

const char* to_string(AttackOutcome outcome);
const char* to_string(AttackStage stage);

struct AttackStats
{
    std::uint64_t n_used = 0;      // samples per key in the deciding stage
    double T = 0;                  // threshold applied in the threshold stage
    std::uint64_t keys_tested = 0; // key scorings across both stages
    double elapsed_seconds = 0;
    double keys_per_second = 0;
};

struct AttackOptions
{
    std::optional<double> rate;   // skip estimation; e.g. known message length
    std::optional<double> sigma;  // residual std-dev override
    // Per-search miss budget.  Kept small because the residual field is
    // lattice-valued (multiples of 1/8 on interior pixels), and the count
    // statistic's strict `w > A` comparison drops the whole atom at w == A
    // that the continuous mixture splits evenly between the two sides.  That
    // undercount costs roughly n * density(A) / 16 relative to the planned
    // mean under either hypothesis — about 1.6 standard deviations for
    // typical textures — so the planned margin must leave room for it.
    double p_m = 1e-6;
    double fa_budget = 1.0 / 1024; // expected false alarms per whole search
    double A = 0.5;
    std::size_t radius = 1;
    unsigned threads = 1;
};

struct AttackResult
{
    AttackOutcome outcome = AttackOutcome::failed;
    AttackStage stage = AttackStage::threshold_stage;
    std::optional<KeyCandidate> recovered;
    std::vector<KeyCandidate> survivors;       // B or D of the deciding stage
    std::optional<KeyCandidate> best_guess;    // lexicographic (seed, length) min on ties
    AttackStats stats;
    AttackPlan plan;
    MixtureModel model;
    double rate_used = 0;
    double sigma2_used = 0;
    bool rate_estimated = false;  // false when the caller supplied the rate
    bool sigma_clamped = false;
    std::string diagnostic;       // set on failed outcomes
};

// The key search. Step 0 estimates the mixture and plans (n, T); the
// threshold stage runs when the plan fits the shortest candidate path and
// accepts a sole survivor; otherwise the full-path max stage decides, with
// exact ties reported as ambiguous.
AttackResult correlation_attack(const GrayImage& stego, const Keyspace& keyspace,
                                const EmbedConfig& config, const AttackOptions& options);

// JSON report: result, plan and mixture. Timing fields are optional so that
// reports can be compared byte-for-byte across thread counts.
std::string attack_report_json(const AttackResult& result, bool include_timing);

} // namespace stegokey
