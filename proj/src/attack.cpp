#include "stegokey/attack.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <limits>
#include <thread>

namespace stegokey
{

namespace
{

constexpr std::uint64_t k_chunk = 256; // keys per work-stealing grab

DecisionStatistic score_with_scratch(const NoiseField& noise, const KeyCandidate& key,
                                     std::uint64_t n, double A, const EmbedConfig& config,
                                     PathScratch& scratch)
{
    DecisionStatistic stat{key, 0};
    PathGenerator path(key, config, noise.values.size(), scratch);
    const std::uint64_t draws = std::min<std::uint64_t>(n, path.length_bits());
    for (std::uint64_t i = 0; i < draws; ++i)
        stat.t_k += noise.values[path.next()] > A;
    return stat;
}

// Candidate lengths differ, so raw counts are not comparable in the max
// stage; normalize against the wrong-key distribution N(n p1, n p1 q1).
// Pure function of (t_k, n_k), hence bit-identical however keys are split
// across workers.
double max_stage_score(std::uint64_t t_k, std::uint64_t n_k, const MixtureModel& model)
{
    const double mean = double(n_k) * model.p1;
    const double var = double(n_k) * model.p1 * (1.0 - model.p1);
    if (var > 0.0)
        return (double(t_k) - mean) / std::sqrt(var);
    if (double(t_k) == mean)
        return 0.0;
    return double(t_k) > mean ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
}

// Pulls chunks off a shared cursor and runs fn(worker, index) over the space.
template <typename Fn>
void for_each_key_index(std::uint64_t total, unsigned workers, Fn&& fn)
{
    std::atomic<std::uint64_t> cursor{0};
    auto drain = [&](unsigned w)
    {
        for (;;)
        {
            const std::uint64_t begin = cursor.fetch_add(k_chunk);
            if (begin >= total)
                return;
            const std::uint64_t end = std::min(total, begin + k_chunk);
            for (std::uint64_t idx = begin; idx < end; ++idx)
                fn(w, idx);
        }
    };
    if (workers <= 1)
    {
        drain(0);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back(drain, w);
    for (auto& t : pool)
        t.join();
}

std::vector<KeyCandidate> keys_at(const Keyspace& space, const std::vector<std::uint64_t>& indices)
{
    std::vector<KeyCandidate> keys;
    keys.reserve(indices.size());
    for (const std::uint64_t idx : indices)
        keys.push_back(space.at(idx));
    return keys;
}

nlohmann::ordered_json key_json(const KeyCandidate& key)
{
    return {{"seed", key.seed}, {"message_len_bytes", key.message_len_bytes}};
}

} // namespace

DecisionStatistic score_key(const NoiseField& noise, const KeyCandidate& key, std::uint64_t n,
                            double A, const EmbedConfig& config)
{
    PathScratch scratch;
    return score_with_scratch(noise, key, n, A, config, scratch);
}

const char* to_string(AttackOutcome outcome)
{
    switch (outcome)
    {
    case AttackOutcome::unique_key: return "unique_key";
    case AttackOutcome::ambiguous: return "ambiguous";
    case AttackOutcome::failed: return "failed";
    }
    return "unknown";
}

const char* to_string(AttackStage stage)
{
    return stage == AttackStage::threshold_stage ? "threshold_stage" : "max_stage";
}

AttackResult correlation_attack(const GrayImage& stego, const Keyspace& keyspace,
                                const EmbedConfig& config, const AttackOptions& options)
{
    const auto started = std::chrono::steady_clock::now();
    AttackResult result;

    auto finish = [&](AttackResult& r)
    {
        const std::chrono::duration<double> dt = std::chrono::steady_clock::now() - started;
        r.stats.elapsed_seconds = dt.count();
        r.stats.keys_per_second =
            dt.count() > 0 ? double(r.stats.keys_tested) / dt.count() : 0.0;
        return r;
    };

    // Step 0: residual field, rate and variance, mixture, test plan.
    const NoiseField noise = compute_noise(stego, options.radius, config.header_offset());

    if (options.rate)
    {
        result.rate_used = *options.rate;
    }
    else
    {
        result.rate_used = estimate_rate(noise).value;
        result.rate_estimated = true;
    }

    if (options.sigma)
    {
        result.sigma2_used = *options.sigma * *options.sigma;
    }
    else
    {
        const Sigma2Estimate est = estimate_sigma2(noise, result.rate_used);
        result.sigma2_used = est.value;
        result.sigma_clamped = est.clamped;
    }

    Keyspace space = keyspace;
    std::sort(space.lengths.begin(), space.lengths.end());
    space.lengths.erase(std::unique(space.lengths.begin(), space.lengths.end()),
                        space.lengths.end());
    const std::size_t capacity = path_capacity_bits(stego.size(), config);
    std::erase_if(space.lengths, [&](std::uint32_t len)
                  { return len == 0 || std::size_t(8) * len > capacity; });
    if (space.seed_count == 0 || space.lengths.empty())
    {
        result.diagnostic = "no candidate key fits the image capacity";
        return finish(result);
    }

    try
    {
        result.model = build_mixture(result.rate_used, std::sqrt(result.sigma2_used), options.A);
        // Plan against a padded keyspace so the whole search expects only
        // fa_budget false alarms, not one; p_f = 1/keys is too generous when
        // a sole survivor is the goal.
        const double padded = std::ceil(double(space.size()) / options.fa_budget);
        const std::uint64_t planned_keys = padded < 2.0 ? 2 : std::uint64_t(padded);
        result.plan = plan_attack(result.model, planned_keys, options.p_m);
    }
    catch (const std::exception& e)
    {
        result.diagnostic = e.what();
        return finish(result);
    }
    result.stats.T = result.plan.T;

    const std::uint64_t total = space.size();
    const unsigned workers = std::max(1u, options.threads);
    const std::uint64_t shortest_bits = std::uint64_t(8) * space.lengths.front();

    // Step 1 needs the planned sample count to fit every candidate path.
    if (result.plan.n <= shortest_bits)
    {
        result.stats.n_used = result.plan.n;
        std::vector<std::vector<std::uint64_t>> hits(workers);
        for_each_key_index(total, workers,
                           [&](unsigned w, std::uint64_t idx)
                           {
                               thread_local PathScratch scratch;
                               const DecisionStatistic stat = score_with_scratch(
                                   noise, space.at(idx), result.plan.n, options.A, config,
                                   scratch);
                               if (double(stat.t_k) >= result.plan.T)
                                   hits[w].push_back(idx);
                           });
        result.stats.keys_tested += total;

        std::vector<std::uint64_t> survivors;
        for (const auto& h : hits)
            survivors.insert(survivors.end(), h.begin(), h.end());
        std::sort(survivors.begin(), survivors.end());

        // Step 2: a sole survivor is the answer.
        if (survivors.size() == 1)
        {
            result.outcome = AttackOutcome::unique_key;
            result.stage = AttackStage::threshold_stage;
            result.survivors = keys_at(space, survivors);
            result.recovered = result.survivors.front();
            return finish(result);
        }
        // Anything else falls through to the max stage.
    }

    // Step 3: rank every key by its full-path statistic.
    struct Best
    {
        double score = -std::numeric_limits<double>::infinity();
        std::vector<std::uint64_t> indices;
    };
    std::vector<Best> best(workers);
    for_each_key_index(total, workers,
                       [&](unsigned w, std::uint64_t idx)
                       {
                           thread_local PathScratch scratch;
                           const KeyCandidate key = space.at(idx);
                           const std::uint64_t n_k = std::uint64_t(8) * key.message_len_bytes;
                           const DecisionStatistic stat = score_with_scratch(
                               noise, key, n_k, options.A, config, scratch);
                           const double score = max_stage_score(stat.t_k, n_k, result.model);
                           Best& b = best[w];
                           if (score > b.score)
                           {
                               b.score = score;
                               b.indices.assign(1, idx);
                           }
                           else if (score == b.score)
                           {
                               b.indices.push_back(idx);
                           }
                       });
    result.stats.keys_tested += total;

    Best top;
    for (const auto& b : best)
    {
        if (b.score > top.score)
        {
            top.score = b.score;
            top.indices = b.indices;
        }
        else if (b.score == top.score)
        {
            top.indices.insert(top.indices.end(), b.indices.begin(), b.indices.end());
        }
    }
    std::sort(top.indices.begin(), top.indices.end());

    result.stage = AttackStage::max_stage;
    result.survivors = keys_at(space, top.indices);

    // Step 4: a tie means the statistic cannot separate the leaders.
    if (result.survivors.size() == 1)
    {
        result.outcome = AttackOutcome::unique_key;
        result.recovered = result.survivors.front();
        result.stats.n_used = std::uint64_t(8) * result.recovered->message_len_bytes;
    }
    else
    {
        result.outcome = AttackOutcome::ambiguous;
        result.best_guess = *std::min_element(
            result.survivors.begin(), result.survivors.end(),
            [](const KeyCandidate& a, const KeyCandidate& b)
            {
                return a.seed != b.seed ? a.seed < b.seed
                                        : a.message_len_bytes < b.message_len_bytes;
            });
        result.stats.n_used = std::uint64_t(8) * result.best_guess->message_len_bytes;
        result.diagnostic = "max stage tie: statistic cannot separate the leading keys";
    }
    return finish(result);
}

std::string attack_report_json(const AttackResult& result, bool include_timing)
{
    constexpr std::size_t survivor_cap = 64;

    nlohmann::ordered_json j;
    j["outcome"] = to_string(result.outcome);
    j["stage"] = to_string(result.stage);
    j["recovered"] = result.recovered ? key_json(*result.recovered) : nlohmann::ordered_json();
    j["best_guess"] = result.best_guess ? key_json(*result.best_guess) : nlohmann::ordered_json();
    j["survivor_count"] = result.survivors.size();
    auto& listed = j["survivors"] = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < result.survivors.size() && i < survivor_cap; ++i)
        listed.push_back(key_json(result.survivors[i]));

    j["rate_used"] = result.rate_used;
    j["rate_estimated"] = result.rate_estimated;
    j["sigma2_used"] = result.sigma2_used;
    j["sigma_clamped"] = result.sigma_clamped;

    j["model"] = {{"r", result.model.r},         {"sigma", result.model.sigma},
                  {"A", result.model.A},         {"alpha0", result.model.alpha0},
                  {"alpha1", result.model.alpha1}, {"p0", result.model.p0},
                  {"p1", result.model.p1},       {"delta_p", result.model.delta_p}};
    j["plan"] = {{"keyspace_size", result.plan.keyspace_size},
                 {"p_f", result.plan.p_f},
                 {"p_m", result.plan.p_m},
                 {"w_f", result.plan.w_f},
                 {"w_m", result.plan.w_m},
                 {"n", result.plan.n},
                 {"T", result.plan.T},
                 {"n_star", result.plan.n_star}};

    nlohmann::ordered_json stats = {{"n_used", result.stats.n_used},
                                    {"T", result.stats.T},
                                    {"keys_tested", result.stats.keys_tested}};
    if (include_timing)
    {
        stats["elapsed_seconds"] = result.stats.elapsed_seconds;
        stats["keys_per_second"] = result.stats.keys_per_second;
    }
    j["stats"] = std::move(stats);

    if (!result.diagnostic.empty())
        j["diagnostic"] = result.diagnostic;
    return j.dump(2);
}

} // namespace stegokey
