#include "stegokey/attack.hpp"
#include "stegokey/codec.hpp"
#include "stegokey/noise.hpp"
#include "stegokey/pgm.hpp"
#include "stegokey/stats.hpp"
#include "stegokey/theory.hpp"
#include "stegokey/workbench.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{

using nlohmann::ordered_json;
using namespace stegokey;

constexpr int exit_ok = 0;
constexpr int exit_attack_failed = 2;
constexpr int exit_input_error = 3;

RngKind parse_rng(const std::string& name)
{
    return name == "borland_lcg" ? RngKind::borland_lcg : RngKind::splitmix;
}

EmbedOp parse_op(const std::string& name)
{
    return name == "replace" ? EmbedOp::replace : EmbedOp::plus_minus_one;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    return bytes;
}

void write_file_bytes(const std::string& path, const std::vector<std::uint8_t>& bytes)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot open " + path + " for writing");
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out)
        throw std::runtime_error("short write to " + path);
}

ordered_json plan_json(const AttackPlan& plan)
{
    return {{"keyspace_size", plan.keyspace_size},
            {"p_f", plan.p_f},
            {"p_m", plan.p_m},
            {"w_f", plan.w_f},
            {"w_m", plan.w_m},
            {"n", plan.n},
            {"T", plan.T},
            {"n_star", plan.n_star}};
}

ordered_json model_json(const MixtureModel& model)
{
    return {{"r", model.r},   {"sigma", model.sigma},   {"A", model.A},
            {"alpha0", model.alpha0}, {"alpha1", model.alpha1}, {"p0", model.p0},
            {"p1", model.p1}, {"delta_p", model.delta_p}};
}

struct CliState
{
    std::string rng_name = "splitmix";
    unsigned threads = 1;
    bool json = false;
};

int run_embed(const CliState& state, const std::string& cover_path, const std::string& msg_path,
              std::uint32_t seed, const std::string& op_name, const std::string& out_path,
              bool no_header, std::uint32_t header_pixels)
{
    EmbedConfig config;
    config.operation = parse_op(op_name);
    config.reserve_header = !no_header;
    config.header_pixels = header_pixels;
    config.rng_kind = parse_rng(state.rng_name);

    const GrayImage cover = read_pgm(cover_path);
    const std::vector<std::uint8_t> msg = read_file_bytes(msg_path);
    if (msg.empty())
        throw std::runtime_error("message file is empty");

    const KeyCandidate key{seed, std::uint32_t(msg.size())};
    const GrayImage stego = embed(cover, bytes_to_bits(msg), key, config);
    write_pgm(stego, out_path);

    const double distortion = hamming_distortion(cover, stego);
    if (state.json)
    {
        ordered_json j{{"out", out_path},
                       {"message_len_bytes", key.message_len_bytes},
                       {"rate", double(8.0 * msg.size()) /
                                    double(path_capacity_bits(cover.size(), config))},
                       {"distortion", distortion}};
        std::cout << j.dump(2) << '\n';
    }
    else
    {
        std::cout << "wrote " << out_path << ": " << msg.size() << " bytes embedded, distortion "
                  << distortion << '\n';
    }
    return exit_ok;
}

int run_extract(const CliState& state, const std::string& stego_path, std::uint32_t seed,
                std::uint32_t len, const std::string& out_path, bool no_header,
                std::uint32_t header_pixels, const std::string& op_name)
{
    EmbedConfig config;
    config.operation = parse_op(op_name);
    config.reserve_header = !no_header;
    config.header_pixels = header_pixels;
    config.rng_kind = parse_rng(state.rng_name);

    const GrayImage stego = read_pgm(stego_path);
    const std::vector<std::uint8_t> bytes = bits_to_bytes(extract(stego, {seed, len}, config));

    if (!out_path.empty())
    {
        write_file_bytes(out_path, bytes);
        if (state.json)
            std::cout << ordered_json{{"out", out_path}, {"bytes", bytes.size()}}.dump(2) << '\n';
        else
            std::cout << "wrote " << bytes.size() << " bytes to " << out_path << '\n';
    }
    else
    {
        std::cout.write(reinterpret_cast<const char*>(bytes.data()),
                        std::streamsize(bytes.size()));
    }
    return exit_ok;
}

int run_noise(const CliState& state, const std::string& stego_path, const std::string& out_path,
              std::size_t radius, std::uint32_t skip_header)
{
    const GrayImage stego = read_pgm(stego_path);
    const NoiseField field = compute_noise(stego, radius, skip_header);
    const RateEstimate rate = estimate_rate(field);
    const Sigma2Estimate sigma2 = estimate_sigma2(field, rate.value);

    ordered_json sidecar{{"N", field.counted},
                         {"mean", field.mean},
                         {"a2", field.second_moment},
                         {"sigma2_hat", sigma2.value},
                         {"sigma2_clamped", sigma2.clamped},
                         {"r_hat", rate.value},
                         {"r_half_width", rate.half_width}};

    if (!out_path.empty())
    {
        // raw little-endian doubles; this tool only targets LE hosts
        std::ofstream out(out_path, std::ios::binary);
        if (!out)
            throw std::runtime_error("cannot open " + out_path + " for writing");
        static_assert(sizeof(double) == 8);
        out.write(reinterpret_cast<const char*>(field.values.data()),
                  std::streamsize(field.values.size() * sizeof(double)));
        if (!out)
            throw std::runtime_error("short write to " + out_path);
        std::ofstream side(out_path + ".json");
        side << sidecar.dump(2) << '\n';
    }
    std::cout << sidecar.dump(2) << '\n';
    return exit_ok;
}

int run_plan(double r, double sigma, std::uint64_t keys, double p_m, double A)
{
    const MixtureModel model = build_mixture(r, sigma, A);
    const AttackPlan plan = plan_attack(model, keys, p_m);
    ordered_json j{{"model", model_json(model)}, {"plan", plan_json(plan)}};
    std::cout << j.dump(2) << '\n';
    return exit_ok;
}

std::vector<std::uint32_t> length_window(const std::string& spec, const GrayImage& stego,
                                         const EmbedConfig& config, std::size_t radius)
{
    const std::size_t capacity = path_capacity_bits(stego.size(), config);
    const std::uint32_t max_len = std::uint32_t(capacity / 8);
    std::uint32_t lo = 1;
    std::uint32_t hi = max_len;
    if (spec == "auto")
    {
        // enumerate every length the rate estimate leaves plausible
        const NoiseField field = compute_noise(stego, radius, config.header_offset());
        const RateEstimate rate = estimate_rate(field);
        const double bytes = rate.value * double(capacity) / 8.0;
        const double slack = rate.half_width * double(capacity) / 8.0;
        lo = std::uint32_t(std::max(1.0, std::floor(bytes - slack)));
        hi = std::uint32_t(std::max(1.0, std::ceil(bytes + slack)));
    }
    else
    {
        const auto colon = spec.find(':');
        if (colon == std::string::npos)
            throw std::runtime_error("--len-window wants auto or MIN:MAX");
        lo = std::uint32_t(std::stoul(spec.substr(0, colon)));
        hi = std::uint32_t(std::stoul(spec.substr(colon + 1)));
        if (lo < 1 || hi < lo)
            throw std::runtime_error("--len-window bounds out of order");
    }
    hi = std::min(hi, max_len);
    lo = std::min(lo, hi);
    std::vector<std::uint32_t> lengths;
    lengths.reserve(hi - lo + 1);
    for (std::uint32_t len = lo; len <= hi; ++len)
        lengths.push_back(len);
    return lengths;
}

int run_attack(const CliState& state, const std::string& stego_path, std::uint32_t seed_bits,
               const std::string& window, double p_m, double fa_budget,
               std::optional<double> rate, std::optional<double> sigma, double A,
               std::size_t radius, const std::string& report_path, bool no_timing,
               bool no_header, std::uint32_t header_pixels, const std::string& op_name)
{
    if (seed_bits < 1 || seed_bits > 16)
        throw std::runtime_error("--seed-bits must lie in [1, 16]");

    EmbedConfig config;
    config.operation = parse_op(op_name);
    config.reserve_header = !no_header;
    config.header_pixels = header_pixels;
    config.rng_kind = parse_rng(state.rng_name);

    const GrayImage stego = read_pgm(stego_path);

    Keyspace space;
    space.seed_count = 1u << seed_bits;
    space.lengths = length_window(window, stego, config, radius);

    AttackOptions options;
    options.rate = rate;
    options.sigma = sigma;
    options.p_m = p_m;
    options.fa_budget = fa_budget;
    options.A = A;
    options.radius = radius;
    options.threads = state.threads;

    const AttackResult result = correlation_attack(stego, space, config, options);
    const std::string report = attack_report_json(result, !no_timing);

    if (!report_path.empty())
    {
        std::ofstream out(report_path);
        if (!out)
            throw std::runtime_error("cannot open " + report_path + " for writing");
        out << report << '\n';
    }

    if (state.json)
    {
        std::cout << report << '\n';
    }
    else
    {
        std::cout << "outcome: " << to_string(result.outcome) << " ("
                  << to_string(result.stage) << ")\n";
        if (result.recovered)
            std::cout << "recovered: seed=" << result.recovered->seed
                      << " len=" << result.recovered->message_len_bytes << " bytes\n";
        if (result.best_guess)
            std::cout << "best guess: seed=" << result.best_guess->seed
                      << " len=" << result.best_guess->message_len_bytes << " bytes ("
                      << result.survivors.size() << " tied)\n";
        std::cout << "rate " << result.rate_used << (result.rate_estimated ? " (estimated)" : "")
                  << ", sigma2 " << result.sigma2_used << '\n';
        std::cout << "plan: n=" << result.plan.n << " T=" << result.plan.T << '\n';
        std::cout << "tested " << result.stats.keys_tested << " keys in "
                  << result.stats.elapsed_seconds << " s (" << result.stats.keys_per_second
                  << " keys/s)\n";
        if (!result.diagnostic.empty())
            std::cout << "note: " << result.diagnostic << '\n';
    }
    return result.outcome == AttackOutcome::unique_key ? exit_ok : exit_attack_failed;
}

int run_theory(const CliState& state, std::size_t samples, double keybits, double epsilon,
               std::size_t points)
{
    TheoryParams params;
    params.samples_per_object = samples;
    params.key_entropy_bits = keybits;
    params.epsilon = epsilon;

    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < points; ++i)
    {
        const double r = points == 1 ? 0.5 : double(i) / double(points - 1);
        params.message_entropy_bits = r * double(samples);
        params.distortion = 0.5 * r;
        const UnicityBound bound = unicity_lower_bound(params);
        rows.push_back({{"r", r},
                        {"capacity", hiding_capacity(params.distortion)},
                        {"redundancy", hiding_redundancy(r)},
                        {"unicity_objects", bound.divergent ? -1.0 : bound.objects},
                        {"divergent", bound.divergent}});
    }

    if (state.json)
    {
        std::cout << rows.dump(2) << '\n';
        return exit_ok;
    }
    std::cout << std::left << std::setw(10) << "r" << std::setw(14) << "capacity"
              << std::setw(14) << "redundancy" << "unicity (objects)\n";
    for (const auto& row : rows)
    {
        std::cout << std::left << std::setw(10) << std::setprecision(4)
                  << row["r"].get<double>() << std::setw(14) << std::setprecision(6)
                  << row["capacity"].get<double>() << std::setw(14)
                  << row["redundancy"].get<double>();
        if (row["divergent"].get<bool>())
            std::cout << "unbounded\n";
        else
            std::cout << std::setprecision(6) << row["unicity_objects"].get<double>() << '\n';
    }
    return exit_ok;
}

int run_sweep_cmd(const CliState& state, const std::string& curve, std::size_t points,
                  double sigma, std::uint64_t keys, double p_m, const std::string& cover_path,
                  std::size_t width, std::size_t height, double base, double texture_sigma,
                  std::uint64_t gen_seed, const std::vector<std::uint32_t>& lengths,
                  std::uint32_t seed_bits, std::uint32_t trials, std::optional<double> rate,
                  std::optional<double> sigma_override, double p_m_attack, double fa_budget)
{
    if (curve == "redundancy")
    {
        std::cout << redundancy_curve_csv(points);
        return exit_ok;
    }
    if (curve == "nstar")
    {
        std::cout << nstar_curve_csv(points, sigma, keys, p_m);
        return exit_ok;
    }

    // full embed-and-attack protocol over the length list
    GrayImage cover;
    if (!cover_path.empty())
        cover = read_pgm(cover_path);
    else
        cover = synth_cover(width, height, base, texture_sigma, gen_seed);

    SweepConfig config;
    config.seed_bits = seed_bits;
    config.trials = trials;
    config.gen_seed = gen_seed + 1;
    config.embed.rng_kind = parse_rng(state.rng_name);
    config.attack.rate = rate;
    config.attack.sigma = sigma_override;
    config.attack.p_m = p_m_attack;
    config.attack.fa_budget = fa_budget;
    config.attack.threads = state.threads;

    if (lengths.empty())
        throw std::runtime_error("sweep wants --lengths (or --curve)");
    std::cout << sweep_csv(run_sweep(cover, lengths, config));
    return exit_ok;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"keyed random-path LSB workbench: embed, extract, model, and recover stego keys"};
    app.require_subcommand(1);

    CliState state;
    app.add_option("--rng", state.rng_name, "path PRNG family")
        ->check(CLI::IsMember({"splitmix", "borland_lcg"}));
    app.add_option("--threads", state.threads, "worker threads for the key search");
    app.add_flag("--json", state.json, "machine-readable output");

    // embed
    auto* cmd_embed = app.add_subcommand("embed", "hide a message file in a PGM cover");
    cmd_embed->fallthrough();
    std::string cover_path, msg_path, out_path, op_name = "replace";
    std::uint32_t seed = 0, header_pixels = 64;
    bool no_header = false;
    cmd_embed->add_option("--cover", cover_path, "cover image (binary PGM)")->required();
    cmd_embed->add_option("--msg", msg_path, "message file (raw bytes)")->required();
    cmd_embed->add_option("--seed", seed, "16-bit stego seed")->required();
    cmd_embed->add_option("--op", op_name, "embedding operation")
        ->check(CLI::IsMember({"replace", "pm1", "plus_minus_one"}));
    cmd_embed->add_option("--out", out_path, "stego output path")->required();
    cmd_embed->add_option("--header-pixels", header_pixels, "reserved header size");
    cmd_embed->add_flag("--no-header", no_header, "do not reserve a header region");

    // extract
    auto* cmd_extract = app.add_subcommand("extract", "recover a message with a known key");
    cmd_extract->fallthrough();
    std::string x_stego, x_out;
    std::uint32_t x_seed = 0, x_len = 0, x_header_pixels = 64;
    bool x_no_header = false;
    std::string x_op = "replace";
    cmd_extract->add_option("--stego", x_stego, "stego image (binary PGM)")->required();
    cmd_extract->add_option("--seed", x_seed, "16-bit stego seed")->required();
    cmd_extract->add_option("--len", x_len, "message length in bytes")->required();
    cmd_extract->add_option("--out", x_out, "output file (stdout when omitted)");
    cmd_extract->add_option("--header-pixels", x_header_pixels, "reserved header size");
    cmd_extract->add_flag("--no-header", x_no_header, "header region was not reserved");
    cmd_extract->add_option("--op", x_op, "embedding operation")
        ->check(CLI::IsMember({"replace", "pm1", "plus_minus_one"}));

    // noise
    auto* cmd_noise = app.add_subcommand("noise", "residual field and mixture estimates");
    cmd_noise->fallthrough();
    std::string n_stego, n_out;
    std::size_t n_radius = 1;
    std::uint32_t n_skip = 64;
    cmd_noise->add_option("--stego", n_stego, "image to analyze (binary PGM)")->required();
    cmd_noise->add_option("--out", n_out, "write residuals as raw f64 (sidecar: .json)");
    cmd_noise->add_option("--radius", n_radius, "filter radius");
    cmd_noise->add_option("--skip-header", n_skip, "pixels excluded from statistics");

    // plan
    auto* cmd_plan = app.add_subcommand("plan", "threshold-test plan for given r, sigma");
    cmd_plan->fallthrough();
    double p_r = 0.3, p_sigma = 1.0, p_pm = 0.01, p_A = 0.5;
    std::uint64_t p_keys = 65536;
    cmd_plan->add_option("--r", p_r, "embedding rate")->required();
    cmd_plan->add_option("--sigma", p_sigma, "residual std-dev")->required();
    cmd_plan->add_option("--keys", p_keys, "keyspace size");
    cmd_plan->add_option("--pm", p_pm, "miss probability");
    cmd_plan->add_option("--A", p_A, "residual threshold");

    // attack
    auto* cmd_attack = app.add_subcommand("attack", "search the keyspace for the stego key");
    cmd_attack->fallthrough();
    std::string a_stego, a_window = "auto", a_report, a_op = "replace";
    std::uint32_t a_seed_bits = 12, a_header_pixels = 64;
    double a_pm = 1e-6, a_fa = 1.0 / 1024, a_A = 0.5;
    std::size_t a_radius = 1;
    bool a_no_timing = false, a_no_header = false;
    std::optional<double> a_rate, a_sigma;
    cmd_attack->add_option("--stego", a_stego, "stego image (binary PGM)")->required();
    cmd_attack->add_option("--seed-bits", a_seed_bits, "seed bits to search (max 16)");
    cmd_attack->add_option("--len-window", a_window, "auto or MIN:MAX candidate bytes");
    cmd_attack->add_option("--pm", a_pm, "miss probability");
    cmd_attack->add_option("--fa-budget", a_fa, "expected false alarms per search");
    cmd_attack->add_option("--rate", a_rate, "skip rate estimation");
    cmd_attack->add_option("--sigma", a_sigma, "residual std-dev override");
    cmd_attack->add_option("--A", a_A, "residual threshold");
    cmd_attack->add_option("--radius", a_radius, "filter radius");
    cmd_attack->add_option("--report", a_report, "write the JSON report here");
    cmd_attack->add_flag("--no-timing", a_no_timing, "omit timing from the report");
    cmd_attack->add_option("--header-pixels", a_header_pixels, "reserved header size");
    cmd_attack->add_flag("--no-header", a_no_header, "header region was not reserved");
    cmd_attack->add_option("--op", a_op, "embedding operation")
        ->check(CLI::IsMember({"replace", "pm1", "plus_minus_one"}));

    // theory
    auto* cmd_theory = app.add_subcommand("theory", "capacity, redundancy and unicity table");
    cmd_theory->fallthrough();
    std::size_t t_samples = 153600, t_points = 21;
    double t_keybits = 16, t_epsilon = 1e-6;
    cmd_theory->add_option("--samples", t_samples, "pixels per object");
    cmd_theory->add_option("--keybits", t_keybits, "key entropy in bits");
    cmd_theory->add_option("--epsilon", t_epsilon, "slack in bits per pixel");
    cmd_theory->add_option("--points", t_points, "rate grid size");

    // sweep
    auto* cmd_sweep = app.add_subcommand("sweep", "curves or the embed-and-attack protocol");
    cmd_sweep->fallthrough();
    std::string s_curve, s_cover;
    std::size_t s_points = 99, s_width = 320, s_height = 480;
    double s_sigma = 1.5, s_pm = 0.01, s_base = 128, s_texture = 1.5, s_pm_attack = 1e-6,
           s_fa = 1.0 / 1024;
    std::uint64_t s_keys = 65536, s_gen_seed = 1;
    std::vector<std::uint32_t> s_lengths;
    std::uint32_t s_seed_bits = 12, s_trials = 1;
    std::optional<double> s_rate, s_sigma_override;
    cmd_sweep->add_option("--curve", s_curve, "redundancy or nstar")
        ->check(CLI::IsMember({"redundancy", "nstar"}));
    cmd_sweep->add_option("--points", s_points, "grid size for curves");
    cmd_sweep->add_option("--sigma", s_sigma, "sigma for the nstar curve");
    cmd_sweep->add_option("--keys", s_keys, "keyspace size for the nstar curve");
    cmd_sweep->add_option("--pm", s_pm, "miss probability for the nstar curve");
    cmd_sweep->add_option("--cover", s_cover, "cover image; synthetic when omitted");
    cmd_sweep->add_option("--width", s_width, "synthetic cover width");
    cmd_sweep->add_option("--height", s_height, "synthetic cover height");
    cmd_sweep->add_option("--base", s_base, "synthetic cover base level");
    cmd_sweep->add_option("--texture-sigma", s_texture, "synthetic cover texture");
    cmd_sweep->add_option("--gen-seed", s_gen_seed, "generator seed for covers and keys");
    cmd_sweep->add_option("--lengths", s_lengths, "message lengths in bytes")->delimiter(',');
    cmd_sweep->add_option("--seed-bits", s_seed_bits, "seed bits to search");
    cmd_sweep->add_option("--trials", s_trials, "trials per length");
    cmd_sweep->add_option("--rate", s_rate, "attack rate override");
    cmd_sweep->add_option("--sigma-override", s_sigma_override, "attack sigma override");
    cmd_sweep->add_option("--pm-attack", s_pm_attack, "attack miss probability");
    cmd_sweep->add_option("--fa-budget", s_fa, "attack false-alarm budget");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        const int code = app.exit(e);
        return code == 0 ? exit_ok : exit_input_error;
    }

    try
    {
        if (*cmd_embed)
            return run_embed(state, cover_path, msg_path, seed, op_name, out_path, no_header,
                             header_pixels);
        if (*cmd_extract)
            return run_extract(state, x_stego, x_seed, x_len, x_out, x_no_header,
                               x_header_pixels, x_op);
        if (*cmd_noise)
            return run_noise(state, n_stego, n_out, n_radius, n_skip);
        if (*cmd_plan)
            return run_plan(p_r, p_sigma, p_keys, p_pm, p_A);
        if (*cmd_attack)
            return run_attack(state, a_stego, a_seed_bits, a_window, a_pm, a_fa, a_rate, a_sigma,
                              a_A, a_radius, a_report, a_no_timing, a_no_header, a_header_pixels,
                              a_op);
        if (*cmd_theory)
            return run_theory(state, t_samples, t_keybits, t_epsilon, t_points);
        if (*cmd_sweep)
            return run_sweep_cmd(state, s_curve, s_points, s_sigma, s_keys, s_pm, s_cover,
                                 s_width, s_height, s_base, s_texture, s_gen_seed, s_lengths,
                                 s_seed_bits, s_trials, s_rate, s_sigma_override, s_pm_attack,
                                 s_fa);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    }
    return exit_input_error;
}
