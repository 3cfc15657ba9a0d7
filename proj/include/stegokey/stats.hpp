#pragma once

#include <cstdint>
#include <stdexcept>

namespace stegokey
{

// Upper-tail standard normal probability Q(x) = P(N(0,1) > x).
double q_function(double x);

// x with Q(x) = p, 0 < p < 1. Bracketed bisection; long-double tail
// evaluation keeps the round trip tight near p -> 1 where the double Q loses
// absolute resolution.
double inverse_q(double p);

// The two-hypothesis residual model at threshold A. A correct key samples
// its own path (half the pixels modified); a wrong key samples the global
// mixture (a fraction r/2 modified).
struct MixtureModel
{
    double r = 0;       // embedding rate
    double sigma = 1;   // residual std-dev
    double A = 0.5;     // decision threshold on residuals
    double alpha0 = 0;  // P(unmodified residual > A) = Q(A/sigma)
    double alpha1 = 0;  // P(modified residual > A)   = Q((A-1)/sigma)
    double p0 = 0;      // correct-key exceedance: (alpha0 + alpha1)/2
    double p1 = 0;      // wrong-key exceedance: (1 - r/2) alpha0 + (r/2) alpha1
    double delta_p = 0; // accordant advantage p0 - p1 = (1-r)(alpha1-alpha0)/2
};

MixtureModel build_mixture(double r, double sigma, double A = 0.5);

struct AttackPlan
{
    std::uint64_t keyspace_size = 0;
    double p_f = 0; // per-key false-alarm probability, 1/keyspace_size
    double p_m = 0; // correct-key miss probability
    double w_f = 0;
    double w_m = 0;
    std::uint64_t n = 0; // samples per key for the threshold test (bits)
    double T = 0;        // accept when t_k >= T
    double n_star = 0;   // pixels needed so the planned n fits the path, ~ n/r
};

struct InfeasiblePlanError : std::invalid_argument
{
    using std::invalid_argument::invalid_argument;
};

// Sample count that separates N(n p0, n p0 q0) from N(n p1, n p1 q1) at the
// requested error pair, before rounding:
// ((w_m sqrt(p0 q0) + w_f sqrt(p1 q1)) / delta_p)^2.
double required_samples(double p0, double p1, double delta_p, double w_f, double w_m);

// Neyman-Pearson plan for the key search: p_f = 1/keyspace_size so the
// expected number of false alarms over the whole search stays below one.
AttackPlan plan_attack(const MixtureModel& model, std::uint64_t keyspace_size, double p_m);

} // namespace stegokey
