#pragma once

#include <cstddef>

namespace stegokey
{

// Information-theoretic description of one cover object and the embedding.
// Rates are derived from the entropies so the R = H/N invariants hold by
// construction.
struct TheoryParams
{
    std::size_t samples_per_object = 1; // N
    double key_entropy_bits = 0;        // H(K)
    double message_entropy_bits = 0;    // H(M) per object
    double distortion = 0;              // D, Hamming
    double epsilon = 1e-6;              // slack, bits/sign, > 0

    double message_rate() const { return message_entropy_bits / double(samples_per_object); }
    double key_rate() const { return key_entropy_bits / double(samples_per_object); }
};

// H(p) = -p log2 p - (1-p) log2 (1-p), with 0 log 0 = 0.
double binary_entropy(double p);

// Capacity of the binary-Hamming hiding channel: H(D) up to D = 1/2, then 1.
double hiding_capacity(double distortion);

// H(r/2) - r: the slack between what rate-r LSB embedding could carry and
// what it does carry. Zero exactly at r = 0 and r = 1.
double hiding_redundancy(double rate);

// Lower bound on the expected number of spurious keys after observing n
// objects: 2^{H(K)} / 2^{nN(C(D) - R_m + eps)} - 1, clamped at 0.
double spurious_key_bound(const TheoryParams& params, std::size_t n);

struct UnicityBound
{
    double objects = 0;
    bool divergent = false; // nonpositive denominator: the bound is vacuous
};

// Minimum object count for the spurious-key expectation to reach zero:
// R_k / (C(D) - R_m + eps).
UnicityBound unicity_lower_bound(const TheoryParams& params);

} // namespace stegokey
