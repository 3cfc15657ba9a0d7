#include "stegokey/theory.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace stegokey
{

namespace
{

void validate(const TheoryParams& params)
{
    if (params.samples_per_object < 1)
        throw std::domain_error("theory: samples_per_object must be >= 1");
    if (params.key_entropy_bits < 0)
        throw std::domain_error("theory: key entropy must be nonnegative");
    if (!(params.epsilon > 0))
        throw std::domain_error("theory: epsilon must be positive");
    if (params.distortion < 0 || params.distortion > 1)
        throw std::domain_error("theory: distortion must lie in [0, 1]");
}

} // namespace

double binary_entropy(double p)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw std::domain_error("binary_entropy: argument must lie in [0, 1]");
    if (p == 0.0 || p == 1.0)
        return 0.0; // 0 log 0 = 0
    return -p * std::log2(p) - (1.0 - p) * std::log2(1.0 - p);
}

double hiding_capacity(double distortion)
{
    if (distortion < 0.0)
        throw std::domain_error("hiding_capacity: distortion must be nonnegative");
    return distortion >= 0.5 ? 1.0 : binary_entropy(distortion);
}

double hiding_redundancy(double rate)
{
    if (!(rate >= 0.0 && rate <= 1.0))
        throw std::domain_error("hiding_redundancy: rate must lie in [0, 1]");
    return binary_entropy(rate / 2.0) - rate;
}

double spurious_key_bound(const TheoryParams& params, std::size_t n)
{
    validate(params);
    if (n < 1)
        throw std::domain_error("spurious_key_bound: n must be >= 1");
    const double slack = hiding_capacity(params.distortion) - params.message_rate() +
                         params.epsilon;
    // 2^{H_K} / 2^{nN * slack} - 1, evaluated as one exponential so the
    // boundary case lands on zero exactly.
    const double exponent = params.key_entropy_bits -
                            double(n) * double(params.samples_per_object) * slack;
    const double bound = std::exp2(exponent) - 1.0;
    return bound < 0.0 ? 0.0 : bound;
}

UnicityBound unicity_lower_bound(const TheoryParams& params)
{
    validate(params);
    const double denom = hiding_capacity(params.distortion) - params.message_rate() +
                         params.epsilon;
    if (!(denom > 0.0))
        return {std::numeric_limits<double>::infinity(), true};
    return {params.key_rate() / denom, false};
}

} // namespace stegokey
