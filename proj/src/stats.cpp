#include "stegokey/stats.hpp"

#include <cmath>
#include <numbers>

namespace stegokey
{

namespace
{

// Long-double tail for the bisection: near p -> 1 the reflected problem
// works on 1 - p, where the extra mantissa bits keep the root honest.
long double q_tail(long double x)
{
    return 0.5L * std::erfc(x / std::numbers::sqrt2_v<long double>);
}

} // namespace

double q_function(double x)
{
    // erfc carries the tail's relative accuracy, so the absolute error stays
    // near machine epsilon over the whole line.
    return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double inverse_q(double p)
{
    if (!(p > 0.0 && p < 1.0))
        throw std::domain_error("inverse_q: probability must lie strictly in (0, 1)");
    if (p == 0.5)
        return 0.0;
    if (p > 0.5)
        return -inverse_q(1.0 - p); // exact: 1 - p loses nothing for p >= 0.5

    long double lo = 0.0L;
    long double hi = 1.0L;
    while (q_tail(hi) > p)
        hi *= 2.0L; // Q decays fast; a handful of doublings bracket any double p
    for (int i = 0; i < 200 && hi - lo > 1e-15L * hi; ++i)
    {
        const long double mid = 0.5L * (lo + hi);
        (q_tail(mid) > p ? lo : hi) = mid;
    }
    return double(0.5L * (lo + hi));
}

MixtureModel build_mixture(double r, double sigma, double A)
{
    if (!(sigma > 0.0))
        throw std::domain_error("build_mixture: sigma must be positive");
    if (!(r >= 0.0 && r <= 1.0))
        throw std::domain_error("build_mixture: rate must lie in [0, 1]");
    MixtureModel m;
    m.r = r;
    m.sigma = sigma;
    m.A = A;
    m.alpha0 = q_function(A / sigma);
    m.alpha1 = q_function((A - 1.0) / sigma);
    m.p0 = 0.5 * (m.alpha0 + m.alpha1);
    m.p1 = (1.0 - 0.5 * r) * m.alpha0 + 0.5 * r * m.alpha1;
    m.delta_p = 0.5 * (1.0 - r) * (m.alpha1 - m.alpha0);
    return m;
}

double required_samples(double p0, double p1, double delta_p, double w_f, double w_m)
{
    const double spread = w_m * std::sqrt(p0 * (1.0 - p0)) + w_f * std::sqrt(p1 * (1.0 - p1));
    const double root = spread / delta_p;
    return root * root;
}

AttackPlan plan_attack(const MixtureModel& model, std::uint64_t keyspace_size, double p_m)
{
    if (keyspace_size < 2)
        throw std::invalid_argument("plan_attack: keyspace must hold at least two keys");
    if (!(p_m > 0.0 && p_m < 0.5))
        throw std::invalid_argument("plan_attack: p_m must lie in (0, 0.5)");
    if (!(model.delta_p > 0.0))
        throw InfeasiblePlanError("plan_attack: accordant advantage vanishes (attack infeasible "
                                  "at r = 1)");

    AttackPlan plan;
    plan.keyspace_size = keyspace_size;
    plan.p_f = 1.0 / double(keyspace_size);
    plan.p_m = p_m;
    plan.w_f = inverse_q(plan.p_f);
    plan.w_m = inverse_q(p_m);

    const double n_real = required_samples(model.p0, model.p1, model.delta_p, plan.w_f, plan.w_m);
    plan.n = std::uint64_t(std::ceil(n_real));
    if (plan.n < 1)
        plan.n = 1;
    plan.T = plan.w_f * std::sqrt(double(plan.n) * model.p1 * (1.0 - model.p1)) +
             double(plan.n) * model.p1;

    // pixels needed for the planned sample count to fit a rate-r path;
    // diverges toward both rate extremes
    const double dalpha = model.alpha1 - model.alpha0;
    const double spread = plan.w_m * std::sqrt(model.p0 * (1.0 - model.p0)) +
                          plan.w_f * std::sqrt(model.p1 * (1.0 - model.p1));
    plan.n_star = 4.0 * spread * spread /
                  (model.r * (1.0 - model.r) * (1.0 - model.r) * dalpha * dalpha);
    return plan;
}

} // namespace stegokey
