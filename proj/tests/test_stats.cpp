#include "stegokey/stats.hpp"

#include "oracle.hpp"

#include <doctest.h>

#include <cmath>

using namespace stegokey;

TEST_CASE("q_function matches the frozen tail values")
{
    CHECK(q_function(0.0) == 0.5);
    CHECK(q_function(1.0) == doctest::Approx(0.15865525393145705).epsilon(1e-14));
    CHECK(q_function(0.5) == doctest::Approx(0.30853753872598690).epsilon(1e-14));
    CHECK(q_function(1.0 / 3.0) == doctest::Approx(0.36944134018176364).epsilon(1e-14));
    CHECK(q_function(-1.0) == doctest::Approx(1.0 - 0.15865525393145705).epsilon(1e-14));
}

TEST_CASE("q_function agrees with direct quadrature of the density")
{
    for (int i = 0; i <= 100; ++i)
    {
        const double x = -8.0 + 0.16 * double(i);
        const double want = double(oracle::normal_upper_tail(x));
        CHECK(std::fabs(q_function(x) - want) <= 1e-12);
    }
}

TEST_CASE("inverse_q matches the frozen quantiles and round-trips")
{
    CHECK(inverse_q(0.5) == 0.0);
    CHECK(inverse_q(0.01) == doctest::Approx(2.3263478740408411).epsilon(1e-12));
    CHECK(inverse_q(1e-4) == doctest::Approx(3.7190164854556806).epsilon(1e-12));
    CHECK(inverse_q(1.0 / 65536.0) == doctest::Approx(4.1695693233491058).epsilon(1e-12));
    CHECK(inverse_q(0.99) == doctest::Approx(-2.3263478740408411).epsilon(1e-12));

    for (int i = -60; i <= 60; ++i)
    {
        const double x = double(i) / 10.0;
        CHECK(std::fabs(inverse_q(q_function(x)) - x) <= 1e-8);
    }
    for (const double p : {1e-9, 1e-6, 1e-3, 0.2, 0.5, 0.8, 1.0 - 1e-6})
        CHECK(q_function(inverse_q(p)) == doctest::Approx(p).epsilon(1e-10));
}

TEST_CASE("inverse_q rejects degenerate probabilities")
{
    CHECK_THROWS_AS(inverse_q(0.0), std::domain_error);
    CHECK_THROWS_AS(inverse_q(1.0), std::domain_error);
    CHECK_THROWS_AS(inverse_q(-0.2), std::domain_error);
}

TEST_CASE("mixture model identities hold across the parameter grid")
{
    for (const double sigma : {0.5, 1.0, 2.0, 4.0, 8.0})
    {
        for (int ri = 1; ri <= 19; ++ri)
        {
            const double r = double(ri) / 20.0;
            const MixtureModel m = build_mixture(r, sigma);
            CHECK(m.alpha1 > m.alpha0);
            CHECK(m.p0 >= m.p1);
            CHECK(std::fabs(m.p0 - 0.5) <= 1e-15); // A = 0.5 balances the tails
            CHECK(std::fabs((m.p0 - m.p1) - m.delta_p) <= 1e-12);
            CHECK(std::fabs(m.delta_p - 0.5 * (1.0 - r) * (m.alpha1 - m.alpha0)) <= 1e-15);
        }
        // r = 1 erases the advantage entirely
        const MixtureModel flat = build_mixture(1.0, sigma);
        CHECK(flat.p1 == flat.p0);
        CHECK(flat.delta_p == 0.0);
    }
}

TEST_CASE("mixture tail spread matches the frozen values")
{
    CHECK(build_mixture(0.0, 1.0).alpha1 - build_mixture(0.0, 1.0).alpha0 ==
          doctest::Approx(0.38292492254802621).epsilon(1e-13));
    CHECK(build_mixture(0.0, 1.5).alpha1 - build_mixture(0.0, 1.5).alpha0 ==
          doctest::Approx(0.26111731963647272).epsilon(1e-13));
    CHECK(build_mixture(0.0, 5.5).alpha1 - build_mixture(0.0, 5.5).alpha0 ==
          doctest::Approx(0.072435173393788793).epsilon(1e-13));
}

TEST_CASE("build_mixture rejects bad parameters")
{
    CHECK_THROWS_AS(build_mixture(0.3, 0.0), std::domain_error);
    CHECK_THROWS_AS(build_mixture(0.3, -1.0), std::domain_error);
    CHECK_THROWS_AS(build_mixture(-0.1, 1.0), std::domain_error);
    CHECK_THROWS_AS(build_mixture(1.1, 1.0), std::domain_error);
}

TEST_CASE("plan golden tuple at sigma 1, r 0.3, 2^16 keys, p_m 0.01")
{
    const MixtureModel m = build_mixture(0.3, 1.0);
    CHECK(m.p1 == doctest::Approx(0.36597627710819083).epsilon(1e-14));
    CHECK(m.delta_p == doctest::Approx(0.13402372289180917).epsilon(1e-14));

    const AttackPlan plan = plan_attack(m, 65536, 0.01);
    CHECK(plan.n == 561);
    CHECK(plan.T == doctest::Approx(252.8847397300178).epsilon(1e-12));
    CHECK(plan.n_star == doctest::Approx(1866.7693595330740).epsilon(1e-12));
    CHECK(plan.p_f == 1.0 / 65536.0);

    // n_star is the planned sample count inflated by 1/r
    const double n_real = required_samples(m.p0, m.p1, m.delta_p, plan.w_f, plan.w_m);
    CHECK(plan.n_star * m.r == doctest::Approx(n_real).epsilon(1e-12));
}

TEST_CASE("threshold sits between the two hypothesis means")
{
    for (const double sigma : {0.7, 1.0, 2.5})
    {
        for (int ri = 1; ri <= 9; ++ri)
        {
            const double r = double(ri) / 10.0;
            const MixtureModel m = build_mixture(r, sigma);
            const AttackPlan plan = plan_attack(m, 4096, 0.05);
            CHECK(double(plan.n) * m.p1 < plan.T);
            CHECK(plan.T < double(plan.n) * m.p0);
        }
    }
}

TEST_CASE("halving the advantage exactly quadruples the sample count")
{
    const MixtureModel m = build_mixture(0.3, 1.0);
    const double base = required_samples(m.p0, m.p1, m.delta_p, 4.0, 2.3);
    const double quartered = required_samples(m.p0, m.p1, 0.5 * m.delta_p, 4.0, 2.3);
    CHECK(quartered == 4.0 * base); // scaling by powers of two commutes with rounding
}

TEST_CASE("n_star is U-shaped in the rate")
{
    double values[19];
    for (int i = 0; i < 19; ++i)
        values[i] = plan_attack(build_mixture(double(i + 1) / 20.0, 1.0), 65536, 0.01).n_star;
    int min_at = 0;
    for (int i = 1; i < 19; ++i)
        if (values[i] < values[min_at])
            min_at = i;
    for (int i = 0; i < min_at; ++i)
        CHECK(values[i] > values[i + 1]);
    for (int i = min_at; i < 18; ++i)
        CHECK(values[i] < values[i + 1]);
}

TEST_CASE("plan_attack rejects unusable inputs")
{
    const MixtureModel m = build_mixture(0.3, 1.0);
    CHECK_THROWS_AS(plan_attack(m, 1, 0.01), std::invalid_argument);
    CHECK_THROWS_AS(plan_attack(m, 65536, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(plan_attack(m, 65536, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(plan_attack(build_mixture(1.0, 1.0), 65536, 0.01), InfeasiblePlanError);
}
