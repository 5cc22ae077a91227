#include <doctest.h>

#include <cmath>
#include <random>

#include "oracles.hpp"
#include "relaycap/errors.hpp"
#include "relaycap/gaussian_bounds.hpp"

using namespace relaycap;

namespace {

ChannelParams ch4(double n2 = 10.0) { return {10.0, 10.0, 10.0, n2, 10.0, false}; }

} // namespace

TEST_CASE("channel validation names the field")
{
    ChannelParams ch = ch4();
    ch.n2 = 0.0;
    CHECK_THROWS_WITH_AS(ch.validate(), doctest::Contains("n2"), DomainError);
    ch = ch4();
    ch.q = -1.0;
    CHECK_THROWS_WITH_AS(ch.validate(), doctest::Contains("q"), DomainError);
    ch = ch4();
    ch.p1 = std::nan("");
    CHECK_THROWS_AS(ch.validate(), DomainError);
    ch = ch4();
    ch.p1 = 0.0;
    CHECK_NOTHROW(ch.validate());
}

TEST_CASE("source-to-relay rate")
{
    const ChannelParams ch{10.0, 0.0, 0.0, 1.0, 1.0, false};
    CHECK(lower_term1(ch, 1.0) == 0.0);
    CHECK(lower_term1(ch, 0.0) == doctest::Approx(1.7297158093186486).epsilon(1e-14));
    CHECK(lower_term1({0.0, 1.0, 1.0, 5.0, 1.0, false}, 0.3) == 0.0);
    CHECK_THROWS_AS(lower_term1(ch, 1.5), DomainError);
    CHECK_THROWS_AS(lower_term1(ch, -0.1), DomainError);
}

TEST_CASE("destination rate of the lower bound")
{
    const auto ch = ch4();
    CHECK(lower_term2(ch, {0.0, 1.0, 0.0}) == doctest::Approx(0.7075187496394219).epsilon(1e-14));

    for (double r12 : {0.0, 0.4, 1.0})
        for (double r2s : {-1.0, -0.3, 0.0}) {
            const double expect = oracle::hl((ch.p1 + ch.p2 + 2.0 * r12 * std::sqrt(ch.p1 * ch.p2)) / (ch.q + ch.n3));
            CHECK(lower_term2(ch, {r12, 0.0, r2s}) == doctest::Approx(expect).epsilon(1e-14));
        }

    const ChannelParams silent{7.0, 0.0, 3.0, 2.0, 5.0, false};
    CHECK(lower_term2(silent, {0.6, 0.4, -0.5}) == doctest::Approx(oracle::hl(7.0 / 8.0)).epsilon(1e-14));

    CHECK_THROWS_AS(lower_term2(ch, {0.0, 1.1, 0.0}), DomainError);
    CHECK_THROWS_AS(lower_term2(ch, {0.0, 0.5, 0.1}), DomainError);
}

TEST_CASE("lower parameters imply covariances")
{
    const ChannelParams ch{4.0, 9.0, 16.0, 1.0, 1.0, false};
    const LowerParams lp{0.5, 0.75, -0.5};
    CHECK(lp.sigma12(ch) == doctest::Approx(0.5 * std::sqrt(0.25 * 36.0)));
    CHECK(lp.sigma2s(ch) == doctest::Approx(-0.5 * std::sqrt(0.75 * 144.0)));
}

TEST_CASE("dirty-paper inflation factor")
{
    const auto ch = ch4();
    CHECK(alpha_opt(ch, 1.0, 0.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(alpha_opt(ch, 0.0, -0.7) == 0.0);
    // theta=1, P2=N3=Q=10, rho=-0.5: (7.5/17.5)(1 - 0.5) + 0.5 = 5/7 exactly.
    CHECK(alpha_opt(ch, 1.0, -0.5) == doctest::Approx(5.0 / 7.0).epsilon(1e-15));

    ChannelParams no_state = ch;
    no_state.q = 0.0;
    CHECK_THROWS_AS(alpha_opt(no_state, 0.5, 0.0), DomainError);
}

TEST_CASE("general upper bound first term")
{
    const ChannelParams ch{10.0, 10.0, 10.0, 1.0, 10.0, false};
    CHECK(upper_term1_general(ch, {0.0, 0.0}) == doctest::Approx(1.7924812503605781).epsilon(1e-14));
    CHECK(upper_term1_general(ch, {1.0, 0.0}) == 0.0);
    CHECK(upper_term1_general(ch, {0.0, -1.0}) == doctest::Approx(oracle::hl(10.0 * 1.1)).epsilon(1e-14));
    CHECK_THROWS_AS(upper_term1_general(ch, {0.8, -0.8}), DomainError);
}

TEST_CASE("degraded upper bound first term")
{
    const ChannelParams ch{10.0, 10.0, 10.0, 2.0, 10.0, true};
    CHECK(upper_term1_degraded(ch, {0.0, 0.0}) == doctest::Approx(oracle::hl(5.0)).epsilon(1e-14));
    CHECK(upper_term1_degraded(ch, {0.6, -0.8}) == doctest::Approx(0.0).epsilon(1e-14));
    CHECK(upper_term1_degraded(ch, {0.0, -1.0}) == doctest::Approx(oracle::hl(5.0)).epsilon(1e-14));
}

TEST_CASE("upper bound second term")
{
    const auto ch = ch4();
    CHECK(upper_term2(ch, {0.0, 0.0}) == doctest::Approx(0.7075187496394219).epsilon(1e-14));

    const ChannelParams silent{7.0, 0.0, 3.0, 2.0, 5.0, false};
    CHECK(upper_term2(silent, {0.3, -0.2}) == doctest::Approx(oracle::hl(7.0 / 8.0)).epsilon(1e-14));

    const double a = 0.6, b = -0.8;
    const double coh = std::sqrt(10.0) + a * std::sqrt(10.0);
    const double st = std::sqrt(10.0) + b * std::sqrt(10.0);
    CHECK(upper_term2(ch, {a, b}) == doctest::Approx(oracle::hl(coh * coh / (st * st + 10.0))).epsilon(1e-14));
}

TEST_CASE("evaluators match plain transcriptions on random inputs")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const auto ch = oracle::random_channel(rng, i % 2 == 0);
        const double r12 = u(rng), t = u(rng), r2s = -u(rng);
        CHECK(lower_term1(ch, r12) == doctest::Approx(oracle::lower_term1(ch, r12)).epsilon(1e-13));
        CHECK(lower_term2(ch, {r12, t, r2s}) == doctest::Approx(oracle::lower_term2(ch, r12, t, r2s)).epsilon(1e-13));

        const double a = u(rng), b = -u(rng) * std::sqrt(1.0 - a * a);
        CHECK(upper_term1_general(ch, {a, b}) ==
              doctest::Approx(oracle::upper_term1_general(ch, a, b)).epsilon(1e-13));
        CHECK(upper_term2(ch, {a, b}) == doctest::Approx(oracle::upper_term2(ch, a, b)).epsilon(1e-13));
        if (ch.degraded)
            CHECK(upper_term1_degraded(ch, {a, b}) ==
                  doctest::Approx(oracle::upper_term1_degraded(ch, a, b)).epsilon(1e-13));
        CHECK(equiv_inner_term(ch, a, r2s) == doctest::Approx(oracle::equiv_inner(ch, a, r2s)).epsilon(1e-13));
    }
}

TEST_CASE("evaluators are pure")
{
    std::mt19937_64 rng(3);
    for (int i = 0; i < 50; ++i) {
        const auto ch = oracle::random_channel(rng, true);
        const LowerParams lp{0.3, 0.6, -0.4};
        const double first = lower_term2(ch, lp);
        CHECK(lower_term2(ch, lp) == first);
        const UpperParams up{0.2, -0.5};
        CHECK(upper_term2(ch, up) == upper_term2(ch, up));
        CHECK(upper_term1_degraded(ch, up) == upper_term1_degraded(ch, up));
    }
}

TEST_CASE("upper parameter feasibility is the unit disc")
{
    CHECK(UpperParams{0.6, -0.8}.feasible());
    CHECK(UpperParams{0.0, -1.0}.feasible());
    CHECK_FALSE(UpperParams{0.8, -0.8}.feasible());
    CHECK_THROWS_AS((UpperParams{0.8, -0.8}.validate()), DomainError);
    CHECK_THROWS_AS((UpperParams{0.1, 0.2}.validate()), DomainError);
}

TEST_CASE("decibel conversion")
{
    CHECK(db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(db_to_linear(0.0) == 1.0);
    CHECK(linear_to_db(100.0) == doctest::Approx(20.0).epsilon(1e-15));
}
