#include <doctest.h>

#include <array>
#include <cmath>
#include <limits>

#include "relaycap/errors.hpp"
#include "relaycap/grid_search.hpp"

using namespace relaycap;
using namespace relaycap::opt;

TEST_CASE("grid spec validation")
{
    CHECK_NOTHROW(GridSpec{}.validate());
    CHECK_THROWS_AS((GridSpec{2, 3, 0.1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{11, -1, 0.1}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{11, 3, 1.0}.validate()), std::invalid_argument);
    CHECK_THROWS_AS((GridSpec{11, 3, 0.0}.validate()), std::invalid_argument);
}

TEST_CASE("quadratic peak")
{
    const std::array<Interval, 1> box{{{0.0, 1.0}}};
    const GridSpec grid;
    const auto r = maximize([](std::span<const double> x) { return -(x[0] - 0.3) * (x[0] - 0.3); }, box, {}, grid);
    const double final_pitch = 1.0 * std::pow(grid.refine_shrink, grid.refine_rounds) / (grid.coarse_points - 1);
    CHECK(std::abs(r.argmax[0] - 0.3) <= final_pitch);
    CHECK(r.value == doctest::Approx(0.0).epsilon(1e-9));
    CHECK(r.diagnostics.final_pitch[0] <= final_pitch * (1 + 1e-12));
    CHECK(r.diagnostics.evaluations == 4u * 101u);
}

TEST_CASE("linear objective on the quarter disc")
{
    const std::array<Interval, 2> box{{{0.0, 1.0}, {0.0, 1.0}}};
    const auto r = maximize([](std::span<const double> x) { return x[0] + x[1]; }, box,
                            [](std::span<const double> x) { return x[0] * x[0] + x[1] * x[1] <= 1.0; }, {});
    // The reported tolerance has to cover the gap to the arc.
    CHECK(std::abs(r.value - std::sqrt(2.0)) <= r.diagnostics.tolerance);
    CHECK(r.diagnostics.tolerance <= 2e-5);
    CHECK(r.argmax[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-3));
    CHECK(r.argmax[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-3));
    CHECK(r.argmax[0] * r.argmax[0] + r.argmax[1] * r.argmax[1] <= 1.0);
}

TEST_CASE("ties go to the lexicographically smallest point")
{
    const std::array<Interval, 2> box{{{-1.0, 2.0}, {3.0, 4.0}}};
    const auto r = maximize([](std::span<const double>) { return 5.0; }, box, {}, {});
    CHECK(r.value == 5.0);
    CHECK(r.argmax[0] == -1.0);
    CHECK(r.argmax[1] == 3.0);
}

TEST_CASE("endpoints are hit exactly")
{
    const std::array<Interval, 1> box{{{0.1, 0.7}}};
    const auto r = maximize([](std::span<const double> x) { return x[0]; }, box, {}, {});
    CHECK(r.argmax[0] == 0.7);
    CHECK(r.value == 0.7);
}

TEST_CASE("degenerate box axis")
{
    const std::array<Interval, 2> box{{{0.5, 0.5}, {0.0, 1.0}}};
    const auto r = maximize([](std::span<const double> x) { return x[0] * x[1]; }, box, {}, {});
    CHECK(r.argmax[0] == 0.5);
    CHECK(r.value == 0.5);
}

TEST_CASE("search errors")
{
    const std::array<Interval, 1> box{{{0.0, 1.0}}};
    CHECK_THROWS_AS(maximize([](std::span<const double>) { return 1.0; }, box,
                             [](std::span<const double>) { return false; }, {}),
                    InfeasibleError);
    CHECK_THROWS_AS(maximize([](std::span<const double> x) { return x[0] > 0.5 ? std::nan("") : 0.0; }, box, {}, {}),
                    NonFiniteError);
    CHECK_THROWS_AS(maximize([](std::span<const double>) { return std::numeric_limits<double>::infinity(); },
                             box, {}, {}),
                    NonFiniteError);
    const std::array<Interval, 1> bad{{{1.0, 0.0}}};
    CHECK_THROWS_AS(maximize([](std::span<const double>) { return 1.0; }, bad, {}, {}), std::invalid_argument);
    CHECK_THROWS_AS(maximize([](std::span<const double>) { return 1.0; }, std::span<const Interval>{}, {}, {}),
                    std::invalid_argument);
}

TEST_CASE("value is the objective at the argmax")
{
    const std::array<Interval, 2> box{{{-2.0, 2.0}, {-1.0, 3.0}}};
    auto f = [](std::span<const double> x) { return std::sin(3.0 * x[0]) * std::cos(x[1]) - 0.1 * x[1] * x[1]; };
    const auto r = maximize(f, box, {}, {});
    CHECK(r.value == f(r.argmax));
}

TEST_CASE("a finer coarse grid never loses more than the tolerance")
{
    const std::array<Interval, 2> box{{{-2.0, 2.0}, {-1.0, 3.0}}};
    auto f = [](std::span<const double> x) { return std::sin(3.0 * x[0]) * std::cos(x[1]) - 0.1 * x[1] * x[1]; };
    for (int n : {11, 21, 51}) {
        const auto coarse = maximize(f, box, {}, {n, 3, 0.1});
        const auto fine = maximize(f, box, {}, {2 * n, 3, 0.1});
        CHECK(fine.value >= coarse.value - coarse.diagnostics.tolerance);
    }
}

TEST_CASE("maximin of 1-x against x*y")
{
    const std::array<Interval, 1> outer{{{0.0, 1.0}}};
    const std::array<Interval, 1> inner{{{0.0, 1.0}}};
    const InnerTerm t2 = [](std::span<const double> o, std::span<const double> i) { return o[0] * i[0]; };
    const auto r = maximin(outer, inner, [](std::span<const double> o) { return 1.0 - o[0]; }, t2, {}, {});
    CHECK(r.value == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.outer_argmax[0] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(r.inner_argmax[0] == 1.0);
    CHECK(r.tolerance >= kToleranceFloor);
}

TEST_CASE("maximin skips outer points with an infeasible inner box")
{
    const std::array<Interval, 1> outer{{{0.0, 1.0}}};
    const std::array<Interval, 1> inner{{{0.0, 1.0}}};
    const InnerTerm t2 = [](std::span<const double> o, std::span<const double>) { return 10.0 * o[0]; };
    // The inner box is empty for outer > 0.25; otherwise term1 = 1 would let x = 1 win.
    auto feasible = [](std::span<const double> o, std::span<const double>) { return o[0] <= 0.25; };
    const auto r = maximin(outer, inner, [](std::span<const double>) { return 1.0; }, t2, feasible, {});
    CHECK(r.outer_argmax[0] <= 0.25);
    CHECK(r.value == doctest::Approx(1.0));

    auto never = [](std::span<const double>, std::span<const double>) { return false; };
    CHECK_THROWS_AS(maximin(outer, inner, [](std::span<const double>) { return 1.0; }, t2, never, {}),
                    InfeasibleError);
}

TEST_CASE("maximin of zero terms")
{
    const std::array<Interval, 1> outer{{{0.0, 1.0}}};
    const std::array<Interval, 2> inner{{{0.0, 1.0}, {-1.0, 0.0}}};
    const InnerTerm t2 = [](std::span<const double>, std::span<const double>) { return 0.0; };
    const auto r = maximin(outer, inner, [](std::span<const double>) { return 0.0; }, t2, {}, {});
    CHECK(r.value == 0.0);
    CHECK(r.outer_argmax[0] == 0.0);
    CHECK(r.inner_argmax == std::vector<double>{0.0, -1.0});
}
