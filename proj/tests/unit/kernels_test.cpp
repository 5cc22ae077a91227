#include <doctest.h>

#include <cmath>
#include <cstring>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "relaycap/kernels.hpp"

using namespace relaycap;
using namespace relaycap::simd;

namespace {

std::vector<const KernelTable*> vector_tables()
{
    std::vector<const KernelTable*> out;
    for (auto b : {Backend::avx2, Backend::neon})
        if (const auto* t = table_for(b))
            out.push_back(t);
    return out;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b)
{
    return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

struct Inputs {
    std::vector<double> unit, neg, disc_a, disc_b;
};

// Lengths 0..9 cover empty, tail-only and full-plus-tail runs; 257 a long one.
Inputs draw(std::mt19937_64& rng, std::size_t n)
{
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Inputs in;
    for (std::size_t i = 0; i < n; ++i) {
        in.unit.push_back(u(rng));
        in.neg.push_back(-u(rng));
        const double a = u(rng);
        in.disc_a.push_back(a);
        in.disc_b.push_back(-u(rng) * std::sqrt(1.0 - a * a));
    }
    // Box corners, where the 0/0 conventions live.
    if (n >= 4) {
        in.unit[0] = 0.0, in.unit[1] = 1.0;
        in.neg[0] = -1.0, in.neg[1] = 0.0;
        in.disc_a[2] = 0.0, in.disc_b[2] = -1.0;
        in.disc_a[3] = 1.0, in.disc_b[3] = 0.0;
    }
    return in;
}

} // namespace

TEST_CASE("scalar backend is always available")
{
    CHECK(table_for(Backend::scalar) == &detail::scalar_table);
    CHECK(to_string(active().backend).size() > 0);
}

TEST_CASE("vector kernels are bit-identical to the scalar reference")
{
    const auto tables = vector_tables();
    if (tables.empty())
        MESSAGE("no vector backend on this machine; only the scalar path is exercised");
    const auto& ref = detail::scalar_table;
    std::mt19937_64 rng(2024);
    for (const auto* t : tables) {
        CAPTURE(to_string(t->backend));
        for (std::size_t n : {0, 1, 2, 3, 4, 5, 6, 7, 8, 9, 257}) {
            CAPTURE(n);
            for (int rep = 0; rep < 20; ++rep) {
                auto ch = oracle::random_channel(rng, rep % 2 == 0);
                if (rep == 3)
                    ch.q = 0.0;
                if (rep == 5)
                    ch.p2 = 0.0;
                const auto in = draw(rng, n);
                std::vector<double> a(n), b(n);

                ref.lower_inner(ch, 0.37, in.unit, in.neg, a);
                t->lower_inner(ch, 0.37, in.unit, in.neg, b);
                CHECK(same_bits(a, b));

                ref.upper_pair(ch, in.disc_a, in.disc_b, a);
                t->upper_pair(ch, in.disc_a, in.disc_b, b);
                CHECK(same_bits(a, b));

                ref.equiv_inner(ch, 0.61, in.neg, a);
                t->equiv_inner(ch, 0.61, in.neg, b);
                CHECK(same_bits(a, b));

                const DfShape shape{ch.p1, ch.p2, 1.0 / ch.n2, ch.n3};
                ref.df_min(shape, in.unit, a);
                t->df_min(shape, in.unit, b);
                CHECK(same_bits(a, b));

                ref.threshold_ratio(ch, in.neg, a);
                t->threshold_ratio(ch, in.neg, b);
                CHECK(same_bits(a, b));
            }
        }
    }
}

TEST_CASE("kernel scores are the exponentiated rate expressions")
{
    std::mt19937_64 rng(99);
    for (const KernelTable* t : {&detail::scalar_table, table_for(Backend::avx2)}) {
        if (!t)
            continue;
        for (int rep = 0; rep < 30; ++rep) {
            const auto ch = oracle::random_channel(rng, rep % 2 == 0);
            const auto in = draw(rng, 13);
            std::vector<double> s(13);
            auto rate = [](double score) { return 0.5 * std::log2(score); };

            t->lower_inner(ch, 0.25, in.unit, in.neg, s);
            for (std::size_t i = 0; i < s.size(); ++i)
                CHECK(rate(s[i]) == doctest::Approx(oracle::lower_term2(ch, 0.25, in.unit[i], in.neg[i])).epsilon(1e-12));

            t->upper_pair(ch, in.disc_a, in.disc_b, s);
            for (std::size_t i = 0; i < s.size(); ++i) {
                const double a = in.disc_a[i], b = in.disc_b[i];
                const double t1 = ch.degraded ? oracle::upper_term1_degraded(ch, a, b)
                                              : oracle::upper_term1_general(ch, a, b);
                CHECK(rate(s[i]) == doctest::Approx(std::min(t1, oracle::upper_term2(ch, a, b))).epsilon(1e-12));
            }

            t->equiv_inner(ch, 0.8, in.neg, s);
            for (std::size_t i = 0; i < s.size(); ++i)
                CHECK(rate(s[i]) == doctest::Approx(oracle::equiv_inner(ch, 0.8, in.neg[i])).epsilon(1e-12));
        }
    }
}
