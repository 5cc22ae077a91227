// Acceptance checks A1-A9. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails.
//
//   relaycap_acceptance <path to relaycap cli> <data dir>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>
#include <unistd.h>

#include "dm_fixtures.hpp"
#include "oracles.hpp"
#include "relaycap/dm/bounds.hpp"
#include "relaycap/dm/information.hpp"
#include "relaycap/dm/spec_json.hpp"
#include "relaycap/gaussian_bounds.hpp"
#include "relaycap/sweep.hpp"

namespace fs = std::filesystem;
using namespace relaycap;

namespace {

struct Verdict {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, auto... args)
{
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

double slack(const BoundResult& a, const BoundResult& b)
{
    return 2.0 * std::max(a.grid_tolerance, b.grid_tolerance);
}

fs::path g_cli;
fs::path g_data;
fs::path g_work;

int run_cli(const std::string& args)
{
    const std::string cmd = "\"" + g_cli.string() + "\" " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& p)
{
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// ---- Gaussian ----

Verdict a1_no_state()
{
    std::mt19937_64 rng(101);
    Verdict v;
    double worst_gap = 0.0, worst_oracle = 0.0;
    for (int i = 0; i < 20; ++i) {
        auto ch = oracle::random_channel(rng, true);
        ch.q = 0.0;
        const double lo = lower_bound(ch).rate;
        const double up = upper_bound(ch).rate;
        const double df = oracle::state_free_df(ch);
        worst_gap = std::max(worst_gap, std::abs(lo - up));
        worst_oracle = std::max({worst_oracle, std::abs(lo - df), std::abs(up - df)});
    }
    v.pass = worst_gap <= 1e-3 && worst_oracle <= 1e-3;
    v.detail = fmt("20 channels, max |lower-upper| %.3g, max distance to relay capacity %.3g", worst_gap,
                   worst_oracle);
    return v;
}

Verdict a2_strong_state()
{
    const ChannelParams ch{10.0, 10.0, 1e9, 1.0, 10.0, true};
    const double lo = lower_bound(ch).rate;
    const double up = upper_bound(ch).rate;
    Verdict v;
    v.pass = std::abs(lo - 0.5) <= 1e-3 && std::abs(up - 0.5) <= 1e-3;
    v.detail = fmt("lower %.9f, upper %.9f, expected 0.5", lo, up);
    return v;
}

Verdict a3_silent_relay()
{
    std::mt19937_64 rng(103);
    std::uniform_real_distribution<double> db(-10.0, 20.0);
    std::uniform_real_distribution<double> frac(0.05, 1.0);
    auto draw = [&] { return std::pow(10.0, db(rng) / 10.0); };
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        ChannelParams ch{draw(), 0.0, draw(), 0.0, draw(), true};
        ch.n2 = frac(rng) * ch.n3;  // a degraded relay hears at least as well
        const double expect = oracle::hl(ch.p1 / (ch.q + ch.n3));
        worst = std::max(worst, std::abs(lower_bound(ch).rate - expect));
    }
    Verdict v;
    v.pass = worst <= 1e-6;
    v.detail = fmt("10 triples, max |lower - hl(P1/(Q+N3))| %.3g", worst);
    return v;
}

Verdict a4_threshold()
{
    ChannelParams ch{10.0, 10.0, 10.0, 10.0, 10.0, true};
    const auto t = capacity_condition_threshold(ch);
    Verdict v;
    v.pass = std::abs(t.threshold - 10.0) <= 1e-6;
    v.detail = fmt("threshold %.12g", t.threshold);
    for (double n2 : {10.0, 15.0, 20.0}) {
        ch.n2 = n2;
        const double expect = oracle::hl(ch.p1 / n2);
        const double lo = lower_bound(ch).rate;
        const double up = upper_bound(ch).rate;
        v.pass = v.pass && std::abs(lo - expect) <= 2e-3 && std::abs(up - expect) <= 2e-3;
        v.detail += fmt("; N2=%g lower %.6f upper %.6f", n2, lo, up);
    }
    return v;
}

Verdict a5_ordering()
{
    std::mt19937_64 rng(105);
    int violations = 0;
    double closest = INFINITY;
    for (int i = 0; i < 100; ++i) {
        const auto ch = oracle::random_channel(rng, i % 2 == 0);
        const auto tl = trivial_lower_bound(ch);
        const auto lo = lower_bound(ch);
        const auto up = upper_bound(ch);
        const auto tu = trivial_upper_bound(ch);
        for (auto [a, b] : {std::pair{&tl, &lo}, std::pair{&lo, &up}, std::pair{&up, &tu}}) {
            const double margin = b->rate - a->rate + slack(*a, *b);
            closest = std::min(closest, margin);
            if (margin < 0.0) {
                ++violations;
                std::cerr << "A5 violation at " << ch << '\n';
            }
        }
    }
    Verdict v;
    v.pass = violations == 0;
    v.detail = fmt("100 channels, %d violations, smallest margin %.3g", violations, closest);
    return v;
}

Verdict a6_reparameterization()
{
    std::mt19937_64 rng(106);
    int failures = 0;
    double worst_ratio = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto ch = oracle::random_channel(rng, true);
        const auto a = upper_bound(ch);
        const auto b = upper_bound_degraded_equiv(ch);
        const double diff = std::abs(a.rate - b.rate);
        worst_ratio = std::max(worst_ratio, diff / slack(a, b));
        if (diff > slack(a, b)) {
            ++failures;
            std::cerr << "A6 mismatch at " << ch << ": " << a.rate << " vs " << b.rate << '\n';
        }
    }
    Verdict v;
    v.pass = failures == 0;
    v.detail = fmt("20 channels, %d outside 2x tolerance, worst diff/slack %.3g", failures, worst_ratio);
    return v;
}

// ---- CLI ----

const std::string kTenDbSweep = "sweep --p1db 10 --p2db 10 --qdb 10 --n3db 10 --degraded --format csv";

Verdict a7_sweep_shape()
{
    const auto out = g_work / "a7.csv";
    Verdict v;
    if (const int code = run_cli(kTenDbSweep + " --out \"" + out.string() + "\""); code != 0)
        return {false, fmt("sweep exited with %d", code)};

    std::ifstream in(out);
    const auto table = read_csv(in);
    const auto snr = table.column("snr_dB");
    const auto lower = table.column("lower");
    const auto upper = table.column("upper");
    const auto tlower = table.column("trivial_lower");

    const ChannelParams base{10.0, 10.0, 10.0, 10.0, 10.0, true};
    const double edge = *threshold_snr_db(base);

    int low_rows = 0;
    double low_gap = 0.0;
    for (const auto& row : table.rows)
        if (row[snr] <= edge) {
            ++low_rows;
            low_gap = std::max(low_gap, row[upper] - row[lower]);
        }
    const auto& top = table.rows.back();
    const double gain = top[lower] - top[tlower];

    v.pass = low_rows > 0 && low_gap < 2e-2 && gain >= 0.1;
    v.detail = fmt("%d rows at or below %.3g dB, max gap %.3g; at %.3g dB lower - trivial_lower = %.4f",
                   low_rows, edge, low_gap, top[snr], gain);
    return v;
}

Verdict a9_determinism()
{
    const auto a = g_work / "a9-first.csv";
    const auto b = g_work / "a9-second.csv";
    const std::string flags = kTenDbSweep + " --seed 1234 --out ";
    const int ca = run_cli(flags + "\"" + a.string() + "\"");
    const int cb = run_cli(flags + "\"" + b.string() + "\"");
    if (ca != 0 || cb != 0)
        return {false, fmt("sweep exited with %d and %d", ca, cb)};
    const auto sa = slurp(a);
    const auto sb = slurp(b);
    Verdict v;
    v.pass = !sa.empty() && sa == sb;
    v.detail = fmt("%zu and %zu bytes, %s", sa.size(), sb.size(), sa == sb ? "identical" : "different");
    return v;
}

// ---- discrete ----

Verdict a8_discrete()
{
    using namespace relaycap::dm;
    std::mt19937_64 rng(108);
    double mi_err = 0.0, chain_err = 0.0;
    for (int i = 0; i < 50; ++i) {
        const auto j = fixture::random_joint(rng, {2, 3, 2, 2});
        mi_err = std::max(mi_err, std::abs(mutual_information(j, {0}, {1, 2}, {3}) -
                                           fixture::mi_oracle(j, {0}, {1, 2}, {3})));
    }
    for (int i = 0; i < 50; ++i) {
        const auto j = fixture::random_joint(rng, {3, 2, 2, 2});
        const double whole = mutual_information(j, {0}, {1, 2}, {3});
        const double parts = mutual_information(j, {0}, {1}, {3}) + mutual_information(j, {0}, {2}, {1, 3});
        chain_err = std::max(chain_err, std::abs(whole - parts));
    }

    const auto spec = load_channel_spec(g_data / "stateless_or.json");
    const double grid_oracle = fixture::df_simplex_oracle(spec, 0.1);
    const auto found = dm_search(spec, {.mode = SearchMode::lower});
    const double search_err = std::abs(found.bound.rate - grid_oracle);

    Verdict v;
    v.pass = mi_err <= 1e-12 && chain_err <= 1e-10 && search_err <= 1e-2;
    v.detail = fmt("MI vs entropies %.3g, chain rule %.3g, search %.6f vs simplex grid %.6f", mi_err, chain_err,
                   found.bound.rate, grid_oracle);
    return v;
}

} // namespace

int main(int argc, char** argv)
{
    if (argc != 3) {
        std::cerr << "usage: relaycap_acceptance <relaycap cli> <data dir>\n";
        return 2;
    }
    g_cli = argv[1];
    g_data = argv[2];
    g_work = fs::temp_directory_path() / ("relaycap-acceptance-" + std::to_string(::getpid()));
    fs::create_directories(g_work);

    const std::vector<std::pair<const char*, std::function<Verdict()>>> criteria{
        {"A1", a1_no_state},    {"A2", a2_strong_state},     {"A3", a3_silent_relay},
        {"A4", a4_threshold},   {"A5", a5_ordering},         {"A6", a6_reparameterization},
        {"A7", a7_sweep_shape}, {"A8", a8_discrete},         {"A9", a9_determinism},
    };

    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Verdict v;
        const auto start = std::chrono::steady_clock::now();
        try {
            v = check();
        } catch (const std::exception& e) {
            v = {false, std::string("threw: ") + e.what()};
        }
        failed += v.pass ? 0 : 1;
        const std::chrono::duration<double> took = std::chrono::steady_clock::now() - start;
        std::cout << name << ' ' << (v.pass ? "PASS" : "FAIL") << "  " << v.detail
                  << fmt("  (%.1f s)", took.count()) << std::endl;
    }

    std::error_code ec;
    fs::remove_all(g_work, ec);
    return failed == 0 ? 0 : 1;
}
