#include "relaycap/cli.hpp"

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "relaycap/dm/bounds.hpp"
#include "relaycap/dm/spec_json.hpp"
#include "relaycap/errors.hpp"
#include "relaycap/gaussian_bounds.hpp"
#include "relaycap/sweep.hpp"

namespace relaycap {

namespace {

using json = nlohmann::ordered_json;

constexpr int kInputError = 2;

struct InputError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// One channel constant, given linear (--p1) or in dB (--p1db).
struct ChannelFlag {
    const char* name;
    double linear;
    std::optional<double> lin_flag;
    std::optional<double> db_flag;

    void add(CLI::App& app, const char* help)
    {
        auto* a = app.add_option(std::string("--") + name, lin_flag, std::string(help) + " (linear)");
        auto* b = app.add_option(std::string("--") + name + "db", db_flag, std::string(help) + " (dB)");
        a->excludes(b);
    }

    [[nodiscard]] double value() const
    {
        if (db_flag)
            return db_to_linear(*db_flag);
        return lin_flag.value_or(linear);
    }
};

// Every power and noise defaults to 10 (10 dB).
struct ChannelFlags {
    ChannelFlag p1{"p1", 10.0, {}, {}};
    ChannelFlag p2{"p2", 10.0, {}, {}};
    ChannelFlag q{"q", 10.0, {}, {}};
    ChannelFlag n2{"n2", 10.0, {}, {}};
    ChannelFlag n3{"n3", 10.0, {}, {}};
    bool degraded = false;

    void add(CLI::App& app, bool with_n2)
    {
        p1.add(app, "source power P1");
        p2.add(app, "relay power P2");
        q.add(app, "state variance Q");
        if (with_n2)
            n2.add(app, "relay noise variance N2");
        n3.add(app, "destination noise variance N3");
        app.add_flag("--degraded", degraded, "physically degraded model: Y3 = X2 + Y2 + Z3'");
    }

    [[nodiscard]] ChannelParams params() const
    {
        return {p1.value(), p2.value(), q.value(), n2.value(), n3.value(), degraded};
    }
};

struct GridFlags {
    int points = opt::GridSpec{}.coarse_points;
    int refine = opt::GridSpec{}.refine_rounds;

    void add(CLI::App& app)
    {
        app.add_option("--grid-points", points, "coarse grid points per axis")->capture_default_str();
        app.add_option("--refine", refine, "refinement rounds")->capture_default_str();
    }

    [[nodiscard]] opt::GridSpec spec() const
    {
        opt::GridSpec g;
        g.coarse_points = points;
        g.refine_rounds = refine;
        g.validate();
        return g;
    }
};

json params_json(const BoundResult& r)
{
    json j = json::object();
    for (std::size_t i = 0; i < r.labels.size(); ++i)
        j[r.labels[i]] = r.argmax[i];
    return j;
}

std::string params_text(const BoundResult& r)
{
    std::string s;
    for (std::size_t i = 0; i < r.labels.size(); ++i)
        s += (i ? " " : "") + r.labels[i] + "=" + format_number(r.argmax[i]);
    return s;
}

// ---- bounds ----

int cmd_bounds(const ChannelParams& ch, const opt::GridSpec& grid, bool as_json, std::ostream& out)
{
    ch.validate();
    std::vector<std::pair<BoundKind, BoundResult>> results;
    for (auto b : kAllBounds) {
        if (b == BoundKind::upper_equiv && !ch.degraded)
            continue;
        switch (b) {
        case BoundKind::lower: results.emplace_back(b, lower_bound(ch, grid)); break;
        case BoundKind::upper: results.emplace_back(b, upper_bound(ch, grid)); break;
        case BoundKind::upper_equiv: results.emplace_back(b, upper_bound_degraded_equiv(ch, grid)); break;
        case BoundKind::trivial_lower: results.emplace_back(b, trivial_lower_bound(ch, grid)); break;
        case BoundKind::trivial_upper: results.emplace_back(b, trivial_upper_bound(ch, grid)); break;
        }
    }

    std::optional<ThresholdResult> threshold;
    std::optional<double> known;
    std::optional<ExtremeCapacity> extreme;
    if (ch.degraded) {
        threshold = capacity_condition_threshold(ch, grid);
        if (threshold->capacity_known(ch.n2))
            known = half_log2_1p(ch.p1 / ch.n2);
        extreme = extreme_cases(ch, {.grid = grid});
    }

    if (as_json) {
        json j;
        j["channel"] = {{"p1", ch.p1}, {"p2", ch.p2}, {"q", ch.q}, {"n2", ch.n2}, {"n3", ch.n3},
                        {"degraded", ch.degraded}};
        for (const auto& [b, r] : results)
            j["bounds"][std::string(column_name(b))] = {{"rate", r.rate},
                                                        {"argmax", params_json(r)},
                                                        {"grid_tolerance", r.grid_tolerance},
                                                        {"evaluations", r.evaluations}};
        j["threshold"] = threshold ? json{{"n2", threshold->threshold}, {"zeta", threshold->zeta}} : json(nullptr);
        j["capacity_known"] = known ? json(*known) : json(nullptr);
        j["extreme_case"] = extreme ? json{{"kind", std::string(to_string(extreme->kind))},
                                           {"capacity", extreme->capacity}}
                                    : json(nullptr);
        out << j.dump(2) << '\n';
        return 0;
    }

    out << "channel: p1=" << format_number(ch.p1) << " p2=" << format_number(ch.p2) << " q=" << format_number(ch.q)
        << " n2=" << format_number(ch.n2) << " n3=" << format_number(ch.n3) << " (linear)"
        << (ch.degraded ? ", degraded" : ", general") << '\n';
    for (const auto& [b, r] : results) {
        std::string name(column_name(b));
        name.resize(14, ' ');
        out << name << format_number(r.rate) << " bits  [" << params_text(r)
            << "]  tol=" << format_number(r.grid_tolerance) << '\n';
    }
    if (threshold)
        out << "threshold: N2 >= " << format_number(threshold->threshold) << " (zeta=" << format_number(threshold->zeta)
            << ")\n";
    if (known)
        out << "capacity known: " << format_number(*known) << " bits\n";
    else if (ch.degraded)
        out << "capacity known: no (N2 below threshold)\n";
    if (extreme)
        out << "extreme case: " << to_string(extreme->kind) << ", capacity " << format_number(extreme->capacity)
            << " bits\n";
    return 0;
}

// ---- sweep ----

void write_file(const std::filesystem::path& path, const std::string& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f)
        throw InputError("cannot write " + path.string());
    f << content;
    if (!f.flush())
        throw InputError("failed writing " + path.string());
}

int cmd_sweep(SweepSpec spec, const opt::GridSpec& grid, const std::string& out_path, unsigned threads,
              std::ostream& out)
{
    spec.validate();
    if (spec.emit == EmitFormat::both && out_path == "-")
        throw InputError("--format both needs --out");

    const auto bounds = spec.resolved_bounds();
    const auto rows = run_sweep(spec, grid, threads);

    std::ostringstream csv, svg;
    if (spec.emit != EmitFormat::svg)
        write_csv(csv, bounds, rows);
    if (spec.emit != EmitFormat::csv)
        write_svg(svg, bounds, rows, threshold_snr_db(spec.base, grid));

    if (out_path == "-") {
        out << (spec.emit == EmitFormat::csv ? csv.str() : svg.str());
        return 0;
    }
    std::filesystem::path path(out_path);
    switch (spec.emit) {
    case EmitFormat::csv: write_file(path, csv.str()); break;
    case EmitFormat::svg: write_file(path, svg.str()); break;
    case EmitFormat::both:
        write_file(std::filesystem::path(path).replace_extension(".csv"), csv.str());
        write_file(std::filesystem::path(path).replace_extension(".svg"), svg.str());
        break;
    }
    return 0;
}

// ---- dm ----

json factor_json(const dm::CondPmf& m)
{
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const auto row = m.row(r);
        rows.push_back(std::vector<double>(row.begin(), row.end()));
    }
    return rows;
}

json factorization_json(const std::variant<dm::LowerFactorization, dm::UpperFactorization>& best)
{
    if (const auto* f = std::get_if<dm::LowerFactorization>(&best))
        return {{"p_u1", factor_json(f->u1)},
                {"p_x1|u1", factor_json(f->x1)},
                {"p_u2|u1,s", factor_json(f->u2)},
                {"p_x2|u1,u2,s", factor_json(f->x2)}};
    const auto& g = std::get<dm::UpperFactorization>(best);
    return {{g.state_aware_source() ? "p_x1|s" : "p_x1", factor_json(g.x1)}, {"p_x2|x1,s", factor_json(g.x2)}};
}

std::string rows_text(const json& factor)
{
    std::string s;
    for (std::size_t r = 0; r < factor.size(); ++r) {
        s += r ? " | " : "";
        for (std::size_t c = 0; c < factor[r].size(); ++c)
            s += (c ? " " : "") + format_number(factor[r][c].get<double>());
    }
    return s;
}

int cmd_dm(const std::string& path, const std::vector<std::string>& modes, dm::SearchOptions base, bool as_json,
           std::ostream& out)
{
    const auto spec = dm::load_channel_spec(path);
    const bool degraded = dm::is_degraded(spec);

    json j;
    const auto& a = spec.sizes;
    j["sizes"] = {{"s", a.s}, {"x1", a.x1}, {"x2", a.x2}, {"y2", a.y2}, {"y3", a.y3}};
    j["degraded"] = degraded;
    for (const auto& name : modes) {
        auto o = base;
        if (name == "lower")
            o.mode = dm::SearchMode::lower;
        else if (name == "upper")
            o.mode = dm::SearchMode::upper;
        else
            o.mode = dm::SearchMode::trivial;
        const auto r = dm::dm_search(spec, o);
        j["bounds"][name] = {{"rate", r.bound.rate},
                             {"raw", r.raw_value},
                             {"relay_term", r.terms.relay},
                             {"destination_term", r.terms.destination},
                             {"best_restart", r.best_restart},
                             {"evaluations", r.bound.evaluations},
                             {"factorization", factorization_json(r.best)}};
    }

    if (as_json) {
        out << j.dump(2) << '\n';
        return 0;
    }
    out << "spec: " << path << "  |S|=" << a.s << " |X1|=" << a.x1 << " |X2|=" << a.x2 << " |Y2|=" << a.y2
        << " |Y3|=" << a.y3 << '\n';
    out << "degraded: " << (degraded ? "yes" : "no") << '\n';
    out << "search: restarts=" << base.restarts << " seed=" << base.seed << " aux=" << base.aux_u1 << "x"
        << base.aux_u2 << (base.degraded ? ", degraded relay term" : "") << '\n';
    for (const auto& name : modes) {
        const auto& b = j["bounds"][name];
        out << name << ": " << format_number(b["rate"].get<double>()) << " bits"
            << "  (relay " << format_number(b["relay_term"].get<double>()) << ", destination "
            << format_number(b["destination_term"].get<double>()) << ", restart " << b["best_restart"].get<int>()
            << ")\n";
        for (const auto& [factor, rows] : b["factorization"].items())
            out << "  " << factor << ": " << rows_text(rows) << '\n';
    }
    return 0;
}

} // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Capacity bounds for relay channels with a state known at the relay"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "relaycap 0.1.0");

    // bounds
    auto* bounds = app.add_subcommand("bounds", "report every bound at one operating point");
    ChannelFlags bch;
    GridFlags bgrid;
    bool bjson = false;
    bch.add(*bounds, true);
    bgrid.add(*bounds);
    bounds->add_flag("--json", bjson, "machine-readable output");

    // sweep
    auto* sweep = app.add_subcommand("sweep", "sweep SNR = P1/N2 by varying N2");
    ChannelFlags sch;
    GridFlags sgrid;
    double lo = -10.0, hi = 30.0;
    std::size_t points = 50;
    std::vector<std::string> which;
    std::string format = "csv", out_path = "-";
    unsigned threads = 0;
    std::uint64_t sweep_seed = 0;
    sch.add(*sweep, false);
    sgrid.add(*sweep);
    sweep->add_option("--lo-db", lo, "lowest SNR in dB")->capture_default_str();
    sweep->add_option("--hi-db", hi, "highest SNR in dB")->capture_default_str();
    sweep->add_option("--points", points, "number of SNR points")->capture_default_str();
    sweep->add_option("--bounds", which, "subset of lower,upper,upper_equiv,trivial_lower,trivial_upper")
        ->delimiter(',');
    sweep->add_option("--format", format, "csv, svg or both")->check(CLI::IsMember({"csv", "svg", "both"}))
        ->capture_default_str();
    sweep->add_option("--out", out_path, "output file, '-' for stdout; with both, the extension is replaced")
        ->capture_default_str();
    sweep->add_option("--threads", threads, "worker threads, 0 for all cores")->capture_default_str();
    sweep->add_option("--seed", sweep_seed, "accepted for symmetry with dm; the sweep is a deterministic grid search");

    // dm
    auto* dmc = app.add_subcommand("dm", "bounds for a discrete memoryless channel given as JSON");
    std::string spec_path;
    std::string mode = "all";
    dm::SearchOptions dopt;
    bool djson = false;
    dmc->add_option("spec", spec_path, "channel spec (JSON)")->required();
    dmc->add_option("--mode", mode, "lower, upper, trivial or all")
        ->check(CLI::IsMember({"lower", "upper", "trivial", "all"}))
        ->capture_default_str();
    dmc->add_option("--budget", dopt.restarts, "random restarts")->capture_default_str();
    dmc->add_option("--seed", dopt.seed, "search seed")->capture_default_str();
    dmc->add_option("--aux-u1", dopt.aux_u1, "|U1|")->capture_default_str();
    dmc->add_option("--aux-u2", dopt.aux_u2, "|U2|")->capture_default_str();
    dmc->add_flag("--degraded", dopt.degraded, "use the degraded relay term in the upper bound");
    dmc->add_flag("--json", djson, "machine-readable output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : kInputError;
    }

    try {
        if (*bounds)
            return cmd_bounds(bch.params(), bgrid.spec(), bjson, out);
        if (*sweep) {
            SweepSpec spec;
            spec.base = sch.params();
            spec.lo_db = lo;
            spec.hi_db = hi;
            spec.points = points;
            for (const auto& w : which) {
                const auto b = parse_bound_kind(w);
                if (!b)
                    throw InputError("unknown bound '" + w + "'");
                spec.bounds.push_back(*b);
            }
            spec.emit = *parse_emit_format(format);
            return cmd_sweep(spec, sgrid.spec(), out_path, threads, out);
        }
        std::vector<std::string> modes;
        if (mode == "all")
            modes = {"lower", "upper", "trivial"};
        else
            modes = {mode};
        return cmd_dm(spec_path, modes, dopt, djson, out);
    } catch (const DomainError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const ParseError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const InputError& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return 1;
    }
    return kInputError;
}

} // namespace relaycap
