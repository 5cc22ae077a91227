#include "relaycap/sweep.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "relaycap/errors.hpp"
#include "relaycap/gaussian_bounds.hpp"
#include "relaycap/parallel.hpp"

namespace relaycap {

std::string_view column_name(BoundKind b) noexcept
{
    switch (b) {
    case BoundKind::lower: return "lower";
    case BoundKind::upper: return "upper";
    case BoundKind::upper_equiv: return "upper_equiv";
    case BoundKind::trivial_lower: return "trivial_lower";
    case BoundKind::trivial_upper: return "trivial_upper";
    }
    return "unknown";
}

std::optional<BoundKind> parse_bound_kind(std::string_view name) noexcept
{
    for (auto b : kAllBounds)
        if (column_name(b) == name)
            return b;
    return std::nullopt;
}

std::optional<EmitFormat> parse_emit_format(std::string_view name) noexcept
{
    if (name == "csv")
        return EmitFormat::csv;
    if (name == "svg")
        return EmitFormat::svg;
    if (name == "both")
        return EmitFormat::both;
    return std::nullopt;
}

void SweepSpec::validate() const
{
    base.validate();
    if (!(base.p1 > 0.0))
        throw std::invalid_argument("an SNR sweep needs p1 > 0");
    if (!std::isfinite(lo_db) || !std::isfinite(hi_db) || !(lo_db < hi_db))
        throw std::invalid_argument("sweep range needs finite lo < hi, got [" + format_number(lo_db) + ", " +
                                    format_number(hi_db) + "]");
    if (points < 2)
        throw std::invalid_argument("sweep needs at least 2 points, got " + std::to_string(points));
    for (auto b : bounds)
        if (b == BoundKind::upper_equiv && !base.degraded)
            throw std::invalid_argument("upper_equiv is defined for the degraded model only");
}

std::vector<BoundKind> SweepSpec::resolved_bounds() const
{
    std::vector<BoundKind> out;
    for (auto b : kAllBounds) {
        const bool wanted = bounds.empty() ? (b != BoundKind::upper_equiv || base.degraded)
                                           : std::find(bounds.begin(), bounds.end(), b) != bounds.end();
        if (wanted)
            out.push_back(b);
    }
    return out;
}

double SweepSpec::snr_db(std::size_t i) const
{
    if (i + 1 == points)
        return hi_db;
    return lo_db + static_cast<double>(i) * (hi_db - lo_db) / static_cast<double>(points - 1);
}

namespace {

BoundResult compute(BoundKind b, const ChannelParams& ch, const opt::GridSpec& grid)
{
    switch (b) {
    case BoundKind::lower: return lower_bound(ch, grid);
    case BoundKind::upper: return upper_bound(ch, grid);
    case BoundKind::upper_equiv: return upper_bound_degraded_equiv(ch, grid);
    case BoundKind::trivial_lower: return trivial_lower_bound(ch, grid);
    case BoundKind::trivial_upper: return trivial_upper_bound(ch, grid);
    }
    throw std::logic_error("unknown bound kind");
}

} // namespace

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const opt::GridSpec& grid, unsigned threads)
{
    spec.validate();
    grid.validate();
    const auto bounds = spec.resolved_bounds();
    std::vector<SweepRow> rows(spec.points);
    parallel_for(
        spec.points,
        [&](std::size_t i) {
            SweepRow& row = rows[i];
            row.snr_db = spec.snr_db(i);
            ChannelParams ch = spec.base;
            ch.n2 = spec.base.p1 / db_to_linear(row.snr_db);
            for (auto b : bounds) {
                const auto r = compute(b, ch, grid);
                row.rate[static_cast<std::size_t>(b)] = r.rate;
                row.tolerance[static_cast<std::size_t>(b)] = r.grid_tolerance;
                if (b == BoundKind::lower) {
                    row.theta = r.param("theta");
                    row.rho12p = r.param("rho12p");
                    row.rho2sp = r.param("rho2sp");
                }
            }
        },
        threads);
    return rows;
}

std::optional<double> threshold_snr_db(const ChannelParams& base, const opt::GridSpec& grid)
{
    if (!base.degraded || !(base.p1 > 0.0))
        return std::nullopt;
    const auto t = capacity_condition_threshold(base, grid);
    if (!(t.threshold > 0.0))
        return std::nullopt;
    return linear_to_db(base.p1 / t.threshold);
}

std::string format_number(double v)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
    return {buf, r.ptr};
}

std::vector<std::string> csv_header(const std::vector<BoundKind>& bounds)
{
    std::vector<std::string> h{"snr_dB"};
    for (auto b : bounds)
        h.emplace_back(column_name(b));
    if (std::find(bounds.begin(), bounds.end(), BoundKind::lower) != bounds.end())
        h.insert(h.end(), {"theta", "rho12p", "rho2sp"});
    return h;
}

void write_csv(std::ostream& os, const std::vector<BoundKind>& bounds, const std::vector<SweepRow>& rows)
{
    const auto header = csv_header(bounds);
    for (std::size_t i = 0; i < header.size(); ++i)
        os << (i ? "," : "") << header[i];
    os << '\n';
    const bool argmax = std::find(bounds.begin(), bounds.end(), BoundKind::lower) != bounds.end();
    for (const auto& row : rows) {
        os << format_number(row.snr_db);
        for (auto b : bounds) {
            const auto v = row.get(b);
            if (!v)
                throw std::invalid_argument("sweep row lacks the " + std::string(column_name(b)) + " column");
            os << ',' << format_number(*v);
        }
        if (argmax)
            os << ',' << format_number(row.theta.value()) << ',' << format_number(row.rho12p.value()) << ','
               << format_number(row.rho2sp.value());
        os << '\n';
    }
}

std::size_t CsvTable::column(std::string_view name) const
{
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name)
            return i;
    throw std::out_of_range("no CSV column named " + std::string(name));
}

CsvTable read_csv(std::istream& is)
{
    auto split = [](const std::string& line) {
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ','))
            cells.push_back(cell);
        return cells;
    };

    CsvTable t;
    std::string line;
    if (!std::getline(is, line))
        throw ParseError("CSV is empty");
    t.header = split(line);
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty())
            continue;
        const auto cells = split(line);
        if (cells.size() != t.header.size())
            throw ParseError("CSV line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                             " cells, header has " + std::to_string(t.header.size()));
        std::vector<double> row;
        for (const auto& c : cells) {
            double v = 0.0;
            const auto r = std::from_chars(c.data(), c.data() + c.size(), v);
            if (r.ec != std::errc{} || r.ptr != c.data() + c.size())
                throw ParseError("CSV line " + std::to_string(lineno) + ": \"" + c + "\" is not a number");
            row.push_back(v);
        }
        t.rows.push_back(std::move(row));
    }
    return t;
}

// ---- SVG ----

namespace {

constexpr double kWidth = 800, kHeight = 600;
constexpr double kLeft = 70, kRight = 780, kTop = 30, kBottom = 540;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e"};

double nice_step(double span, int target)
{
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0})
        if (raw <= m * mag)
            return m * mag;
    return 10.0 * mag;
}

std::string fixed(double v, int digits = 2)
{
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return {buf, r.ptr};
}

std::string star(double cx, double cy, double r)
{
    std::string pts;
    for (int k = 0; k < 10; ++k) {
        const double rad = (k % 2 == 0) ? r : r * 0.382;
        const double a = -std::numbers::pi / 2 + k * std::numbers::pi / 5;
        pts += (k ? " " : "") + fixed(cx + rad * std::cos(a)) + "," + fixed(cy + rad * std::sin(a));
    }
    return pts;
}

} // namespace

void write_svg(std::ostream& os, const std::vector<BoundKind>& bounds, const std::vector<SweepRow>& rows,
               std::optional<double> marker_snr_db)
{
    if (rows.size() < 2 || bounds.empty())
        throw std::invalid_argument("a chart needs at least two rows and one bound");
    const double x0 = rows.front().snr_db, x1 = rows.back().snr_db;
    double ymax = 0.0;
    for (const auto& row : rows)
        for (auto b : bounds)
            ymax = std::max(ymax, row.get(b).value_or(0.0));
    const double ystep = nice_step(ymax > 0.0 ? ymax : 1.0, 6);
    const double y1 = std::max(ystep, std::ceil(ymax / ystep) * ystep);

    auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * (kRight - kLeft); };
    auto py = [&](double y) { return kBottom - y / y1 * (kBottom - kTop); };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << ' ' << kHeight
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kRight - kLeft << "\" height=\""
       << kBottom - kTop << "\" fill=\"none\" stroke=\"black\"/>\n";

    const double xstep = nice_step(x1 - x0, 8);
    for (double x = std::ceil(x0 / xstep) * xstep; x <= x1 + 1e-9; x += xstep) {
        os << "<line x1=\"" << fixed(px(x)) << "\" y1=\"" << kBottom << "\" x2=\"" << fixed(px(x)) << "\" y2=\""
           << kBottom + 5 << "\" stroke=\"black\"/>";
        os << "<text x=\"" << fixed(px(x)) << "\" y=\"" << kBottom + 20 << "\" text-anchor=\"middle\">"
           << format_number(std::abs(x) < 1e-9 ? 0.0 : x) << "</text>\n";
    }
    for (double y = 0.0; y <= y1 + 1e-12; y += ystep) {
        os << "<line x1=\"" << kLeft - 5 << "\" y1=\"" << fixed(py(y)) << "\" x2=\"" << kLeft << "\" y2=\""
           << fixed(py(y)) << "\" stroke=\"black\"/>";
        os << "<text x=\"" << kLeft - 8 << "\" y=\"" << fixed(py(y) + 4) << "\" text-anchor=\"end\">"
           << format_number(y) << "</text>\n";
    }
    os << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kHeight - 20
       << "\" text-anchor=\"middle\">SNR P1/N2 (dB)</text>\n";
    os << "<text x=\"18\" y=\"" << (kTop + kBottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
       << (kTop + kBottom) / 2 << ")\">rate (bits/use)</text>\n";

    for (std::size_t k = 0; k < bounds.size(); ++k) {
        const auto b = bounds[k];
        os << "<polyline class=\"bound\" data-column=\"" << column_name(b) << "\" fill=\"none\" stroke=\""
           << kColors[k % std::size(kColors)] << "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto& row : rows)
            if (const auto v = row.get(b)) {
                os << (first ? "" : " ") << fixed(px(row.snr_db)) << ',' << fixed(py(*v));
                first = false;
            }
        os << "\"/>\n";
    }

    // Legend, top left inside the plot.
    for (std::size_t k = 0; k < bounds.size(); ++k) {
        const double y = kTop + 18 + 18 * static_cast<double>(k);
        os << "<line x1=\"" << kLeft + 12 << "\" y1=\"" << y << "\" x2=\"" << kLeft + 42 << "\" y2=\"" << y
           << "\" stroke=\"" << kColors[k % std::size(kColors)] << "\" stroke-width=\"2\"/>";
        os << "<text x=\"" << kLeft + 48 << "\" y=\"" << y + 4 << "\">" << column_name(bounds[k]) << "</text>\n";
    }

    if (marker_snr_db && *marker_snr_db >= x0 && *marker_snr_db <= x1) {
        // Sit the star on the first plotted curve.
        const auto b = bounds.front();
        double y = 0.0;
        for (std::size_t i = 0; i + 1 < rows.size(); ++i)
            if (rows[i + 1].snr_db >= *marker_snr_db) {
                const double a = rows[i].get(b).value_or(0.0), c = rows[i + 1].get(b).value_or(0.0);
                const double t = (*marker_snr_db - rows[i].snr_db) / (rows[i + 1].snr_db - rows[i].snr_db);
                y = a + t * (c - a);
                break;
            }
        os << "<polygon class=\"threshold\" data-snr-db=\"" << format_number(*marker_snr_db) << "\" points=\""
           << star(px(*marker_snr_db), py(y), 9) << "\" fill=\"black\"/>\n";
    }
    os << "</svg>\n";
}

} // namespace relaycap
