#pragma once

// SNR sweeps of the Gaussian bounds and their CSV / SVG renderings.

#include <array>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "relaycap/channel.hpp"
#include "relaycap/grid_search.hpp"

namespace relaycap {

enum class BoundKind { lower, upper, upper_equiv, trivial_lower, trivial_upper };

inline constexpr std::array kAllBounds{BoundKind::lower, BoundKind::upper, BoundKind::upper_equiv,
                                       BoundKind::trivial_lower, BoundKind::trivial_upper};

[[nodiscard]] std::string_view column_name(BoundKind b) noexcept;
[[nodiscard]] std::optional<BoundKind> parse_bound_kind(std::string_view name) noexcept;

enum class EmitFormat { csv, svg, both };

[[nodiscard]] std::optional<EmitFormat> parse_emit_format(std::string_view name) noexcept;

/// SNR = P1/N2 in dB, swept by varying N2 with every other constant fixed.
struct SweepSpec {
    ChannelParams base;  // n2 is overwritten per point
    double lo_db = -10.0;
    double hi_db = 30.0;
    std::size_t points = 50;
    std::vector<BoundKind> bounds;  // empty: every bound that applies to base
    EmitFormat emit = EmitFormat::csv;

    /// Throws std::invalid_argument.
    void validate() const;
    /// The bound list actually computed, in column order.
    [[nodiscard]] std::vector<BoundKind> resolved_bounds() const;
    [[nodiscard]] double snr_db(std::size_t i) const;
};

struct SweepRow {
    double snr_db = 0.0;
    std::array<std::optional<double>, kAllBounds.size()> rate;
    std::array<double, kAllBounds.size()> tolerance{};
    // Maximizers of the lower bound, when it was computed.
    std::optional<double> theta;
    std::optional<double> rho12p;
    std::optional<double> rho2sp;

    [[nodiscard]] std::optional<double> get(BoundKind b) const { return rate[static_cast<std::size_t>(b)]; }
};

/// Rows in axis order. Points run on up to `threads` workers (0: all cores).
std::vector<SweepRow> run_sweep(const SweepSpec& spec, const opt::GridSpec& grid = {}, unsigned threads = 0);

/// SNR in dB from which downward the capacity is known (degraded model), if any.
std::optional<double> threshold_snr_db(const ChannelParams& base, const opt::GridSpec& grid = {});

/// 12 significant digits, shortest form.
std::string format_number(double v);

std::vector<std::string> csv_header(const std::vector<BoundKind>& bounds);
void write_csv(std::ostream& os, const std::vector<BoundKind>& bounds, const std::vector<SweepRow>& rows);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    /// Column index by name; throws std::out_of_range.
    [[nodiscard]] std::size_t column(std::string_view name) const;
};

/// Throws ParseError on ragged rows or non-numeric cells.
CsvTable read_csv(std::istream& is);

/// 800x600 line chart, one polyline per bound column, legend, and a star at
/// `marker_snr_db` when given and inside the plotted range.
void write_svg(std::ostream& os, const std::vector<BoundKind>& bounds, const std::vector<SweepRow>& rows,
               std::optional<double> marker_snr_db);

} // namespace relaycap
