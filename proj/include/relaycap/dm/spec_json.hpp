#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "relaycap/dm/types.hpp"

namespace relaycap::dm {

// Document layout:
//   {
//     "sizes":     {"s": 2, "x1": 2, "x2": 2, "y2": 2, "y3": 2},
//     "state_pmf": [...],   // |S| entries
//     "kernel":    [...]    // W(y2, y3 | x1, x2, s), row-major over (x1, x2, s, y2, y3)
//   }

/// Throws ParseError naming the field or cell at fault.
DiscreteChannelSpec parse_channel_spec(std::string_view json_text);
DiscreteChannelSpec load_channel_spec(const std::filesystem::path& path);

std::string to_json(const DiscreteChannelSpec& spec, int indent = 2);

} // namespace relaycap::dm
