#pragma once

#include <array>
#include <cstdint>

namespace mdcrow::image::detail {

// Rows top to bottom, bit 4 is the leftmost column.
using Glyph = std::array<std::uint8_t, 7>;

const Glyph& glyph(char c);

} // namespace mdcrow::image::detail
