#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "gvg/engine.hpp"

namespace gvg {

inline constexpr int kDefaultTileSize = 10;

struct PixelFrame {
    int width = 0;
    int height = 0;
    int tile_size = 1;
    std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel

    bool operator==(const PixelFrame&) const = default;
};

/// Solid tile per cell in the colour of the topmost sprite (highest type index).
PixelFrame render_pixels(const GameState& state, int tile_size = kDefaultTileSize);

/// Structured observation; layout documented in docs/observation-schema.md.
nlohmann::json render_grid(const GameState& state);

std::vector<std::uint8_t> encode_png(const PixelFrame& frame);
/// Throws InvalidValue on malformed input.
PixelFrame decode_png(const std::vector<std::uint8_t>& bytes);
/// Throws Io when the file cannot be written.
void export_png(const PixelFrame& frame, const std::filesystem::path& path);

std::string base64_encode(const std::vector<std::uint8_t>& bytes);
std::vector<std::uint8_t> base64_decode(std::string_view text);

}  // namespace gvg
