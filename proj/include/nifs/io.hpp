#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace nifs::io {

// %.17g; round-trips every finite double.
std::string number(double v);

std::string quoted(std::string_view s);

/// Writes to a sibling temporary file and renames it over `path`, so the
/// destination either keeps its old contents or holds the complete new ones.
void write_atomic(const std::filesystem::path& path, std::string_view contents);

struct Image {
    int width = 0;
    int height = 0;
    std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel
};

// Binary PPM (P6, maxval 255).
std::string to_ppm(const Image& img);

} // namespace nifs::io
