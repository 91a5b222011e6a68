#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string_view>
#include <vector>

#include "gearlens/image.hpp"

namespace gearlens {

std::vector<std::uint8_t> read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes);
void write_file(const std::filesystem::path& path, std::string_view text);

// load_pnm on the file's contents; decode errors are rethrown with the path prepended.
AnyImage load_image_file(const std::filesystem::path& path);

// Any PNM file as RGB; P5 input is promoted by channel replication.
RgbImage load_rgb_file(const std::filesystem::path& path);

// Creates `dir` (and parents) if needed; throws Error if it cannot be used.
void ensure_directory(const std::filesystem::path& dir);

}  // namespace gearlens
