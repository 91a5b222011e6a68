#pragma once

#include <cstdint>
#include <filesystem>
#include <variant>
#include <vector>

#include "gearlens/image.hpp"

namespace gearlens {

struct NoDefect {
    friend bool operator==(const NoDefect&, const NoDefect&) = default;
};

// The whole tooth period `index` is cut down to the root circle.
struct MissingTooth {
    int index = 0;
    friend bool operator==(const MissingTooth&, const MissingTooth&) = default;
};

// A straight background-coloured slot along the ray at `angle` (radians,
// image coordinates, y down) from half the root radius out to the rim.
struct Crack {
    double angle = 0.0;
    double width = 2.0;
    friend bool operator==(const Crack&, const Crack&) = default;
};

using Defect = std::variant<NoDefect, MissingTooth, Crack>;

/// Parameters of one rendered gear silhouette. The gear is centred in a
/// square image; tooth k occupies the first half of the angular period
/// [2 pi k / teeth, 2 pi (k + 1) / teeth), measured by atan2 from +x.
struct GearSpec {
    int image_size = 128;
    double root_radius = 31.0;
    double tooth_height = 23.0;
    int teeth = 6;
    std::uint8_t foreground = 200;
    std::uint8_t background = 25;
    Defect defect = NoDefect{};
    double noise_sigma = 0.0;
    std::uint64_t seed = 0;

    // Throws Error when an invariant does not hold.
    void validate() const;
};

// Hard-edged silhouette, additive Gaussian noise (Box-Muller over SplitMix64
// seeded with spec.seed, one deviate per pixel in raster order), R = G = B.
RgbImage render_gear(const GearSpec& spec);

// Per-item geometry for generate_dataset. `index` is the global item index:
// normal items are 0..count-1, broken items count..2*count-1. Six teeth;
// defects (tooth 0 or 1 missing, or a crack) lie at angles in [0, pi/2).
GearSpec dataset_gear_spec(bool broken, int class_index, std::uint64_t base_seed,
                           std::uint64_t index, int image_size);

struct DatasetSummary {
    int normal_count = 0;
    int broken_count = 0;
    std::vector<std::filesystem::path> paths;  // normal files first, then broken
};

// Writes <dest>/normal_gear/gear_normal_NNNN.ppm and
// <dest>/broken_gear/gear_broken_NNNN.ppm; broken items alternate
// MissingTooth and Crack.
DatasetSummary generate_dataset(int count_per_class, std::uint64_t base_seed,
                                const std::filesystem::path& destination, int image_size = 128);

}  // namespace gearlens
