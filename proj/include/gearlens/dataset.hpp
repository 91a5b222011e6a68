#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gearlens/image.hpp"

namespace gearlens {

enum class Label { NormalGear = 0, BrokenGear = 1 };

inline constexpr int kClassCount = 2;

// "normal gear" / "broken gear"
std::string_view label_name(Label label) noexcept;
// "normal_gear" / "broken_gear"
std::string_view label_directory(Label label) noexcept;
std::optional<Label> parse_label(std::string_view name) noexcept;

struct LabeledImage {
    std::string id;  // "<class dir>/<file name>"
    Label label;
    RgbImage image;
};

struct SplitRatios {
    double train = 0.6;
    double validation = 0.2;
    double test = 0.2;

    void validate() const;
};

/// Three disjoint parts, each ordered by id.
struct DatasetSplit {
    std::vector<LabeledImage> train;
    std::vector<LabeledImage> validation;
    std::vector<LabeledImage> test;

    std::size_t total() const noexcept { return train.size() + validation.size() + test.size(); }
};

enum class SplitPart { Train, Validation, Test };

std::string_view part_name(SplitPart part) noexcept;
std::optional<SplitPart> parse_part(std::string_view name) noexcept;
const std::vector<LabeledImage>& part_of(const DatasetSplit& split, SplitPart part) noexcept;

// Loads <root>/normal_gear/*.p[gpn]m and <root>/broken_gear/*.p[gpn]m,
// sorted by id. Plain files directly under root are ignored; any other
// subdirectory is an error.
std::vector<LabeledImage> ingest_directory(const std::filesystem::path& root);

// Part sizes by largest-remainder apportionment of N over the ratios
// (ties go to train, then validation, then test). Each part is within one
// item of its exact share.
struct SplitSizes {
    std::size_t train = 0;
    std::size_t validation = 0;
    std::size_t test = 0;
};
SplitSizes split_sizes(std::size_t n, const SplitRatios& ratios);

// Sort by id, Fisher-Yates shuffle (SplitMix64(seed), j = next() % (i + 1)
// for i = N-1 down to 1), cut into train / validation / test, then sort
// each part by id.
DatasetSplit split_dataset(std::vector<LabeledImage> items, const SplitRatios& ratios,
                           std::uint64_t seed);

// Manifest: one "<part>\t<label>\t<id>\n" line per item, blocks in order
// train, validation, test, ids ascending within a block.
std::string format_manifest(const DatasetSplit& split);
void write_manifest(const DatasetSplit& split, const std::filesystem::path& path);

struct ManifestEntry {
    SplitPart part;
    Label label;
    std::string id;
};
std::vector<ManifestEntry> parse_manifest(std::string_view text);

// Parses the manifest and loads every referenced image from under `root`.
DatasetSplit read_manifest(const std::filesystem::path& path, const std::filesystem::path& root);

}  // namespace gearlens
