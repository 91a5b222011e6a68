#include "gearlens/dataset.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "gearlens/error.hpp"
#include "gearlens/io.hpp"
#include "gearlens/rng.hpp"

namespace gearlens {

namespace fs = std::filesystem;

std::string_view label_name(Label label) noexcept {
    return label == Label::NormalGear ? "normal gear" : "broken gear";
}

std::string_view label_directory(Label label) noexcept {
    return label == Label::NormalGear ? "normal_gear" : "broken_gear";
}

std::optional<Label> parse_label(std::string_view name) noexcept {
    if (name == "normal gear") return Label::NormalGear;
    if (name == "broken gear") return Label::BrokenGear;
    return std::nullopt;
}

std::string_view part_name(SplitPart part) noexcept {
    switch (part) {
        case SplitPart::Train: return "train";
        case SplitPart::Validation: return "validation";
        case SplitPart::Test: return "test";
    }
    return "";
}

std::optional<SplitPart> parse_part(std::string_view name) noexcept {
    if (name == "train") return SplitPart::Train;
    if (name == "validation") return SplitPart::Validation;
    if (name == "test") return SplitPart::Test;
    return std::nullopt;
}

const std::vector<LabeledImage>& part_of(const DatasetSplit& split, SplitPart part) noexcept {
    switch (part) {
        case SplitPart::Train: return split.train;
        case SplitPart::Validation: return split.validation;
        case SplitPart::Test: break;
    }
    return split.test;
}

void SplitRatios::validate() const {
    for (double r : {train, validation, test}) {
        if (!(r >= 0.0) || !std::isfinite(r)) throw Error("split ratios must be finite and >= 0");
    }
    if (std::abs(train + validation + test - 1.0) > 1e-9) {
        throw Error("split ratios must sum to 1");
    }
}

namespace {

bool is_pnm_file(const fs::path& p) {
    const auto ext = p.extension().string();
    return ext == ".ppm" || ext == ".pgm" || ext == ".pnm";
}

void sort_by_id(std::vector<LabeledImage>& items) {
    std::sort(items.begin(), items.end(),
              [](const LabeledImage& a, const LabeledImage& b) { return a.id < b.id; });
}

}  // namespace

std::vector<LabeledImage> ingest_directory(const fs::path& root) {
    if (!fs::is_directory(root)) throw Error("dataset root is not a directory: " + root.string());

    for (const auto& entry : fs::directory_iterator(root)) {
        if (!entry.is_directory()) continue;
        const auto name = entry.path().filename().string();
        if (name != "normal_gear" && name != "broken_gear") {
            throw Error("unknown subdirectory '" + name + "' in " + root.string() +
                        " (expected only normal_gear and broken_gear)");
        }
    }

    std::vector<LabeledImage> items;
    for (const Label label : {Label::NormalGear, Label::BrokenGear}) {
        const std::string dir_name(label_directory(label));
        const fs::path dir = root / dir_name;
        if (!fs::is_directory(dir)) throw Error("missing class directory " + dir.string());

        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir)) {
            if (entry.is_regular_file() && is_pnm_file(entry.path())) files.push_back(entry.path());
        }
        if (files.empty()) throw Error("class directory has no PNM files: " + dir.string());
        for (const auto& file : files) {
            items.push_back({dir_name + "/" + file.filename().string(), label, load_rgb_file(file)});
        }
    }
    sort_by_id(items);
    return items;
}

SplitSizes split_sizes(std::size_t n, const SplitRatios& ratios) {
    ratios.validate();
    const std::array<double, 3> quota = {ratios.train * static_cast<double>(n),
                                         ratios.validation * static_cast<double>(n),
                                         ratios.test * static_cast<double>(n)};
    std::array<std::size_t, 3> size{};
    std::array<double, 3> remainder{};
    std::size_t assigned = 0;
    for (std::size_t k = 0; k < 3; ++k) {
        // The epsilon absorbs representation error such as 0.6 * 10 = 5.999...
        const double whole = std::floor(quota[k] + 1e-9);
        size[k] = static_cast<std::size_t>(whole);
        remainder[k] = quota[k] - whole;
        assigned += size[k];
    }
    std::array<std::size_t, 3> order = {0, 1, 2};
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return remainder[a] > remainder[b] + 1e-9; });
    for (std::size_t k = 0; assigned < n; k = (k + 1) % 3) {
        ++size[order[k]];
        ++assigned;
    }
    return {size[0], size[1], size[2]};
}

DatasetSplit split_dataset(std::vector<LabeledImage> items, const SplitRatios& ratios,
                           std::uint64_t seed) {
    if (items.size() < 3) {
        throw Error("need at least 3 items to split, got " + std::to_string(items.size()));
    }
    const SplitSizes sizes = split_sizes(items.size(), ratios);
    if ((ratios.train > 0.0 && sizes.train == 0) || (ratios.validation > 0.0 && sizes.validation == 0) ||
        (ratios.test > 0.0 && sizes.test == 0)) {
        throw Error("split of " + std::to_string(items.size()) +
                    " items leaves a part with a positive ratio empty");
    }

    sort_by_id(items);
    for (std::size_t i = 1; i < items.size(); ++i) {
        if (items[i].id == items[i - 1].id) throw Error("duplicate item id '" + items[i].id + "'");
    }
    SplitMix64 rng(seed);
    for (std::size_t i = items.size() - 1; i >= 1; --i) {
        const auto j = static_cast<std::size_t>(rng.below(i + 1));
        std::swap(items[i], items[j]);
    }

    DatasetSplit split;
    auto it = std::make_move_iterator(items.begin());
    const auto take = [&](std::vector<LabeledImage>& part, std::size_t count) {
        part.assign(it, it + static_cast<std::ptrdiff_t>(count));
        it += static_cast<std::ptrdiff_t>(count);
        sort_by_id(part);
    };
    take(split.train, sizes.train);
    take(split.validation, sizes.validation);
    take(split.test, sizes.test);
    return split;
}

std::string format_manifest(const DatasetSplit& split) {
    std::string out;
    for (const SplitPart part : {SplitPart::Train, SplitPart::Validation, SplitPart::Test}) {
        for (const auto& item : part_of(split, part)) {
            out.append(part_name(part)).append("\t").append(label_name(item.label)).append("\t");
            out.append(item.id).append("\n");
        }
    }
    return out;
}

void write_manifest(const DatasetSplit& split, const fs::path& path) {
    write_file(path, format_manifest(split));
}

std::vector<ManifestEntry> parse_manifest(std::string_view text) {
    std::vector<ManifestEntry> entries;
    std::set<std::string, std::less<>> seen;
    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto eol = text.find('\n');
        std::string_view line = text.substr(0, eol);
        text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
        if (line.empty()) {
            throw ParseError(ParseError::Unit::Line, line_no, "empty manifest line");
        }

        std::vector<std::string_view> fields;
        for (std::size_t start = 0;;) {
            const auto tab = line.find('\t', start);
            fields.push_back(line.substr(start, tab == std::string_view::npos ? tab : tab - start));
            if (tab == std::string_view::npos) break;
            start = tab + 1;
        }
        if (fields.size() != 3) {
            throw ParseError(ParseError::Unit::Line, line_no,
                             "expected 3 tab-separated fields: <part>\\t<label>\\t<id>");
        }
        const auto part = parse_part(fields[0]);
        if (!part) throw ParseError(ParseError::Unit::Line, line_no, "unknown part '" + std::string(fields[0]) + "'");
        const auto label = parse_label(fields[1]);
        if (!label) throw ParseError(ParseError::Unit::Line, line_no, "unknown label '" + std::string(fields[1]) + "'");
        if (fields[2].empty()) throw ParseError(ParseError::Unit::Line, line_no, "empty id");
        if (!seen.emplace(fields[2]).second) {
            throw ParseError(ParseError::Unit::Line, line_no, "duplicate id '" + std::string(fields[2]) + "'");
        }
        entries.push_back({*part, *label, std::string(fields[2])});
    }
    return entries;
}

DatasetSplit read_manifest(const fs::path& path, const fs::path& root) {
    const auto bytes = read_file(path);
    auto entries = parse_manifest(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));

    DatasetSplit split;
    for (auto& entry : entries) {
        const fs::path file = root / entry.id;
        if (!fs::is_regular_file(file)) throw Error("manifest references missing file " + file.string());
        LabeledImage item{entry.id, entry.label, load_rgb_file(file)};
        switch (entry.part) {
            case SplitPart::Train: split.train.push_back(std::move(item)); break;
            case SplitPart::Validation: split.validation.push_back(std::move(item)); break;
            case SplitPart::Test: split.test.push_back(std::move(item)); break;
        }
    }
    sort_by_id(split.train);
    sort_by_id(split.validation);
    sort_by_id(split.test);
    return split;
}

}  // namespace gearlens
