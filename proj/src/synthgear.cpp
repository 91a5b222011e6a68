#include "gearlens/synthgear.hpp"

#include <cmath>
#include <algorithm>
#include <numbers>
#include <string>

#include "gearlens/error.hpp"
#include "gearlens/filters.hpp"
#include "gearlens/io.hpp"
#include "gearlens/rng.hpp"

namespace gearlens {

namespace fs = std::filesystem;

void GearSpec::validate() const {
    if (image_size < 32 || image_size > kMaxImageSide) {
        throw Error("gear image_size must be in [32, 65536], got " + std::to_string(image_size));
    }
    if (!(root_radius > 0.0) || !(tooth_height >= 0.0) ||
        !(root_radius + tooth_height < image_size / 2.0)) {
        throw Error("gear needs root_radius > 0, tooth_height >= 0 and root_radius + tooth_height < image_size / 2");
    }
    if (teeth < 6) throw Error("gear needs at least 6 teeth, got " + std::to_string(teeth));
    if (foreground == background) throw Error("gear foreground and background must differ");
    if (!(noise_sigma >= 0.0) || !std::isfinite(noise_sigma)) {
        throw Error("gear noise_sigma must be finite and >= 0");
    }
    if (const auto* missing = std::get_if<MissingTooth>(&defect)) {
        if (missing->index < 0 || missing->index >= teeth) {
            throw Error("missing tooth index " + std::to_string(missing->index) + " outside [0, " +
                        std::to_string(teeth) + ")");
        }
    }
    if (const auto* crack = std::get_if<Crack>(&defect)) {
        if (!(crack->width > 0.0) || !std::isfinite(crack->angle)) {
            throw Error("crack needs a finite angle and width > 0");
        }
    }
}

RgbImage render_gear(const GearSpec& spec) {
    spec.validate();
    const int n = spec.image_size;
    const double centre = (n - 1) / 2.0;
    const double rim = spec.root_radius + spec.tooth_height;
    const double period = 2.0 * std::numbers::pi / spec.teeth;

    const auto* missing = std::get_if<MissingTooth>(&spec.defect);
    const auto* crack = std::get_if<Crack>(&spec.defect);
    const double crack_cos = crack ? std::cos(crack->angle) : 0.0;
    const double crack_sin = crack ? std::sin(crack->angle) : 0.0;

    std::vector<double> levels(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int y = 0; y < n; ++y) {
        for (int x = 0; x < n; ++x) {
            const double dx = x - centre;
            const double dy = y - centre;
            const double r = std::hypot(dx, dy);
            double theta = std::atan2(dy, dx);
            if (theta < 0.0) theta += 2.0 * std::numbers::pi;
            const double t = theta / period;
            const int tooth = std::min(static_cast<int>(t), spec.teeth - 1);
            const bool on_tooth = (t - tooth) < 0.5;

            double outer = spec.root_radius + (on_tooth ? spec.tooth_height : 0.0);
            if (missing && tooth == missing->index) outer = spec.root_radius;
            bool fg = r <= outer;

            if (fg && crack && r >= spec.root_radius / 2.0 && r <= rim) {
                const double along = dx * crack_cos + dy * crack_sin;
                const double across = std::abs(dy * crack_cos - dx * crack_sin);
                if (along > 0.0 && across <= crack->width / 2.0) fg = false;
            }
            levels[static_cast<std::size_t>(y) * static_cast<std::size_t>(n) + static_cast<std::size_t>(x)] =
                fg ? spec.foreground : spec.background;
        }
    }

    RgbImage out(n, n);
    auto dst = out.channels();
    if (spec.noise_sigma > 0.0) {
        SplitMix64 rng(spec.seed);
        NormalSampler normal(rng);
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const std::uint8_t v = quantize(levels[i] + spec.noise_sigma * normal());
            dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = v;
        }
    } else {
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const auto v = static_cast<std::uint8_t>(levels[i]);
            dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = v;
        }
    }
    return out;
}

GearSpec dataset_gear_spec(bool broken, int class_index, std::uint64_t base_seed,
                           std::uint64_t index, int image_size) {
    SplitMix64 rng(base_seed + index);
    const double s = image_size / 128.0;

    GearSpec spec;
    spec.image_size = image_size;
    spec.teeth = 6;
    spec.root_radius = rng.uniform(30.0, 32.0) * s;
    spec.tooth_height = rng.uniform(22.0, 24.0) * s;
    spec.background = static_cast<std::uint8_t>(20 + rng.below(11));
    spec.foreground = static_cast<std::uint8_t>(190 + rng.below(21));
    spec.noise_sigma = rng.uniform(0.0, 3.0);
    spec.seed = rng.next();

    // Defects stay in the lower-right quadrant of the image.
    if (broken) {
        if (class_index % 2 == 0) {
            spec.defect = MissingTooth{static_cast<int>(rng.below(2))};
        } else {
            spec.defect = Crack{rng.uniform(0.0, std::numbers::pi / 2.0), rng.uniform(5.0, 7.0) * s};
        }
    }
    return spec;
}

DatasetSummary generate_dataset(int count_per_class, std::uint64_t base_seed,
                                const fs::path& destination, int image_size) {
    if (count_per_class < 1) {
        throw Error("count per class must be >= 1, got " + std::to_string(count_per_class));
    }
    const int digits = std::max(4, static_cast<int>(std::to_string(count_per_class - 1).size()));

    DatasetSummary summary;
    for (const bool broken : {false, true}) {
        const std::string cls = broken ? "broken" : "normal";
        const fs::path dir = destination / (cls + "_gear");
        ensure_directory(dir);
        for (int i = 0; i < count_per_class; ++i) {
            const std::uint64_t index = static_cast<std::uint64_t>(i) +
                                        (broken ? static_cast<std::uint64_t>(count_per_class) : 0u);
            const GearSpec spec = dataset_gear_spec(broken, i, base_seed, index, image_size);
            std::string number = std::to_string(i);
            number.insert(0, static_cast<std::size_t>(digits) - std::min<std::size_t>(digits, number.size()), '0');
            const fs::path path = dir / ("gear_" + cls + "_" + number + ".ppm");
            write_file(path, save_pnm(render_gear(spec)));
            summary.paths.push_back(path);
            ++(broken ? summary.broken_count : summary.normal_count);
        }
    }
    return summary;
}

}  // namespace gearlens
