#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <unistd.h>

#include "gearlens/classifier.hpp"
#include "gearlens/dataset.hpp"
#include "gearlens/image.hpp"
#include "gearlens/rng.hpp"
#include "gearlens/synthgear.hpp"

namespace fixtures {

using namespace gearlens;

// The standard pair: default geometry, no noise.
inline GearSpec intact_gear() { return GearSpec{}; }

inline GearSpec missing_tooth_gear() {
    GearSpec spec;
    spec.defect = MissingTooth{0};
    return spec;
}

inline GrayImage random_gray(SplitMix64& rng, int w, int h) {
    GrayImage img(w, h);
    for (auto& v : img.intensities()) v = static_cast<std::uint8_t>(rng.below(256));
    return img;
}

inline RgbImage random_rgb(SplitMix64& rng, int w, int h) {
    RgbImage img(w, h);
    for (auto& v : img.channels()) v = static_cast<std::uint8_t>(rng.below(256));
    return img;
}

// Same images generate_dataset(count, seed, ...) writes, kept in memory.
inline std::vector<LabeledImage> benchmark_items(int count = 200, std::uint64_t seed = 42) {
    std::vector<LabeledImage> items;
    for (const bool broken : {false, true}) {
        for (int i = 0; i < count; ++i) {
            const std::uint64_t index = static_cast<std::uint64_t>(i) + (broken ? count : 0);
            std::string number = std::to_string(i);
            number.insert(0, 4 - std::min<std::size_t>(4, number.size()), '0');
            const std::string cls = broken ? "broken" : "normal";
            items.push_back({cls + "_gear/gear_" + cls + "_" + number + ".ppm",
                             broken ? Label::BrokenGear : Label::NormalGear,
                             render_gear(dataset_gear_spec(broken, i, seed, index, 128))});
        }
    }
    return items;
}

inline const TrainResult& benchmark_run() {
    static const TrainResult result = train(benchmark_items(), TrainConfig{}, ExtractorConfig{});
    return result;
}

// Random head and batch: dimension from a random grid, weights U(-0.5, 0.5),
// features U(0, 1), 1..8 samples.
struct GradientCase {
    SoftmaxHead head;
    std::vector<Sample> batch;
};

inline GradientCase random_gradient_case(SplitMix64& rng) {
    ExtractorConfig extractor;
    extractor.grid = 1 + static_cast<int>(rng.below(3));
    GradientCase out{SoftmaxHead::zeros(extractor), {}};
    for (auto& w : out.head.weights) w = rng.uniform(-0.5, 0.5);
    for (auto& b : out.head.bias) b = rng.uniform(-0.5, 0.5);
    const std::size_t n = 1 + rng.below(8);
    for (std::size_t i = 0; i < n; ++i) {
        FeatureVector f(out.head.dimension());
        for (auto& v : f) v = rng.uniform();
        out.batch.push_back({f, rng.below(2) ? Label::BrokenGear : Label::NormalGear});
    }
    return out;
}

// Worst component-wise relative error of loss_and_grad against central
// differences with step h. Components whose magnitudes are both below 1e-8
// are compared absolutely.
inline double gradient_check(const GradientCase& c, double h = 1e-5) {
    const LossGradient analytic = loss_and_grad(c.head, c.batch);
    double worst = 0.0;
    const auto compare = [&](double a, double numeric) {
        const double scale = std::max(std::abs(a), std::abs(numeric));
        const double err = scale < 1e-8 ? std::abs(a - numeric) : std::abs(a - numeric) / scale;
        worst = std::max(worst, err);
    };
    SoftmaxHead probe = c.head;
    const auto central = [&](double& param) {
        const double saved = param;
        param = saved + h;
        const double up = loss_and_grad(probe, c.batch).loss;
        param = saved - h;
        const double down = loss_and_grad(probe, c.batch).loss;
        param = saved;
        return (up - down) / (2.0 * h);
    };
    for (std::size_t i = 0; i < probe.weights.size(); ++i) compare(analytic.d_weights[i], central(probe.weights[i]));
    for (std::size_t i = 0; i < probe.bias.size(); ++i) compare(analytic.d_bias[i], central(probe.bias[i]));
    return worst;
}

// Scratch directory removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag)
        : path_(std::filesystem::temp_directory_path() /
                ("gearlens_" + tag + "_" + std::to_string(::getpid()))) {
        std::filesystem::remove_all(path_);
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

}  // namespace fixtures
