#include "gearlens/features.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "gearlens/error.hpp"

namespace gearlens {

namespace {

constexpr double kEdgeScale = 255.0 / 4.0;

}  // namespace

void ExtractorConfig::validate() const {
    if (grid < 1 || canonical_size < grid || canonical_size > kMaxImageSide) {
        throw Error("extractor needs grid >= 1 and grid <= canonical_size <= 65536 (got size " +
                    std::to_string(canonical_size) + ", grid " + std::to_string(grid) + ")");
    }
    blur.validate();
}

RgbImage resize_bilinear(const RgbImage& image, int width, int height) {
    if (width == image.width() && height == image.height()) return image;
    RgbImage out(width, height);

    const double scale_x = static_cast<double>(image.width()) / width;
    const double scale_y = static_cast<double>(image.height()) / height;
    const auto src = image.channels();
    auto dst = out.channels();
    const auto sample = [&](int x, int y, int ch) {
        return static_cast<double>(src[(static_cast<std::size_t>(y) * image.width() + x) * 3 + ch]);
    };

    for (int y = 0; y < height; ++y) {
        const double fy = std::clamp((y + 0.5) * scale_y - 0.5, 0.0, image.height() - 1.0);
        const int y0 = static_cast<int>(fy);
        const int y1 = std::min(y0 + 1, image.height() - 1);
        const double wy = fy - y0;
        for (int x = 0; x < width; ++x) {
            const double fx = std::clamp((x + 0.5) * scale_x - 0.5, 0.0, image.width() - 1.0);
            const int x0 = static_cast<int>(fx);
            const int x1 = std::min(x0 + 1, image.width() - 1);
            const double wx = fx - x0;
            for (int ch = 0; ch < 3; ++ch) {
                const double top = sample(x0, y0, ch) * (1.0 - wx) + sample(x1, y0, ch) * wx;
                const double bottom = sample(x0, y1, ch) * (1.0 - wx) + sample(x1, y1, ch) * wx;
                dst[(static_cast<std::size_t>(y) * width + x) * 3 + ch] =
                    quantize(top * (1.0 - wy) + bottom * wy);
            }
        }
    }
    return out;
}

FeatureVector extract_features(const RgbImage& image, const ExtractorConfig& config) {
    config.validate();
    const int n = config.canonical_size;
    const int g = config.grid;
    const GrayImage blurred = gaussian_blur(rgb_to_gray(resize_bilinear(image, n, n)), config.blur);

    FeatureVector features;
    features.reserve(static_cast<std::size_t>(config.dimension()));
    std::vector<double> cell_sum(static_cast<std::size_t>(g * g));
    std::vector<double> cell_count(static_cast<std::size_t>(g * g));

    for (const auto name : kBankKernels) {
        const bool residue = name == "sharpen";
        const ResponsePlane plane = convolve(blurred, named_kernel(name), BorderPolicy::Replicate);
        std::fill(cell_sum.begin(), cell_sum.end(), 0.0);
        std::fill(cell_count.begin(), cell_count.end(), 0.0);
        for (int y = 0; y < n; ++y) {
            const int cy = y * g / n;
            for (int x = 0; x < n; ++x) {
                const int cx = x * g / n;
                double v = plane.at(x, y);
                if (residue) v -= blurred.at(x, y);
                const auto cell = static_cast<std::size_t>(cy * g + cx);
                cell_sum[cell] += std::abs(v);
                cell_count[cell] += 1.0;
            }
        }
        for (std::size_t c = 0; c < cell_sum.size(); ++c) {
            features.push_back(std::clamp(cell_sum[c] / cell_count[c] / kEdgeScale, 0.0, 1.0));
        }
    }

    const auto pixels = blurred.intensities();
    double sum = 0.0;
    for (const auto v : pixels) sum += v;
    const double mean = sum / static_cast<double>(pixels.size());
    double sq = 0.0;
    for (const auto v : pixels) sq += (v - mean) * (v - mean);
    const double stddev = std::sqrt(sq / static_cast<double>(pixels.size()));
    features.push_back(std::clamp(mean / 255.0, 0.0, 1.0));
    features.push_back(std::clamp(stddev / 255.0, 0.0, 1.0));
    return features;
}

std::vector<FeatureVector> extract_features(std::span<const RgbImage> images,
                                            const ExtractorConfig& config) {
    std::vector<FeatureVector> out;
    out.reserve(images.size());
    for (const auto& image : images) out.push_back(extract_features(image, config));
    return out;
}

}  // namespace gearlens
