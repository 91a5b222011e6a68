#pragma once

#include <span>
#include <vector>

#include "gearlens/filters.hpp"
#include "gearlens/image.hpp"

namespace gearlens {

/// Fixed (untrained) feature extractor: filter-bank magnitudes pooled over a
/// square grid, plus global intensity statistics.
struct ExtractorConfig {
    int canonical_size = 128;
    GaussianSpec blur = GaussianSpec::isotropic(1.0);
    int grid = 4;

    void validate() const;
    // 4 * grid^2 + 2
    int dimension() const noexcept { return 4 * grid * grid + 2; }

    friend bool operator==(const ExtractorConfig&, const ExtractorConfig&) = default;
};

using FeatureVector = std::vector<double>;

// Bilinear resampling with pixel-centre alignment and replicated edges.
RgbImage resize_bilinear(const RgbImage& image, int width, int height);

// Layout: for each kernel in (sobel_x, sobel_y, laplacian, sharpen), grid^2
// cell means of |response| / 63.75 in raster order; then mean / 255 and
// population standard deviation / 255 of the blurred grayscale image. The
// sharpen channel uses |sharpen response - blurred|, the detail it adds.
// Every component is clipped to [0, 1].
FeatureVector extract_features(const RgbImage& image, const ExtractorConfig& config);

// Same as extract_features, element-wise over a batch.
std::vector<FeatureVector> extract_features(std::span<const RgbImage> images,
                                            const ExtractorConfig& config);

}  // namespace gearlens
