#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "gearlens/image.hpp"

namespace gearlens {

/// Square, odd-sized correlation kernel with row-major weights.
class Kernel {
public:
    Kernel(std::string name, int size, std::vector<double> weights);

    const std::string& name() const noexcept { return name_; }
    int size() const noexcept { return size_; }
    int radius() const noexcept { return size_ / 2; }
    double at(int row, int col) const { return weights_[static_cast<std::size_t>(row * size_ + col)]; }
    const std::vector<double>& weights() const noexcept { return weights_; }
    double weight_sum() const noexcept;

    static Kernel identity(int size = 3);

    friend bool operator==(const Kernel&, const Kernel&) = default;

private:
    std::string name_;
    int size_;
    std::vector<double> weights_;
};

/// Names of the fixed kernel bank, in canonical order.
inline constexpr std::array<std::string_view, 4> kBankKernels = {"sobel_x", "sobel_y", "laplacian",
                                                                 "sharpen"};

// One of sobel_x, sobel_y, laplacian, sharpen (3x3). Throws Error otherwise.
//   sobel_x   [-1 0 1; -2 0 2; -1 0 1]
//   sobel_y   [-1 -2 -1; 0 0 0; 1 2 1]
//   laplacian [0 1 0; 1 -4 1; 0 1 0]   five-point stencil of d2/dx2 + d2/dy2
//   sharpen   [0 -1 0; -1 5 -1; 0 -1 0] identity minus laplacian
Kernel named_kernel(std::string_view name);

enum class BorderPolicy { Replicate, Zero };

// Display mapping from real responses to 8-bit intensities.
enum class IntensityMapping {
    Clamp,     // round, clip to [0, 255]
    AbsClamp,  // |v|, round, clip to [0, 255]
};

struct GaussianSpec {
    double sigma_x = 1.0;
    double sigma_y = 1.0;
    std::optional<int> size_x;  // odd; default 2*ceil(3*sigma)+1
    std::optional<int> size_y;

    // Throws Error on non-positive sigma or an even / non-positive size.
    void validate() const;

    static GaussianSpec isotropic(double sigma) { return {sigma, sigma, std::nullopt, std::nullopt}; }

    friend bool operator==(const GaussianSpec&, const GaussianSpec&) = default;
};

int default_gaussian_size(double sigma);

/// Real-valued filter output, same raster layout as the image it came from.
struct ResponsePlane {
    int width = 0;
    int height = 0;
    std::vector<double> values;

    double at(int x, int y) const { return values[static_cast<std::size_t>(y) * width + x]; }
};

// Cross-correlation (no kernel flip), the usual computer-vision convention:
//   out(x, y) = sum_ij k[i][j] * I(x + j - c, y + i - c),  c = radius.
// Out-of-range samples come from the border policy. No clamping.
ResponsePlane convolve(const GrayImage& image, const Kernel& kernel,
                       BorderPolicy border = BorderPolicy::Replicate);

GrayImage response_to_gray(const ResponsePlane& plane, IntensityMapping mapping);

struct GaussianKernels {
    std::vector<double> horizontal;
    std::vector<double> vertical;
};

// Sampled Gaussians, symmetric, each normalized to sum 1.
GaussianKernels make_gaussian_kernels(const GaussianSpec& spec);

// Horizontal pass then vertical pass with replicated borders; rounding to
// 8 bits happens once, after both passes. Colour channels are independent.
GrayImage gaussian_blur(const GrayImage& image, const GaussianSpec& spec);
RgbImage gaussian_blur(const RgbImage& image, const GaussianSpec& spec);

using FilterBankOutput = std::map<std::string, GrayImage, std::less<>>;

// Blur, then the four bank kernels with replicated borders. Sobel and
// Laplacian responses are shown as magnitudes (AbsClamp); sharpen is clamped.
FilterBankOutput apply_filter_bank(const GrayImage& image, const GaussianSpec& blur);

// Single bank kernel through the same blur and display mapping as apply_filter_bank.
GrayImage apply_bank_kernel(const GrayImage& image, std::string_view kernel_name,
                            const GaussianSpec& blur);

// Blur, then hypot(sobel_x, sobel_y) per pixel, AbsClamp-mapped.
GrayImage sobel_magnitude(const GrayImage& image, const GaussianSpec& blur);

// Round half up, then clip to [0, 255].
std::uint8_t quantize(double value) noexcept;

}  // namespace gearlens
