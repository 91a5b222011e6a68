#include "gearlens/filters.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "gearlens/error.hpp"

namespace gearlens {

namespace {

inline int clamp_index(int i, int n) { return std::clamp(i, 0, n - 1); }

// 1-D correlation of one row/column of doubles with replicated ends.
void correlate_line(const double* src, double* dst, int n, std::ptrdiff_t stride,
                    const std::vector<double>& taps) {
    const int r = static_cast<int>(taps.size() / 2);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int k = -r; k <= r; ++k) {
            acc += taps[static_cast<std::size_t>(k + r)] * src[clamp_index(i + k, n) * stride];
        }
        dst[i * stride] = acc;
    }
}

// Separable blur of one interleaved channel plane; `stride` is the channel count.
template <typename Bytes>
void blur_channel(Bytes pixels, int width, int height, int channels, int channel,
                  const GaussianKernels& kernels) {
    const std::size_t count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    std::vector<double> plane(count);
    std::vector<double> tmp(count);
    for (std::size_t i = 0; i < count; ++i) {
        plane[i] = pixels[i * static_cast<std::size_t>(channels) + static_cast<std::size_t>(channel)];
    }
    for (int y = 0; y < height; ++y) {
        const std::size_t row = static_cast<std::size_t>(y) * static_cast<std::size_t>(width);
        correlate_line(plane.data() + row, tmp.data() + row, width, 1, kernels.horizontal);
    }
    for (int x = 0; x < width; ++x) {
        correlate_line(tmp.data() + x, plane.data() + x, height, width, kernels.vertical);
    }
    for (std::size_t i = 0; i < count; ++i) {
        pixels[i * static_cast<std::size_t>(channels) + static_cast<std::size_t>(channel)] =
            quantize(plane[i]);
    }
}

std::vector<double> sampled_gaussian(double sigma, int size) {
    std::vector<double> taps(static_cast<std::size_t>(size));
    const int r = size / 2;
    for (int k = -r; k <= r; ++k) {
        taps[static_cast<std::size_t>(k + r)] = std::exp(-(k * k) / (2.0 * sigma * sigma));
    }
    // Sum in symmetric pairs from the tails inward so w[k] == w[-k] survives division.
    double sum = taps[static_cast<std::size_t>(r)];
    for (int k = r; k >= 1; --k) sum += 2.0 * taps[static_cast<std::size_t>(r + k)];
    for (double& t : taps) t /= sum;
    return taps;
}

}  // namespace

Kernel::Kernel(std::string name, int size, std::vector<double> weights)
    : name_(std::move(name)), size_(size), weights_(std::move(weights)) {
    if (size_ < 1 || size_ % 2 == 0) {
        throw Error("kernel '" + name_ + "' size must be odd and >= 1, got " + std::to_string(size_));
    }
    if (weights_.size() != static_cast<std::size_t>(size_) * static_cast<std::size_t>(size_)) {
        throw Error("kernel '" + name_ + "' needs " + std::to_string(size_ * size_) + " weights");
    }
}

double Kernel::weight_sum() const noexcept {
    return std::accumulate(weights_.begin(), weights_.end(), 0.0);
}

Kernel Kernel::identity(int size) {
    std::vector<double> w(static_cast<std::size_t>(size) * static_cast<std::size_t>(size), 0.0);
    w[w.size() / 2] = 1.0;
    return Kernel("identity", size, std::move(w));
}

Kernel named_kernel(std::string_view name) {
    if (name == "sobel_x") return Kernel("sobel_x", 3, {-1, 0, 1, -2, 0, 2, -1, 0, 1});
    if (name == "sobel_y") return Kernel("sobel_y", 3, {-1, -2, -1, 0, 0, 0, 1, 2, 1});
    if (name == "laplacian") return Kernel("laplacian", 3, {0, 1, 0, 1, -4, 1, 0, 1, 0});
    if (name == "sharpen") return Kernel("sharpen", 3, {0, -1, 0, -1, 5, -1, 0, -1, 0});
    throw Error("unknown kernel '" + std::string(name) +
                "' (expected sobel_x, sobel_y, laplacian or sharpen)");
}

void GaussianSpec::validate() const {
    if (!(sigma_x > 0.0) || !(sigma_y > 0.0) || !std::isfinite(sigma_x) || !std::isfinite(sigma_y)) {
        throw Error("gaussian sigma must be finite and > 0");
    }
    for (const auto& size : {size_x, size_y}) {
        if (size && (*size < 1 || *size % 2 == 0)) {
            throw Error("gaussian kernel size must be odd and >= 1, got " + std::to_string(*size));
        }
    }
}

int default_gaussian_size(double sigma) {
    return 2 * static_cast<int>(std::ceil(3.0 * sigma)) + 1;
}

ResponsePlane convolve(const GrayImage& image, const Kernel& kernel, BorderPolicy border) {
    const int w = image.width();
    const int h = image.height();
    const int n = kernel.size();
    const int c = kernel.radius();
    ResponsePlane out{w, h, std::vector<double>(static_cast<std::size_t>(w) * static_cast<std::size_t>(h))};

    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            double acc = 0.0;
            for (int i = 0; i < n; ++i) {
                int sy = y + i - c;
                if (border == BorderPolicy::Zero && (sy < 0 || sy >= h)) continue;
                sy = clamp_index(sy, h);
                for (int j = 0; j < n; ++j) {
                    int sx = x + j - c;
                    if (border == BorderPolicy::Zero && (sx < 0 || sx >= w)) continue;
                    sx = clamp_index(sx, w);
                    acc += kernel.at(i, j) * image.at(sx, sy);
                }
            }
            out.values[static_cast<std::size_t>(y) * static_cast<std::size_t>(w) +
                       static_cast<std::size_t>(x)] = acc;
        }
    }
    return out;
}

std::uint8_t quantize(double value) noexcept {
    const double r = std::floor(value + 0.5);
    if (!(r > 0.0)) return 0;
    if (r >= 255.0) return 255;
    return static_cast<std::uint8_t>(r);
}

GrayImage response_to_gray(const ResponsePlane& plane, IntensityMapping mapping) {
    GrayImage out(plane.width, plane.height);
    auto dst = out.intensities();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const double v = plane.values[i];
        dst[i] = quantize(mapping == IntensityMapping::AbsClamp ? std::abs(v) : v);
    }
    return out;
}

GaussianKernels make_gaussian_kernels(const GaussianSpec& spec) {
    spec.validate();
    const int sx = spec.size_x.value_or(default_gaussian_size(spec.sigma_x));
    const int sy = spec.size_y.value_or(default_gaussian_size(spec.sigma_y));
    return {sampled_gaussian(spec.sigma_x, sx), sampled_gaussian(spec.sigma_y, sy)};
}

GrayImage gaussian_blur(const GrayImage& image, const GaussianSpec& spec) {
    const auto kernels = make_gaussian_kernels(spec);
    GrayImage out = image;
    blur_channel(out.intensities(), out.width(), out.height(), 1, 0, kernels);
    return out;
}

RgbImage gaussian_blur(const RgbImage& image, const GaussianSpec& spec) {
    const auto kernels = make_gaussian_kernels(spec);
    RgbImage out = image;
    for (int ch = 0; ch < 3; ++ch) {
        blur_channel(out.channels(), out.width(), out.height(), 3, ch, kernels);
    }
    return out;
}

GrayImage apply_bank_kernel(const GrayImage& image, std::string_view kernel_name,
                            const GaussianSpec& blur) {
    const Kernel kernel = named_kernel(kernel_name);
    const GrayImage blurred = gaussian_blur(image, blur);
    const auto mapping = kernel.name() == "sharpen" ? IntensityMapping::Clamp : IntensityMapping::AbsClamp;
    return response_to_gray(convolve(blurred, kernel, BorderPolicy::Replicate), mapping);
}

FilterBankOutput apply_filter_bank(const GrayImage& image, const GaussianSpec& blur) {
    const GrayImage blurred = gaussian_blur(image, blur);
    FilterBankOutput out;
    for (const auto name : kBankKernels) {
        const Kernel kernel = named_kernel(name);
        const auto mapping = name == "sharpen" ? IntensityMapping::Clamp : IntensityMapping::AbsClamp;
        out.emplace(std::string(name),
                    response_to_gray(convolve(blurred, kernel, BorderPolicy::Replicate), mapping));
    }
    return out;
}

GrayImage sobel_magnitude(const GrayImage& image, const GaussianSpec& blur) {
    const GrayImage blurred = gaussian_blur(image, blur);
    const ResponsePlane gx = convolve(blurred, named_kernel("sobel_x"), BorderPolicy::Replicate);
    const ResponsePlane gy = convolve(blurred, named_kernel("sobel_y"), BorderPolicy::Replicate);
    ResponsePlane mag{gx.width, gx.height, std::vector<double>(gx.values.size())};
    for (std::size_t i = 0; i < mag.values.size(); ++i) mag.values[i] = std::hypot(gx.values[i], gy.values[i]);
    return response_to_gray(mag, IntensityMapping::AbsClamp);
}

}  // namespace gearlens
