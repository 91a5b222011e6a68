#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace gearlens {

// Largest accepted width or height.
inline constexpr int kMaxImageSide = 1 << 16;

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Single-channel 8-bit raster, row-major.
class GrayImage {
public:
    GrayImage(int width, int height, std::uint8_t fill = 0);
    GrayImage(int width, int height, std::vector<std::uint8_t> intensities);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t size() const noexcept { return data_.size(); }

    std::uint8_t at(int x, int y) const { return data_[index(x, y)]; }
    void set(int x, int y, std::uint8_t v) { data_[index(x, y)] = v; }

    std::span<const std::uint8_t> intensities() const noexcept { return data_; }
    std::span<std::uint8_t> intensities() noexcept { return data_; }

    friend bool operator==(const GrayImage&, const GrayImage&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

/// Three-channel 8-bit raster, row-major, channels interleaved R,G,B.
class RgbImage {
public:
    RgbImage(int width, int height, Rgb fill = {});
    // `channels` holds width*height*3 interleaved bytes.
    RgbImage(int width, int height, std::vector<std::uint8_t> channels);

    int width() const noexcept { return width_; }
    int height() const noexcept { return height_; }
    std::size_t pixel_count() const noexcept { return data_.size() / 3; }

    Rgb at(int x, int y) const {
        const std::size_t i = index(x, y);
        return {data_[i], data_[i + 1], data_[i + 2]};
    }
    void set(int x, int y, Rgb p) {
        const std::size_t i = index(x, y);
        data_[i] = p.r;
        data_[i + 1] = p.g;
        data_[i + 2] = p.b;
    }

    std::span<const std::uint8_t> channels() const noexcept { return data_; }
    std::span<std::uint8_t> channels() noexcept { return data_; }

    friend bool operator==(const RgbImage&, const RgbImage&) = default;

private:
    std::size_t index(int x, int y) const {
        return (static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
                static_cast<std::size_t>(x)) * 3;
    }

    int width_;
    int height_;
    std::vector<std::uint8_t> data_;
};

using AnyImage = std::variant<GrayImage, RgbImage>;

// Rec. 601 luma, rounded half up: (299 R + 587 G + 114 B) / 1000.
GrayImage rgb_to_gray(const RgbImage& image);

// Channel replication R = G = B = intensity.
RgbImage gray_to_rgb(const GrayImage& image);

// Decodes binary PNM. P5 yields a GrayImage, P6 an RgbImage. Only maxval 255
// is accepted. Failures throw ParseError carrying the byte offset.
AnyImage load_pnm(std::span<const std::uint8_t> bytes);

// Canonical encoding: "<magic>\n<w> <h>\n255\n" followed by the raster.
std::vector<std::uint8_t> save_pnm(const GrayImage& image);
std::vector<std::uint8_t> save_pnm(const RgbImage& image);
std::vector<std::uint8_t> save_pnm(const AnyImage& image);

}  // namespace gearlens
