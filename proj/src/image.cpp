#include "gearlens/image.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "gearlens/error.hpp"

namespace gearlens {

namespace {

void check_dimensions(int width, int height) {
    if (width < 1 || height < 1 || width > kMaxImageSide || height > kMaxImageSide) {
        throw Error("image dimensions " + std::to_string(width) + "x" + std::to_string(height) +
                    " out of range [1, " + std::to_string(kMaxImageSide) + "]");
    }
}

std::size_t area(int width, int height) {
    return static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
}

class HeaderReader {
public:
    explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

    std::size_t offset() const noexcept { return pos_; }
    // Where the most recent read_number token began.
    std::size_t token_start() const noexcept { return token_start_; }

    // Skips whitespace and '#' comments, then reads an unsigned decimal token.
    long read_number(const char* what) {
        skip_separators();
        const std::size_t start = pos_;
        token_start_ = start;
        if (pos_ >= bytes_.size()) {
            throw ParseError(ParseError::Unit::Byte, start,
                             std::string("unexpected end of header reading ") + what);
        }
        long value = 0;
        while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
            value = value * 10 + (bytes_[pos_] - '0');
            if (value > 10'000'000) {
                throw ParseError(ParseError::Unit::Byte, start, std::string(what) + " is too large");
            }
            ++pos_;
        }
        if (pos_ == start) {
            throw ParseError(ParseError::Unit::Byte, start,
                             std::string("malformed ") + what + " token");
        }
        if (pos_ < bytes_.size() && !is_space(bytes_[pos_]) && bytes_[pos_] != '#') {
            throw ParseError(ParseError::Unit::Byte, pos_,
                             std::string("malformed ") + what + " token");
        }
        return value;
    }

    // The single whitespace byte separating maxval from the raster.
    void read_raster_separator() {
        if (pos_ >= bytes_.size() || !is_space(bytes_[pos_])) {
            throw ParseError(ParseError::Unit::Byte, pos_, "expected whitespace before raster");
        }
        ++pos_;
    }

private:
    static bool is_space(std::uint8_t c) {
        return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' || c == '\f';
    }

    void skip_separators() {
        while (pos_ < bytes_.size()) {
            if (is_space(bytes_[pos_])) {
                ++pos_;
            } else if (bytes_[pos_] == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
            } else {
                break;
            }
        }
    }

    std::span<const std::uint8_t> bytes_;
    std::size_t pos_ = 2;
    std::size_t token_start_ = 2;
};

std::vector<std::uint8_t> encode(char magic, int width, int height,
                                 std::span<const std::uint8_t> raster) {
    const std::string header = std::string("P") + magic + "\n" + std::to_string(width) + " " +
                               std::to_string(height) + "\n255\n";
    std::vector<std::uint8_t> out;
    out.reserve(header.size() + raster.size());
    out.insert(out.end(), header.begin(), header.end());
    out.insert(out.end(), raster.begin(), raster.end());
    return out;
}

}  // namespace

GrayImage::GrayImage(int width, int height, std::uint8_t fill)
    : width_(width), height_(height) {
    check_dimensions(width, height);
    data_.assign(area(width, height), fill);
}

GrayImage::GrayImage(int width, int height, std::vector<std::uint8_t> intensities)
    : width_(width), height_(height), data_(std::move(intensities)) {
    check_dimensions(width, height);
    if (data_.size() != area(width, height)) {
        throw Error("gray image needs " + std::to_string(area(width, height)) +
                    " intensities, got " + std::to_string(data_.size()));
    }
}

RgbImage::RgbImage(int width, int height, Rgb fill) : width_(width), height_(height) {
    check_dimensions(width, height);
    data_.resize(area(width, height) * 3);
    for (std::size_t i = 0; i < data_.size(); i += 3) {
        data_[i] = fill.r;
        data_[i + 1] = fill.g;
        data_[i + 2] = fill.b;
    }
}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> channels)
    : width_(width), height_(height), data_(std::move(channels)) {
    check_dimensions(width, height);
    if (data_.size() != area(width, height) * 3) {
        throw Error("rgb image needs " + std::to_string(area(width, height) * 3) +
                    " channel values, got " + std::to_string(data_.size()));
    }
}

GrayImage rgb_to_gray(const RgbImage& image) {
    GrayImage out(image.width(), image.height());
    const auto src = image.channels();
    auto dst = out.intensities();
    for (std::size_t i = 0; i < dst.size(); ++i) {
        const unsigned weighted = 299u * src[3 * i] + 587u * src[3 * i + 1] + 114u * src[3 * i + 2];
        dst[i] = static_cast<std::uint8_t>((weighted + 500u) / 1000u);
    }
    return out;
}

RgbImage gray_to_rgb(const GrayImage& image) {
    RgbImage out(image.width(), image.height());
    const auto src = image.intensities();
    auto dst = out.channels();
    for (std::size_t i = 0; i < src.size(); ++i) {
        dst[3 * i] = dst[3 * i + 1] = dst[3 * i + 2] = src[i];
    }
    return out;
}

AnyImage load_pnm(std::span<const std::uint8_t> bytes) {
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '5' && bytes[1] != '6')) {
        throw ParseError(ParseError::Unit::Byte, 0, "unknown magic (expected P5 or P6)");
    }
    const bool color = bytes[1] == '6';
    if (bytes.size() < 3 || (bytes[2] != ' ' && bytes[2] != '\t' && bytes[2] != '\n' &&
                             bytes[2] != '\r' && bytes[2] != '#')) {
        throw ParseError(ParseError::Unit::Byte, 2, "expected whitespace after magic");
    }

    HeaderReader header(bytes);
    const long width = header.read_number("width");
    const std::size_t width_at = header.token_start();
    const long height = header.read_number("height");
    if (width < 1 || height < 1 || width > kMaxImageSide || height > kMaxImageSide) {
        throw ParseError(ParseError::Unit::Byte, width_at,
                         "dimensions " + std::to_string(width) + "x" + std::to_string(height) +
                             " out of range");
    }
    const long maxval = header.read_number("maxval");
    if (maxval != 255) {
        throw ParseError(ParseError::Unit::Byte, header.token_start(),
                         "unsupported maxval " + std::to_string(maxval) + " (only 255)");
    }
    header.read_raster_separator();

    const std::size_t start = header.offset();
    const std::size_t needed = area(static_cast<int>(width), static_cast<int>(height)) * (color ? 3 : 1);
    if (bytes.size() - start < needed) {
        throw ParseError(ParseError::Unit::Byte, bytes.size(),
                         "truncated raster: need " + std::to_string(needed) + " bytes, have " +
                             std::to_string(bytes.size() - start));
    }
    std::vector<std::uint8_t> raster(bytes.begin() + static_cast<std::ptrdiff_t>(start),
                                     bytes.begin() + static_cast<std::ptrdiff_t>(start + needed));
    if (color) {
        return RgbImage(static_cast<int>(width), static_cast<int>(height), std::move(raster));
    }
    return GrayImage(static_cast<int>(width), static_cast<int>(height), std::move(raster));
}

std::vector<std::uint8_t> save_pnm(const GrayImage& image) {
    return encode('5', image.width(), image.height(), image.intensities());
}

std::vector<std::uint8_t> save_pnm(const RgbImage& image) {
    return encode('6', image.width(), image.height(), image.channels());
}

std::vector<std::uint8_t> save_pnm(const AnyImage& image) {
    return std::visit([](const auto& img) { return save_pnm(img); }, image);
}

}  // namespace gearlens
