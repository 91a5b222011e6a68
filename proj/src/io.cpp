#include "gearlens/io.hpp"

#include <fstream>
#include <iterator>
#include <system_error>

#include "gearlens/error.hpp"

namespace gearlens {

namespace fs = std::filesystem;

std::vector<std::uint8_t> read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string());
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                    std::istreambuf_iterator<char>());
    if (in.bad()) throw Error("read failed: " + path.string());
    return bytes;
}

void write_file(const fs::path& path, std::span<const std::uint8_t> bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write " + path.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw Error("write failed: " + path.string());
}

void write_file(const fs::path& path, std::string_view text) {
    write_file(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

AnyImage load_image_file(const fs::path& path) {
    const auto bytes = read_file(path);
    try {
        return load_pnm(bytes);
    } catch (const Error& e) {
        throw Error(path.string() + ": " + e.what());
    }
}

RgbImage load_rgb_file(const fs::path& path) {
    auto image = load_image_file(path);
    if (auto* gray = std::get_if<GrayImage>(&image)) return gray_to_rgb(*gray);
    return std::get<RgbImage>(std::move(image));
}

void ensure_directory(const fs::path& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw Error("cannot use output directory " + dir.string() +
                    (ec ? ": " + ec.message() : std::string()));
    }
}

}  // namespace gearlens
