#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gearlens {

// Base class for every domain failure (bad image, bad manifest, bad model,
// violated precondition). The CLI maps these to exit status 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A parse failure at a known position: a byte offset for binary formats,
// a 1-based line number for the text formats.
class ParseError : public Error {
public:
    enum class Unit { Byte, Line };

    ParseError(Unit unit, std::size_t position, const std::string& message)
        : Error(describe(unit, position, message)), unit_(unit), position_(position) {}

    Unit unit() const noexcept { return unit_; }
    std::size_t position() const noexcept { return position_; }

private:
    static std::string describe(Unit unit, std::size_t position, const std::string& message) {
        return (unit == Unit::Byte ? "byte " : "line ") + std::to_string(position) + ": " + message;
    }

    Unit unit_;
    std::size_t position_;
};

}  // namespace gearlens
