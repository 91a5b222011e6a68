#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <string_view>

#include "gearlens/classifier.hpp"
#include "gearlens/filters.hpp"

namespace gearlens {

enum class Decision { Keep, Discard };

std::string_view decision_name(Decision decision) noexcept;

struct InspectionReport {
    Probabilities probabilities;
    Label predicted = Label::BrokenGear;
    Decision decision = Decision::Discard;
    std::map<std::string, std::filesystem::path, std::less<>> filtered_paths;  // kernel name -> file
};

// "<stem>_<kernel>.pgm"
std::string filtered_file_name(std::string_view stem, std::string_view kernel);

// Writes the four filter-bank images of the grayscale input into
// `output_dir` for the operator, then classifies the colour image. A gear
// predicted broken is discarded.
InspectionReport inspect(const RgbImage& image, const SoftmaxHead& head, const GaussianSpec& blur,
                         const std::filesystem::path& output_dir, std::string_view stem);

// Four LF-terminated lines in the retrained-model console format. The two
// probability lines are ordered by descending probability (normal first on a
// tie); values print as the shortest decimal that round-trips the 32-bit float.
std::string format_report(const Probabilities& probs);

}  // namespace gearlens
