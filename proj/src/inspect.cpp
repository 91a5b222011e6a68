#include "gearlens/inspect.hpp"

#include "gearlens/error.hpp"
#include "gearlens/io.hpp"

namespace gearlens {

std::string_view decision_name(Decision decision) noexcept {
    return decision == Decision::Keep ? "keep" : "discard";
}

std::string filtered_file_name(std::string_view stem, std::string_view kernel) {
    return std::string(stem) + "_" + std::string(kernel) + ".pgm";
}

InspectionReport inspect(const RgbImage& image, const SoftmaxHead& head, const GaussianSpec& blur,
                         const std::filesystem::path& output_dir, std::string_view stem) {
    ensure_directory(output_dir);

    InspectionReport report;
    for (const auto& [name, filtered] : apply_filter_bank(rgb_to_gray(image), blur)) {
        const auto path = output_dir / filtered_file_name(stem, name);
        write_file(path, save_pnm(filtered));
        report.filtered_paths.emplace(name, path);
    }

    report.probabilities = predict(head, image);
    report.predicted = classify(report.probabilities);
    report.decision = report.predicted == Label::BrokenGear ? Decision::Discard : Decision::Keep;
    return report;
}

std::string format_report(const Probabilities& probs) {
    if (probs.size() != 2) throw Error("report expects two-class probabilities");
    const double normal = probs[Label::NormalGear];
    const double broken = probs[Label::BrokenGear];
    const auto line = [](Label label, double p) {
        return "[INFO]Probability that the given image is a " + std::string(label_name(label)) +
               " is: " + shortest_decimal(static_cast<float>(p)) + "\n";
    };

    std::string out = "[INFO]The results of the retrained model are as follows:\n";
    if (broken > normal) {
        out += line(Label::BrokenGear, broken) + line(Label::NormalGear, normal);
    } else {
        out += line(Label::NormalGear, normal) + line(Label::BrokenGear, broken);
    }
    out += "[INFO]The given component is a: " + std::string(label_name(classify(probs))) + "\n";
    return out;
}

}  // namespace gearlens
