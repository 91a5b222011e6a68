#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "gearlens/dataset.hpp"
#include "gearlens/features.hpp"

namespace gearlens {

/// Class-probability distribution, indexed like the head's class list.
class Probabilities {
public:
    Probabilities() = default;
    explicit Probabilities(std::vector<double> values) : values_(std::move(values)) {}

    // Two-class convenience: (P(normal gear), P(broken gear)).
    static Probabilities of(double normal, double broken) { return Probabilities({normal, broken}); }

    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    double operator[](Label label) const { return values_[static_cast<std::size_t>(label)]; }
    const std::vector<double>& values() const noexcept { return values_; }

    friend bool operator==(const Probabilities&, const Probabilities&) = default;

private:
    std::vector<double> values_;
};

/// The trainable final layer: logits = W x + b, probabilities = softmax(logits).
struct SoftmaxHead {
    std::vector<std::string> class_names{"normal gear", "broken gear"};
    ExtractorConfig extractor;
    std::vector<double> weights;  // classes x dimension, row-major
    std::vector<double> bias;     // classes

    // Zero weights and bias sized for `extractor`.
    static SoftmaxHead zeros(const ExtractorConfig& extractor);

    std::size_t classes() const noexcept { return bias.size(); }
    std::size_t dimension() const noexcept { return bias.empty() ? 0 : weights.size() / bias.size(); }
    double& weight(std::size_t c, std::size_t d) { return weights[c * dimension() + d]; }
    double weight(std::size_t c, std::size_t d) const { return weights[c * dimension() + d]; }

    std::vector<double> logits(std::span<const double> features) const;

    friend bool operator==(const SoftmaxHead&, const SoftmaxHead&) = default;
};

struct Sample {
    FeatureVector features;
    Label label;
};

inline constexpr double kCrossEntropyFloor = 1e-12;

// Max-subtracted softmax. Throws Error on empty or non-finite input.
Probabilities softmax(std::span<const double> logits);

// -ln(max(p_true, 1e-12))
double cross_entropy(const Probabilities& probs, Label true_label);

struct LossGradient {
    double loss = 0.0;            // mean cross-entropy
    std::vector<double> d_weights;  // same layout as SoftmaxHead::weights
    std::vector<double> d_bias;
};

// Mean cross-entropy over the batch and its gradient:
// dW = mean((p - y) x^T), db = mean(p - y), y one-hot.
LossGradient loss_and_grad(const SoftmaxHead& head, std::span<const Sample> batch);

struct TrainConfig {
    int steps = 1000;
    double learning_rate = 0.1;
    std::uint64_t seed = 42;
    int eval_interval = 10;
    SplitRatios ratios{};

    void validate() const;
};

struct StepRecord {
    int step = 0;  // 1-based; metrics of the head after `step` updates
    double cross_entropy = 0.0;
    double accuracy = 0.0;
};

struct TrainingTrace {
    std::vector<StepRecord> train;       // one per step
    std::vector<StepRecord> validation;  // every eval_interval steps and at the last step
};

struct TrainResult {
    SoftmaxHead head;
    TrainingTrace trace;
    std::optional<double> test_accuracy;       // absent when the test part is empty
    std::optional<double> test_cross_entropy;
    SplitSizes sizes;
};

// Full-batch gradient descent from zero weights on the training part; test
// metrics computed once at the end.
TrainResult train(std::vector<LabeledImage> items, const TrainConfig& config,
                  const ExtractorConfig& extractor);

// Same loop on precomputed samples; no split, no test evaluation.
TrainingTrace train_samples(SoftmaxHead& head, std::span<const Sample> train_set,
                            std::span<const Sample> validation_set, const TrainConfig& config);

Probabilities predict(const SoftmaxHead& head, const RgbImage& image);
Probabilities predict_features(const SoftmaxHead& head, std::span<const double> features);

// The class whose probability exceeds 0.5; an exact 0.5 tie goes to BrokenGear.
Label classify(const Probabilities& probs);

struct Evaluation {
    double accuracy = 0.0;
    double cross_entropy = 0.0;
};

Evaluation evaluate(const SoftmaxHead& head, std::span<const LabeledImage> items);
Evaluation evaluate_samples(const SoftmaxHead& head, std::span<const Sample> samples);

// Text model format, version 1:
//   gearlens-model v1
//   classes\tnormal gear\tbroken gear
//   <canonical_size> <grid> <sigma_x> <sigma_y> <size_x|-> <size_y|->
//   one line per class: D weights then the bias, space-separated
// Reals are written as shortest round-trip decimals.
std::string format_model(const SoftmaxHead& head);
SoftmaxHead parse_model(std::string_view text);
void save_model(const SoftmaxHead& head, const std::filesystem::path& path);
SoftmaxHead load_model(const std::filesystem::path& path);

// Shortest decimal that parses back to exactly `value`.
std::string shortest_decimal(double value);
std::string shortest_decimal(float value);

}  // namespace gearlens
