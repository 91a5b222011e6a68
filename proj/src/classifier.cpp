#include "gearlens/classifier.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>
#include <system_error>

#include "gearlens/error.hpp"
#include "gearlens/io.hpp"

namespace gearlens {

namespace {

constexpr std::string_view kModelMagic = "gearlens-model v1";

std::vector<Sample> to_samples(std::span<const LabeledImage> items, const ExtractorConfig& config) {
    std::vector<Sample> out;
    out.reserve(items.size());
    for (const auto& item : items) out.push_back({extract_features(item.image, config), item.label});
    return out;
}

void check_dimension(const SoftmaxHead& head, std::span<const double> features) {
    if (features.size() != head.dimension()) {
        throw Error("feature dimension " + std::to_string(features.size()) +
                    " does not match head dimension " + std::to_string(head.dimension()));
    }
}

std::vector<std::string_view> split_on(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    for (std::size_t start = 0;;) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        if (pos == std::string_view::npos) return out;
        start = pos + 1;
    }
}

std::vector<std::string_view> tokens(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
        const std::size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line_no, const char* what) {
    T value{};
    const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || end != token.data() + token.size()) {
        throw ParseError(ParseError::Unit::Line, line_no,
                         std::string("unparsable ") + what + " '" + std::string(token) + "'");
    }
    if constexpr (std::is_floating_point_v<T>) {
        if (!std::isfinite(value)) {
            throw ParseError(ParseError::Unit::Line, line_no, std::string("non-finite ") + what);
        }
    }
    return value;
}

}  // namespace

SoftmaxHead SoftmaxHead::zeros(const ExtractorConfig& extractor) {
    extractor.validate();
    SoftmaxHead head;
    head.extractor = extractor;
    head.weights.assign(static_cast<std::size_t>(kClassCount * extractor.dimension()), 0.0);
    head.bias.assign(kClassCount, 0.0);
    return head;
}

std::vector<double> SoftmaxHead::logits(std::span<const double> features) const {
    check_dimension(*this, features);
    const std::size_t d = dimension();
    std::vector<double> z(bias);
    for (std::size_t c = 0; c < z.size(); ++c) {
        const double* row = weights.data() + c * d;
        for (std::size_t k = 0; k < d; ++k) z[c] += row[k] * features[k];
    }
    return z;
}

Probabilities softmax(std::span<const double> logits) {
    if (logits.empty()) throw Error("softmax of an empty logit vector");
    for (const double z : logits) {
        if (!std::isfinite(z)) throw Error("softmax of a non-finite logit");
    }
    const double top = *std::max_element(logits.begin(), logits.end());
    std::vector<double> p(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
        p[i] = std::exp(logits[i] - top);
        sum += p[i];
    }
    for (double& v : p) v /= sum;
    return Probabilities(std::move(p));
}

double cross_entropy(const Probabilities& probs, Label true_label) {
    return -std::log(std::max(probs[true_label], kCrossEntropyFloor));
}

LossGradient loss_and_grad(const SoftmaxHead& head, std::span<const Sample> batch) {
    if (batch.empty()) throw Error("loss_and_grad needs a non-empty batch");
    const std::size_t classes = head.classes();
    const std::size_t d = head.dimension();

    LossGradient out;
    out.d_weights.assign(head.weights.size(), 0.0);
    out.d_bias.assign(classes, 0.0);
    for (const auto& sample : batch) {
        const Probabilities p = softmax(head.logits(sample.features));
        out.loss += cross_entropy(p, sample.label);
        for (std::size_t c = 0; c < classes; ++c) {
            const double err = p[c] - (c == static_cast<std::size_t>(sample.label) ? 1.0 : 0.0);
            double* row = out.d_weights.data() + c * d;
            for (std::size_t k = 0; k < d; ++k) row[k] += err * sample.features[k];
            out.d_bias[c] += err;
        }
    }
    const double n = static_cast<double>(batch.size());
    out.loss /= n;
    for (double& g : out.d_weights) g /= n;
    for (double& g : out.d_bias) g /= n;
    return out;
}

void TrainConfig::validate() const {
    if (steps < 1) throw Error("steps must be >= 1");
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw Error("learning rate must be finite and > 0");
    }
    if (eval_interval < 1 || eval_interval > steps) {
        throw Error("eval interval must be in [1, steps]");
    }
    ratios.validate();
}

TrainingTrace train_samples(SoftmaxHead& head, std::span<const Sample> train_set,
                            std::span<const Sample> validation_set, const TrainConfig& config) {
    config.validate();
    if (train_set.empty()) throw Error("training set is empty");
    TrainingTrace trace;
    trace.train.reserve(static_cast<std::size_t>(config.steps));
    for (int step = 1; step <= config.steps; ++step) {
        const LossGradient grad = loss_and_grad(head, train_set);
        for (std::size_t i = 0; i < head.weights.size(); ++i) {
            head.weights[i] -= config.learning_rate * grad.d_weights[i];
        }
        for (std::size_t c = 0; c < head.bias.size(); ++c) {
            head.bias[c] -= config.learning_rate * grad.d_bias[c];
        }

        const Evaluation fit = evaluate_samples(head, train_set);
        trace.train.push_back({step, fit.cross_entropy, fit.accuracy});
        if (!validation_set.empty() && (step % config.eval_interval == 0 || step == config.steps)) {
            const Evaluation val = evaluate_samples(head, validation_set);
            trace.validation.push_back({step, val.cross_entropy, val.accuracy});
        }
    }
    return trace;
}

TrainResult train(std::vector<LabeledImage> items, const TrainConfig& config,
                  const ExtractorConfig& extractor) {
    config.validate();
    extractor.validate();
    const DatasetSplit split = split_dataset(std::move(items), config.ratios, config.seed);

    const auto train_set = to_samples(split.train, extractor);
    const bool has_normal = std::any_of(train_set.begin(), train_set.end(),
                                        [](const Sample& s) { return s.label == Label::NormalGear; });
    const bool has_broken = std::any_of(train_set.begin(), train_set.end(),
                                        [](const Sample& s) { return s.label == Label::BrokenGear; });
    if (!has_normal || !has_broken) throw Error("training part must contain both classes");
    const auto validation_set = to_samples(split.validation, extractor);

    TrainResult result{SoftmaxHead::zeros(extractor), {}, std::nullopt, std::nullopt,
                       {split.train.size(), split.validation.size(), split.test.size()}};
    result.trace = train_samples(result.head, train_set, validation_set, config);
    if (!split.test.empty()) {
        const Evaluation test = evaluate(result.head, split.test);
        result.test_accuracy = test.accuracy;
        result.test_cross_entropy = test.cross_entropy;
    }
    return result;
}

Probabilities predict_features(const SoftmaxHead& head, std::span<const double> features) {
    const auto z = head.logits(features);
    return softmax(z);
}

Probabilities predict(const SoftmaxHead& head, const RgbImage& image) {
    return predict_features(head, extract_features(image, head.extractor));
}

Label classify(const Probabilities& probs) {
    if (probs.size() != 2) throw Error("classify expects two-class probabilities");
    return probs[Label::NormalGear] > 0.5 ? Label::NormalGear : Label::BrokenGear;
}

Evaluation evaluate_samples(const SoftmaxHead& head, std::span<const Sample> samples) {
    if (samples.empty()) throw Error("cannot evaluate an empty set");
    Evaluation out;
    std::size_t correct = 0;
    for (const auto& sample : samples) {
        const Probabilities p = predict_features(head, sample.features);
        if (classify(p) == sample.label) ++correct;
        out.cross_entropy += cross_entropy(p, sample.label);
    }
    out.accuracy = static_cast<double>(correct) / static_cast<double>(samples.size());
    out.cross_entropy /= static_cast<double>(samples.size());
    return out;
}

Evaluation evaluate(const SoftmaxHead& head, std::span<const LabeledImage> items) {
    if (items.empty()) throw Error("cannot evaluate an empty set");
    return evaluate_samples(head, to_samples(items, head.extractor));
}

std::string shortest_decimal(double value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

std::string shortest_decimal(float value) {
    char buf[64];
    const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, end);
}

std::string format_model(const SoftmaxHead& head) {
    const auto& cfg = head.extractor;
    std::string out(kModelMagic);
    out += "\nclasses";
    for (const auto& name : head.class_names) out += "\t" + name;
    out += "\n" + std::to_string(cfg.canonical_size) + " " + std::to_string(cfg.grid) + " " +
           shortest_decimal(cfg.blur.sigma_x) + " " + shortest_decimal(cfg.blur.sigma_y) + " " +
           (cfg.blur.size_x ? std::to_string(*cfg.blur.size_x) : "-") + " " +
           (cfg.blur.size_y ? std::to_string(*cfg.blur.size_y) : "-") + "\n";
    const std::size_t d = head.dimension();
    for (std::size_t c = 0; c < head.classes(); ++c) {
        for (std::size_t k = 0; k < d; ++k) out += shortest_decimal(head.weight(c, k)) + " ";
        out += shortest_decimal(head.bias[c]) + "\n";
    }
    return out;
}

SoftmaxHead parse_model(std::string_view text) {
    std::vector<std::string_view> lines = split_on(text, '\n');
    if (!lines.empty() && lines.back().empty()) lines.pop_back();
    const auto line = [&](std::size_t no) -> std::string_view {
        if (no > lines.size()) throw ParseError(ParseError::Unit::Line, no, "unexpected end of model file");
        return lines[no - 1];
    };

    if (line(1) != kModelMagic) {
        const bool other_version = line(1).starts_with("gearlens-model ");
        throw ParseError(ParseError::Unit::Line, 1,
                         other_version ? "unsupported model version '" + std::string(line(1)) + "'"
                                       : std::string("not a gearlens model file"));
    }

    const auto classes = split_on(line(2), '\t');
    if (classes.size() != 3 || classes[0] != "classes" || classes[1] != "normal gear" ||
        classes[2] != "broken gear") {
        throw ParseError(ParseError::Unit::Line, 2, "expected 'classes\\tnormal gear\\tbroken gear'");
    }

    const auto cfg_tokens = tokens(line(3));
    if (cfg_tokens.size() != 6) {
        throw ParseError(ParseError::Unit::Line, 3,
                         "expected 'canonical_size grid sigma_x sigma_y size_x size_y'");
    }
    ExtractorConfig cfg;
    cfg.canonical_size = parse_number<int>(cfg_tokens[0], 3, "canonical_size");
    cfg.grid = parse_number<int>(cfg_tokens[1], 3, "grid");
    cfg.blur.sigma_x = parse_number<double>(cfg_tokens[2], 3, "sigma_x");
    cfg.blur.sigma_y = parse_number<double>(cfg_tokens[3], 3, "sigma_y");
    const auto size_field = [](std::string_view tok, const char* what) -> std::optional<int> {
        if (tok == "-") return std::nullopt;
        return parse_number<int>(tok, 3, what);
    };
    cfg.blur.size_x = size_field(cfg_tokens[4], "size_x");
    cfg.blur.size_y = size_field(cfg_tokens[5], "size_y");
    try {
        cfg.validate();
    } catch (const Error& e) {
        throw ParseError(ParseError::Unit::Line, 3, e.what());
    }

    SoftmaxHead head = SoftmaxHead::zeros(cfg);
    const std::size_t d = head.dimension();
    for (std::size_t c = 0; c < head.classes(); ++c) {
        const std::size_t no = 4 + c;
        const auto values = tokens(line(no));
        if (values.size() != d + 1) {
            throw ParseError(ParseError::Unit::Line, no,
                             "dimension mismatch: expected " + std::to_string(d + 1) +
                                 " values (weights then bias), got " + std::to_string(values.size()));
        }
        for (std::size_t k = 0; k < d; ++k) head.weight(c, k) = parse_number<double>(values[k], no, "weight");
        head.bias[c] = parse_number<double>(values[d], no, "bias");
    }
    if (lines.size() > 3 + head.classes()) {
        throw ParseError(ParseError::Unit::Line, 4 + head.classes(), "unexpected trailing content");
    }
    return head;
}

void save_model(const SoftmaxHead& head, const std::filesystem::path& path) {
    write_file(path, format_model(head));
}

SoftmaxHead load_model(const std::filesystem::path& path) {
    const auto bytes = read_file(path);
    return parse_model(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

}  // namespace gearlens
