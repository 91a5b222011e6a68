#include "gearlens/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <sstream>

#include "gearlens/classifier.hpp"
#include "gearlens/dataset.hpp"
#include "gearlens/error.hpp"
#include "gearlens/filters.hpp"
#include "gearlens/inspect.hpp"
#include "gearlens/io.hpp"
#include "gearlens/synthgear.hpp"

namespace gearlens {

namespace fs = std::filesystem;

namespace {

std::string fixed(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6f", v);
    return buf;
}

SplitRatios parse_ratios(const std::string& text) {
    std::vector<double> parts;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw CLI::ValidationError("--ratios", "expected three comma-separated reals, got '" + text + "'");
        }
    }
    if (parts.size() != 3) {
        throw CLI::ValidationError("--ratios", "expected three comma-separated reals, got '" + text + "'");
    }
    return {parts[0], parts[1], parts[2]};
}

struct Options {
    // synth
    int count = 0;
    int size = 128;
    // shared
    std::uint64_t seed = 0;
    std::string out;
    std::string data;
    std::string manifest;
    std::string model;
    std::string in;
    // split
    std::string ratios = "0.6,0.2,0.2";
    // train
    double lr = 0.1;
    int steps = 1000;
    int eval_interval = 10;
    std::string csv;
    // evaluate
    std::string part;
    // filter / blur
    std::string kernel;
    double sigma = 1.0;
    double sigma_x = 1.0;
    double sigma_y = 1.0;
};

void run_synth(const Options& o, std::ostream& out, std::ostream& err) {
    err << "rendering " << o.count << " gears per class into " << o.out << "\n";
    const auto summary = generate_dataset(o.count, o.seed, o.out, o.size);
    out << "normal=" << summary.normal_count << " broken=" << summary.broken_count
        << " files=" << summary.paths.size() << "\n";
}

void run_split(const Options& o, std::ostream& out, std::ostream& err) {
    auto items = ingest_directory(o.data);
    err << "loaded " << items.size() << " images from " << o.data << "\n";
    const auto split = split_dataset(std::move(items), parse_ratios(o.ratios), o.seed);
    write_manifest(split, o.manifest);
    out << "train=" << split.train.size() << " validation=" << split.validation.size()
        << " test=" << split.test.size() << "\n";
}

void run_train(const Options& o, std::ostream& out, std::ostream& err) {
    TrainConfig cfg;
    cfg.steps = o.steps;
    cfg.learning_rate = o.lr;
    cfg.seed = o.seed;
    cfg.eval_interval = o.eval_interval;
    cfg.validate();

    auto items = ingest_directory(o.data);
    err << "loaded " << items.size() << " images from " << o.data << "; training " << cfg.steps
        << " steps at lr " << cfg.learning_rate << "\n";
    const TrainResult result = train(std::move(items), cfg, ExtractorConfig{});
    const auto& trace = result.trace;

    for (const auto& v : trace.validation) {
        const auto& t = trace.train[static_cast<std::size_t>(v.step - 1)];
        out << "step=" << v.step << " train_acc=" << fixed(t.accuracy) << " train_ce=" << fixed(t.cross_entropy)
            << " val_acc=" << fixed(v.accuracy) << " val_ce=" << fixed(v.cross_entropy) << "\n";
    }
    const auto& last = trace.train.back();
    out << "final_train_acc=" << fixed(last.accuracy) << " final_train_ce=" << fixed(last.cross_entropy) << "\n";
    if (!trace.validation.empty()) {
        const auto& v = trace.validation.back();
        out << "final_val_acc=" << fixed(v.accuracy) << " final_val_ce=" << fixed(v.cross_entropy) << "\n";
    }
    if (result.test_accuracy) {
        out << "test_acc=" << fixed(*result.test_accuracy) << " test_ce=" << fixed(*result.test_cross_entropy)
            << "\n";
    }

    save_model(result.head, o.model);
    err << "model written to " << o.model << "\n";

    if (!o.csv.empty()) {
        std::string csv = "step,train_acc,train_ce,val_acc,val_ce\n";
        std::size_t vi = 0;
        for (const auto& t : trace.train) {
            csv += std::to_string(t.step) + "," + fixed(t.accuracy) + "," + fixed(t.cross_entropy) + ",";
            if (vi < trace.validation.size() && trace.validation[vi].step == t.step) {
                csv += fixed(trace.validation[vi].accuracy) + "," + fixed(trace.validation[vi].cross_entropy);
                ++vi;
            } else {
                csv += ",";
            }
            csv += "\n";
        }
        write_file(o.csv, csv);
        err << "metrics written to " << o.csv << "\n";
    }
}

void run_evaluate(const Options& o, std::ostream& out, std::ostream& err) {
    const SoftmaxHead head = load_model(o.model);
    std::vector<LabeledImage> items;
    if (!o.manifest.empty()) {
        const auto part = parse_part(o.part.empty() ? "test" : o.part);
        DatasetSplit split = read_manifest(o.manifest, o.data);
        items = part_of(split, *part);
        err << "evaluating " << part_name(*part) << " part (" << items.size() << " images)\n";
    } else {
        items = ingest_directory(o.data);
        err << "evaluating all " << items.size() << " images in " << o.data << "\n";
    }
    const Evaluation e = evaluate(head, items);
    out << "items=" << items.size() << " accuracy=" << fixed(e.accuracy)
        << " cross_entropy=" << fixed(e.cross_entropy) << "\n";
}

void run_filter(const Options& o, std::ostream& out, std::ostream& err) {
    const RgbImage image = load_rgb_file(o.in);
    const GrayImage gray = rgb_to_gray(image);
    const GaussianSpec blur = GaussianSpec::isotropic(o.sigma);
    blur.validate();
    ensure_directory(o.out);
    const std::string stem = fs::path(o.in).stem().string();

    const auto emit = [&](std::string_view name, const GrayImage& filtered) {
        const fs::path path = fs::path(o.out) / filtered_file_name(stem, name);
        write_file(path, save_pnm(filtered));
        out << path.string() << "\n";
    };
    if (o.kernel == "all") {
        for (const auto& [name, filtered] : apply_filter_bank(gray, blur)) emit(name, filtered);
    } else {
        emit(o.kernel, apply_bank_kernel(gray, o.kernel, blur));
    }
    err << "filtered " << o.in << "\n";
}

void run_blur(const Options& o, std::ostream& out, std::ostream&) {
    GaussianSpec spec{o.sigma_x, o.sigma_y, std::nullopt, std::nullopt};
    spec.validate();
    const AnyImage image = load_image_file(o.in);
    const AnyImage blurred = std::visit([&](const auto& img) -> AnyImage { return gaussian_blur(img, spec); }, image);
    write_file(o.out, save_pnm(blurred));
    out << o.out << "\n";
}

void run_inspect(const Options& o, std::ostream& out, std::ostream& err) {
    const SoftmaxHead head = load_model(o.model);
    const RgbImage image = load_rgb_file(o.in);
    const auto report = inspect(image, head, head.extractor.blur, o.out, fs::path(o.in).stem().string());
    for (const auto& [name, path] : report.filtered_paths) err << "wrote " << path.string() << "\n";
    out << "decision=" << decision_name(report.decision) << "\n";
    out << format_report(report.probabilities);
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gear inspection toolkit: filter bank, synthetic data, final-layer classifier", "gearlens"};
    app.require_subcommand(1);
    Options o;

    auto* synth = app.add_subcommand("synth", "Render a synthetic normal/broken gear dataset");
    synth->add_option("--count", o.count, "Images per class")->required()->check(CLI::PositiveNumber);
    synth->add_option("--seed", o.seed, "Base seed")->required();
    synth->add_option("--out", o.out, "Destination directory")->required();
    synth->add_option("--size", o.size, "Image side in pixels")->check(CLI::Range(32, 65536));

    auto* split = app.add_subcommand("split", "Write a train/validation/test manifest");
    split->add_option("--data", o.data, "Dataset root")->required();
    split->add_option("--seed", o.seed, "Shuffle seed")->required();
    split->add_option("--ratios", o.ratios, "train,validation,test");
    split->add_option("--manifest", o.manifest, "Manifest output path")->required();

    auto* trn = app.add_subcommand("train", "Train the softmax head on a dataset directory");
    trn->add_option("--data", o.data, "Dataset root")->required();
    trn->add_option("--seed", o.seed, "Split seed")->required();
    trn->add_option("--lr", o.lr, "Learning rate");
    trn->add_option("--steps", o.steps, "Gradient-descent steps");
    trn->add_option("--eval-interval", o.eval_interval, "Steps between validation evaluations");
    trn->add_option("--model", o.model, "Model output path")->required();
    trn->add_option("--csv", o.csv, "Per-step metrics CSV output path");

    auto* eval = app.add_subcommand("evaluate", "Accuracy and cross-entropy of a model");
    eval->add_option("--model", o.model, "Model path")->required();
    eval->add_option("--data", o.data, "Dataset root")->required();
    auto* manifest_opt = eval->add_option("--manifest", o.manifest, "Manifest path");
    eval->add_option("--part", o.part, "Manifest part")
        ->check(CLI::IsMember({"train", "validation", "test"}))
        ->needs(manifest_opt);

    auto* filt = app.add_subcommand("filter", "Write filter-bank images for one input");
    filt->add_option("--kernel", o.kernel, "Kernel name")
        ->required()
        ->check(CLI::IsMember({"sobel_x", "sobel_y", "laplacian", "sharpen", "all"}));
    filt->add_option("--in", o.in, "Input PNM")->required();
    filt->add_option("--out", o.out, "Output directory")->required();
    filt->add_option("--sigma", o.sigma, "Blur sigma before filtering");

    auto* blr = app.add_subcommand("blur", "Gaussian-blur one image");
    blr->add_option("--in", o.in, "Input PNM")->required();
    blr->add_option("--out", o.out, "Output PNM")->required();
    blr->add_option("--sigma-x", o.sigma_x, "Horizontal sigma")->required();
    blr->add_option("--sigma-y", o.sigma_y, "Vertical sigma")->required();

    auto* insp = app.add_subcommand("inspect", "Filter, classify and report one gear image");
    insp->add_option("--model", o.model, "Model path")->required();
    insp->add_option("--in", o.in, "Input PNM")->required();
    insp->add_option("--out", o.out, "Output directory for filtered images")->required();

    std::vector<std::string> argv_storage{"gearlens"};
    argv_storage.insert(argv_storage.end(), args.begin(), args.end());
    std::vector<const char*> argv;
    for (const auto& a : argv_storage) argv.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        CLI::App* target = &app;
        for (auto* sub : app.get_subcommands()) target = sub;
        out << target->help();
        return 0;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        CLI::App* target = &app;
        for (auto* sub : app.get_subcommands()) target = sub;
        err << target->help();
        return 2;
    }

    try {
        if (synth->parsed()) run_synth(o, out, err);
        else if (split->parsed()) run_split(o, out, err);
        else if (trn->parsed()) run_train(o, out, err);
        else if (eval->parsed()) run_evaluate(o, out, err);
        else if (filt->parsed()) run_filter(o, out, err);
        else if (blr->parsed()) run_blur(o, out, err);
        else if (insp->parsed()) run_inspect(o, out, err);
    } catch (const CLI::ValidationError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}

}  // namespace gearlens
