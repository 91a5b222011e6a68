#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "fixtures.hpp"
#include "gearlens/error.hpp"
#include "gearlens/filters.hpp"

using namespace gearlens;

namespace {

// Direct 2-D correlation, written independently of convolve().
ResponsePlane brute_correlate(const GrayImage& img, const std::vector<double>& k, int kw, int kh,
                              BorderPolicy border) {
    ResponsePlane out{img.width(), img.height(), std::vector<double>(img.size())};
    for (int y = 0; y < img.height(); ++y) {
        for (int x = 0; x < img.width(); ++x) {
            double acc = 0.0;
            for (int i = 0; i < kh; ++i) {
                for (int j = 0; j < kw; ++j) {
                    int sx = x + j - kw / 2;
                    int sy = y + i - kh / 2;
                    double v = 0.0;
                    if (border == BorderPolicy::Replicate) {
                        sx = std::clamp(sx, 0, img.width() - 1);
                        sy = std::clamp(sy, 0, img.height() - 1);
                        v = img.at(sx, sy);
                    } else if (sx >= 0 && sy >= 0 && sx < img.width() && sy < img.height()) {
                        v = img.at(sx, sy);
                    }
                    acc += k[static_cast<std::size_t>(i * kw + j)] * v;
                }
            }
            out.values[static_cast<std::size_t>(y) * img.width() + x] = acc;
        }
    }
    return out;
}

std::uint8_t round_clip(double v) {
    return static_cast<std::uint8_t>(std::clamp(std::floor(v + 0.5), 0.0, 255.0));
}

double variance(const GrayImage& img) {
    double mean = 0.0;
    for (auto v : img.intensities()) mean += v;
    mean /= static_cast<double>(img.size());
    double s = 0.0;
    for (auto v : img.intensities()) s += (v - mean) * (v - mean);
    return s / static_cast<double>(img.size() - 1);
}

int count_above(const GrayImage& img, int threshold) {
    int n = 0;
    for (auto v : img.intensities()) n += v > threshold;
    return n;
}

}  // namespace

TEST_CASE("bank kernels") {
    CHECK(named_kernel("sobel_x").weights() == std::vector<double>{-1, 0, 1, -2, 0, 2, -1, 0, 1});
    CHECK(named_kernel("sobel_y").weights() == std::vector<double>{-1, -2, -1, 0, 0, 0, 1, 2, 1});
    CHECK(named_kernel("laplacian").weights() == std::vector<double>{0, 1, 0, 1, -4, 1, 0, 1, 0});
    CHECK(named_kernel("sharpen").weights() == std::vector<double>{0, -1, 0, -1, 5, -1, 0, -1, 0});
    CHECK_THROWS_AS(named_kernel("emboss"), Error);

    const Kernel id = Kernel::identity();
    const Kernel lap = named_kernel("laplacian");
    for (std::size_t i = 0; i < 9; ++i) {
        CHECK(named_kernel("sharpen").weights()[i] == id.weights()[i] - lap.weights()[i]);
    }
}

TEST_CASE("kernel invariants") {
    CHECK_THROWS_AS(Kernel("k", 2, std::vector<double>(4)), Error);
    CHECK_THROWS_AS(Kernel("k", 3, std::vector<double>(8)), Error);
    CHECK(Kernel("k", 1, {2.5}).weight_sum() == 2.5);
}

TEST_CASE("laplacian of x^2 is 2") {
    GrayImage img(12, 4);
    for (int y = 0; y < 4; ++y)
        for (int x = 0; x < 12; ++x) img.set(x, y, static_cast<std::uint8_t>(x * x));
    const auto plane = convolve(img, named_kernel("laplacian"));
    for (int y = 1; y < 3; ++y)
        for (int x = 1; x < 11; ++x) CHECK(plane.at(x, y) == 2.0);
}

TEST_CASE("sobel_x on a unit ramp") {
    GrayImage img(9, 6);
    for (int y = 0; y < 6; ++y)
        for (int x = 0; x < 9; ++x) img.set(x, y, static_cast<std::uint8_t>(x));
    const auto plane = convolve(img, named_kernel("sobel_x"));
    for (int y = 1; y < 5; ++y)
        for (int x = 1; x < 8; ++x) CHECK(plane.at(x, y) == 8.0);
}

TEST_CASE("zero-sum kernels on constants") {
    const GrayImage img(7, 5, 173);
    for (const auto name : {"sobel_x", "sobel_y", "laplacian"}) {
        for (double v : convolve(img, named_kernel(name)).values) CHECK(v == 0.0);
    }
}

TEST_CASE("1x1 image with replicated border") {
    const GrayImage img(1, 1, 9);
    for (const auto name : kBankKernels) {
        const Kernel k = named_kernel(name);
        CHECK(convolve(img, k).values[0] == 9.0 * k.weight_sum());
    }
}

TEST_CASE("identity and brute-force oracle") {
    SplitMix64 rng(21);
    for (int trial = 0; trial < 10; ++trial) {
        const int w = 1 + static_cast<int>(rng.below(20));
        const int h = 1 + static_cast<int>(rng.below(20));
        const GrayImage img = fixtures::random_gray(rng, w, h);
        for (const auto border : {BorderPolicy::Replicate, BorderPolicy::Zero}) {
            const auto same = convolve(img, Kernel::identity(), border);
            for (std::size_t i = 0; i < img.size(); ++i) CHECK(same.values[i] == img.intensities()[i]);
            for (const auto name : kBankKernels) {
                const Kernel k = named_kernel(name);
                CHECK(convolve(img, k, border).values == brute_correlate(img, k.weights(), 3, 3, border).values);
            }
        }
    }
}

TEST_CASE("linearity") {
    SplitMix64 rng(8);
    const GrayImage a = fixtures::random_gray(rng, 17, 11);
    const GrayImage b = fixtures::random_gray(rng, 17, 11);
    // Even a and multiple-of-4 b keep 0.5 a + 0.25 b integral.
    GrayImage a2(17, 11), b4(17, 11), mix(17, 11);
    for (std::size_t i = 0; i < a.size(); ++i) {
        a2.intensities()[i] = static_cast<std::uint8_t>(a.intensities()[i] & ~1u);
        b4.intensities()[i] = static_cast<std::uint8_t>(b.intensities()[i] & ~3u);
        mix.intensities()[i] = static_cast<std::uint8_t>(a2.intensities()[i] / 2 + b4.intensities()[i] / 4);
    }
    for (const auto name : kBankKernels) {
        const Kernel k = named_kernel(name);
        for (const auto border : {BorderPolicy::Replicate, BorderPolicy::Zero}) {
            const auto ra = convolve(a2, k, border);
            const auto rb = convolve(b4, k, border);
            const auto rm = convolve(mix, k, border);
            for (std::size_t i = 0; i < rm.values.size(); ++i) {
                CHECK(std::abs(rm.values[i] - (0.5 * ra.values[i] + 0.25 * rb.values[i])) <= 1e-9);
            }
        }
    }
}

TEST_CASE("display mappings") {
    const ResponsePlane plane{5, 1, {-300.0, -7.0, 7.4, 7.5, 300.0}};
    const auto abs = response_to_gray(plane, IntensityMapping::AbsClamp);
    CHECK(abs.at(0, 0) == 255);
    CHECK(abs.at(1, 0) == 7);
    CHECK(abs.at(2, 0) == 7);
    CHECK(abs.at(3, 0) == 8);
    CHECK(abs.at(4, 0) == 255);
    const auto clamp = response_to_gray(plane, IntensityMapping::Clamp);
    CHECK(clamp.at(0, 0) == 0);
    CHECK(clamp.at(1, 0) == 0);
    CHECK(clamp.at(3, 0) == 8);
    CHECK(clamp.at(4, 0) == 255);
}

TEST_CASE("gaussian kernels") {
    CHECK(default_gaussian_size(1.0) == 7);
    CHECK(default_gaussian_size(3.0) == 19);
    CHECK(default_gaussian_size(13.0) == 79);
    const auto k1 = make_gaussian_kernels(GaussianSpec::isotropic(1.0));
    CHECK(k1.horizontal.size() == 7);

    for (const GaussianSpec spec : {GaussianSpec::isotropic(0.3), GaussianSpec::isotropic(2.7),
                                    GaussianSpec{1.5, 4.0, 5, std::nullopt}}) {
        const auto k = make_gaussian_kernels(spec);
        for (const auto* taps : {&k.horizontal, &k.vertical}) {
            double sum = 0.0;
            for (double t : *taps) sum += t;
            CHECK(std::abs(sum - 1.0) <= 1e-12);
            for (std::size_t i = 0; i < taps->size(); ++i) CHECK((*taps)[i] == (*taps)[taps->size() - 1 - i]);
        }
    }

    const auto flat = make_gaussian_kernels(GaussianSpec{1000.0, 1000.0, 3, 3});
    for (double t : flat.horizontal) CHECK(t == doctest::Approx(1.0 / 3.0).epsilon(1e-6));

    CHECK_THROWS_AS(GaussianSpec::isotropic(0.0).validate(), Error);
    CHECK_THROWS_AS((GaussianSpec{1.0, 1.0, 4, std::nullopt}.validate()), Error);
    CHECK_THROWS_AS((GaussianSpec{1.0, -1.0, std::nullopt, std::nullopt}.validate()), Error);
}

TEST_CASE("blur of constants and impulses") {
    const GrayImage flat(9, 9, 77);
    CHECK(gaussian_blur(flat, GaussianSpec::isotropic(2.0)) == flat);
    const RgbImage flat_rgb(6, 4, Rgb{1, 100, 250});
    CHECK(gaussian_blur(flat_rgb, GaussianSpec{1.0, 3.0, std::nullopt, std::nullopt}) == flat_rgb);

    GrayImage impulse(15, 15);
    impulse.set(7, 7, 255);
    const GrayImage out = gaussian_blur(impulse, GaussianSpec::isotropic(1.0));
    const auto k = make_gaussian_kernels(GaussianSpec::isotropic(1.0));
    const double centre = k.horizontal[3] * k.vertical[3];
    CHECK(out.at(7, 7) == round_clip(255.0 * centre));
    for (auto v : out.intensities()) CHECK(v <= out.at(7, 7));
}

TEST_CASE("separable blur matches direct 2-D oracle") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 20; ++trial) {
        const int w = 1 + static_cast<int>(rng.below(64));
        const int h = 1 + static_cast<int>(rng.below(64));
        const double sigma = rng.uniform(0.5, 3.0);
        const GrayImage img = fixtures::random_gray(rng, w, h);
        const GaussianSpec spec = GaussianSpec::isotropic(sigma);
        const auto k = make_gaussian_kernels(spec);
        const int n = static_cast<int>(k.horizontal.size());
        std::vector<double> outer(static_cast<std::size_t>(n * n));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) outer[static_cast<std::size_t>(i * n + j)] = k.vertical[i] * k.horizontal[j];
        const auto direct = brute_correlate(img, outer, n, n, BorderPolicy::Replicate);
        const GrayImage fast = gaussian_blur(img, spec);
        for (std::size_t i = 0; i < img.size(); ++i) {
            CHECK(std::abs(int(fast.intensities()[i]) - int(round_clip(direct.values[i]))) <= 1);
        }
    }
}

TEST_CASE("rgb blur is per channel") {
    SplitMix64 rng(4);
    const RgbImage img = fixtures::random_rgb(rng, 10, 8);
    const GaussianSpec spec{1.2, 0.8, std::nullopt, std::nullopt};
    const RgbImage out = gaussian_blur(img, spec);
    for (int ch = 0; ch < 3; ++ch) {
        GrayImage plane(10, 8);
        for (std::size_t i = 0; i < plane.size(); ++i) plane.intensities()[i] = img.channels()[3 * i + ch];
        const GrayImage blurred = gaussian_blur(plane, spec);
        for (std::size_t i = 0; i < plane.size(); ++i) CHECK(out.channels()[3 * i + ch] == blurred.intensities()[i]);
    }
}

TEST_CASE("variance falls as sigma grows") {
    SplitMix64 rng(1234);
    const GrayImage noisy = fixtures::random_gray(rng, 48, 48);
    const double v1 = variance(gaussian_blur(noisy, GaussianSpec::isotropic(1.0)));
    const double v3 = variance(gaussian_blur(noisy, GaussianSpec::isotropic(3.0)));
    CHECK(v3 < v1);
    CHECK(v1 < variance(noisy));
}

TEST_CASE("filter bank") {
    const GrayImage flat(8, 8, 120);
    const auto bank = apply_filter_bank(flat, GaussianSpec::isotropic(1.0));
    REQUIRE(bank.size() == 4);
    for (const auto name : kBankKernels) REQUIRE(bank.contains(name));
    for (const auto name : {"sobel_x", "sobel_y", "laplacian"}) {
        for (auto v : bank.at(name).intensities()) CHECK(v == 0);
    }
    CHECK(bank.at("sharpen") == gaussian_blur(flat, GaussianSpec::isotropic(1.0)));

    SplitMix64 rng(3);
    const GrayImage img = fixtures::random_gray(rng, 20, 20);
    const auto full = apply_filter_bank(img, GaussianSpec::isotropic(1.5));
    for (const auto name : kBankKernels) {
        CHECK(apply_bank_kernel(img, name, GaussianSpec::isotropic(1.5)) == full.find(name)->second);
    }
}

TEST_CASE("missing tooth shows up in the sobel magnitude") {
    const GearSpec intact = fixtures::intact_gear();
    const GearSpec missing = fixtures::missing_tooth_gear();
    const GrayImage a = rgb_to_gray(render_gear(intact));
    const GrayImage b = rgb_to_gray(render_gear(missing));
    const GaussianSpec blur = GaussianSpec::isotropic(1.0);

    // Oracle magnitude: blur, then brute-force correlation of both sobel kernels.
    const auto magnitude = [&](const GrayImage& img) {
        const GrayImage blurred = gaussian_blur(img, blur);
        const auto gx = brute_correlate(blurred, named_kernel("sobel_x").weights(), 3, 3, BorderPolicy::Replicate);
        const auto gy = brute_correlate(blurred, named_kernel("sobel_y").weights(), 3, 3, BorderPolicy::Replicate);
        GrayImage out(img.width(), img.height());
        for (std::size_t i = 0; i < out.size(); ++i)
            out.intensities()[i] = round_clip(std::hypot(gx.values[i], gy.values[i]));
        return out;
    };
    const GrayImage ma = magnitude(a);
    const GrayImage mb = magnitude(b);
    CHECK(ma == sobel_magnitude(a, blur));
    CHECK(mb == sobel_magnitude(b, blur));

    const double centre = (intact.image_size - 1) / 2.0;
    const double period = 2.0 * std::numbers::pi / intact.teeth;
    int strong_intact = 0;
    int strong_missing = 0;
    for (int y = 0; y < intact.image_size; ++y) {
        for (int x = 0; x < intact.image_size; ++x) {
            const double dx = x - centre;
            const double dy = y - centre;
            const double r = std::hypot(dx, dy);
            double theta = std::atan2(dy, dx);
            if (theta < 0) theta += 2.0 * std::numbers::pi;
            const bool in_region = theta >= 0.1 * period && theta <= 0.4 * period &&
                                   r >= intact.root_radius - 4 && r <= intact.root_radius + intact.tooth_height - 4;
            if (!in_region) continue;
            strong_intact += ma.at(x, y) > 128;
            strong_missing += mb.at(x, y) > 128;
        }
    }
    CHECK(strong_intact == 0);
    CHECK(strong_missing >= 1);
    MESSAGE("strong pixels in tooth-0 region: intact " << strong_intact << ", missing " << strong_missing);
}

TEST_CASE("over-blurring smudges edges") {
    const GrayImage gear = rgb_to_gray(render_gear(fixtures::intact_gear()));
    const int at3 = count_above(sobel_magnitude(gear, GaussianSpec::isotropic(3.0)), 64);
    const int at13 = count_above(sobel_magnitude(gear, GaussianSpec::isotropic(13.0)), 64);
    CHECK(at13 < at3);
}
