#include "eigenexpr/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <vector>

#include "eigenexpr/pnm.hpp"

namespace fs = std::filesystem;

namespace eigenexpr {

namespace {

constexpr const char* kBaseLabels[9] = {"happy", "sad",     "fear",
                                        "surprise", "anger", "disgust",
                                        "neutral",  "pain",  "rotation"};

std::string class_label(std::size_t c) {
    if (c < 9) return kBaseLabels[c];
    return "class" + std::to_string(c + 1);
}

// Deterministic standard-normal source: Box-Muller over mt19937_64 uniforms.
// std::normal_distribution is implementation-defined, which would break
// byte-identical output across standard libraries.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : engine_(seed) {}

    double next() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 2.0 * M_PI * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

private:
    double uniform01() {
        // (x >> 11) has 53 bits; +0.5 keeps the value strictly inside (0, 1).
        return (static_cast<double>(engine_() >> 11) + 0.5) *
               (1.0 / 9007199254740992.0);
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Base pattern for a class: a sinusoidal grating whose orientation,
// frequency, and phase identify the class.
std::vector<double> class_pattern(std::size_t c, const SynthConfig& cfg) {
    const double theta = M_PI * static_cast<double>(c) /
                         static_cast<double>(cfg.classes);
    const double freq = 3.0 + static_cast<double>(c % 5);
    const double phase = 0.7 * static_cast<double>(c);
    const double ct = std::cos(theta), st = std::sin(theta);

    std::vector<double> px(cfg.width * cfg.height);
    for (std::size_t y = 0; y < cfg.height; ++y)
        for (std::size_t x = 0; x < cfg.width; ++x) {
            const double u = (static_cast<double>(x) + 0.5) / cfg.width;
            const double v = (static_cast<double>(y) + 0.5) / cfg.height;
            px[y * cfg.width + x] =
                0.5 + 0.45 * std::sin(2.0 * M_PI * freq * (u * ct + v * st) + phase);
        }
    return px;
}

std::string indexed_name(const std::string& label, const char* split,
                         std::size_t i) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%03zu", i);
    return label + "_" + split + "_" + buf + ".pgm";
}

} // namespace

void SynthConfig::validate() const {
    if (classes < 2) throw ValueError("synth config: need at least 2 classes");
    if (width < 8 || height < 8)
        throw ValueError("synth config: width and height must be at least 8");
    if (per_class_train == 0)
        throw ValueError("synth config: per_class_train must be positive");
    if (!(noise_sigma >= 0.0))
        throw ValueError("synth config: noise_sigma must be nonnegative");
}

std::string generate_synthetic(const SynthConfig& config,
                               const std::string& out_dir) {
    config.validate();

    const fs::path root(out_dir);
    const fs::path images = root / "images";
    std::error_code ec;
    fs::create_directories(images, ec);
    if (ec) throw IoError(out_dir + ": cannot create output directory: " +
                          ec.message());

    GaussianSource gauss(config.seed);
    std::string manifest = "path,label,subject,split\n";

    for (std::size_t c = 0; c < config.classes; ++c) {
        const std::string label = class_label(c);
        const std::string subject = "s" + std::to_string(c);
        const std::vector<double> base = class_pattern(c, config);
        const std::size_t per_class = config.per_class_train + config.per_class_test;

        for (std::size_t i = 0; i < per_class; ++i) {
            std::vector<double> px = base;
            if (config.noise_sigma > 0.0)
                for (double& v : px)
                    v = std::clamp(v + config.noise_sigma * gauss.next(), 0.0, 1.0);

            const bool is_train = i < config.per_class_train;
            const std::size_t local = is_train ? i : i - config.per_class_train;
            const std::string name =
                indexed_name(label, is_train ? "train" : "test", local);
            write_pgm((images / name).string(), static_cast<int>(config.width),
                      static_cast<int>(config.height), 255, px);
            manifest += "images/" + name + "," + label + "," + subject + "," +
                        (is_train ? "train" : "test") + "\n";
        }
    }

    const std::string manifest_path = (root / "manifest.csv").string();
    std::ofstream out(manifest_path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(manifest_path + ": cannot open for writing");
    out << manifest;
    if (!out) throw IoError(manifest_path + ": write failed");
    return manifest_path;
}

} // namespace eigenexpr
