#include "eigenexpr/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "eigenexpr/pnm.hpp"

namespace fs = std::filesystem;

namespace eigenexpr {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    while (b < s.size() && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    std::size_t e = s.size();
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::string lower(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return s;
}

// Grayscale in [0, 1], still at source resolution.
std::vector<double> to_gray(const PnmImage& img, const IngestConfig& cfg) {
    const std::size_t n = static_cast<std::size_t>(img.width) * img.height;
    std::vector<double> gray(n);
    const auto maxval = static_cast<double>(img.maxval);
    if (img.channels == 1) {
        for (std::size_t i = 0; i < n; ++i) gray[i] = img.samples[i] / maxval;
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            const double r = img.samples[3 * i] / maxval;
            const double g = img.samples[3 * i + 1] / maxval;
            const double b = img.samples[3 * i + 2] / maxval;
            gray[i] = cfg.gray_r * r + cfg.gray_g * g + cfg.gray_b * b;
        }
    }
    return gray;
}

// Center-aligned bilinear resize; resizing to the source dimensions is the
// identity map.
std::vector<double> resize_bilinear(const std::vector<double>& src,
                                    std::size_t sw, std::size_t sh,
                                    std::size_t dw, std::size_t dh) {
    std::vector<double> dst(dw * dh);
    const double sx_scale = static_cast<double>(sw) / dw;
    const double sy_scale = static_cast<double>(sh) / dh;
    for (std::size_t dy = 0; dy < dh; ++dy) {
        double sy = (dy + 0.5) * sy_scale - 0.5;
        sy = std::clamp(sy, 0.0, static_cast<double>(sh - 1));
        const auto y0 = static_cast<std::size_t>(sy);
        const std::size_t y1 = std::min(y0 + 1, sh - 1);
        const double fy = sy - y0;
        for (std::size_t dx = 0; dx < dw; ++dx) {
            double sx = (dx + 0.5) * sx_scale - 0.5;
            sx = std::clamp(sx, 0.0, static_cast<double>(sw - 1));
            const auto x0 = static_cast<std::size_t>(sx);
            const std::size_t x1 = std::min(x0 + 1, sw - 1);
            const double fx = sx - x0;
            const double top = (1.0 - fx) * src[y0 * sw + x0] + fx * src[y0 * sw + x1];
            const double bot = (1.0 - fx) * src[y1 * sw + x0] + fx * src[y1 * sw + x1];
            dst[dy * dw + dx] = (1.0 - fy) * top + fy * bot;
        }
    }
    return dst;
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, comma - start));
        start = comma + 1;
    }
    return out;
}

} // namespace

std::string to_string(Split s) {
    return s == Split::train ? "train" : "test";
}

void IngestConfig::validate() const {
    if (width < 8 || height < 8)
        throw ValueError("ingest config: width and height must be at least 8");
    if (gray_r < 0.0 || gray_g < 0.0 || gray_b < 0.0)
        throw ValueError("ingest config: grayscale weights must be nonnegative");
    if (std::abs(gray_r + gray_g + gray_b - 1.0) > 1e-9)
        throw ValueError("ingest config: grayscale weights must sum to 1");
    if (resample != "bilinear")
        throw ValueError("ingest config: unsupported resample method '" +
                         resample + "'");
}

Vec load_image(const std::string& path, const IngestConfig& config) {
    config.validate();
    const PnmImage img = read_pnm(path);
    const std::vector<double> gray = to_gray(img, config);
    return resize_bilinear(gray, static_cast<std::size_t>(img.width),
                           static_cast<std::size_t>(img.height), config.width,
                           config.height);
}

Dataset load_manifest(const std::string& path, const IngestConfig& config) {
    config.validate();
    std::ifstream in(path);
    if (!in) throw IoError(path + ": cannot open manifest");
    const fs::path base = fs::path(path).parent_path();

    Dataset ds;
    ds.width = config.width;
    ds.height = config.height;

    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    std::set<std::string> labels;

    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        const std::string stripped = trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;

        if (!header_seen) {
            if (stripped != "path,label,subject,split")
                throw FormatError(path + ":" + std::to_string(lineno) +
                                  ": expected header 'path,label,subject,split', got '" +
                                  stripped + "'");
            header_seen = true;
            continue;
        }

        const std::vector<std::string> fields = split_fields(line);
        if (fields.size() != 4)
            throw FormatError(path + ":" + std::to_string(lineno) + ": expected 4 columns, got " +
                              std::to_string(fields.size()));

        Sample s;
        const std::string rel = trim(fields[0]);
        if (rel.empty())
            throw FormatError(path + ":" + std::to_string(lineno) + ": empty image path");
        s.label = lower(trim(fields[1]));
        if (s.label.empty())
            throw FormatError(path + ":" + std::to_string(lineno) + ": empty label");
        s.subject = trim(fields[2]);

        const std::string split_tag = lower(trim(fields[3]));
        if (split_tag == "train") {
            s.split = Split::train;
        } else if (split_tag == "test") {
            s.split = Split::test;
        } else {
            throw FormatError(path + ":" + std::to_string(lineno) +
                              ": unknown split tag '" + split_tag +
                              "' (expected train or test)");
        }

        const fs::path img_path = fs::path(rel).is_absolute() ? fs::path(rel)
                                                              : base / rel;
        s.source_path = img_path.string();
        try {
            s.pixels = load_image(s.source_path, config);
        } catch (const Error& e) {
            throw FormatError(path + ":" + std::to_string(lineno) +
                              ": cannot load image: " + e.what());
        }
        labels.insert(s.label);
        ds.samples.push_back(std::move(s));
    }
    if (!header_seen)
        throw FormatError(path + ": empty manifest, expected header 'path,label,subject,split'");

    ds.label_set.assign(labels.begin(), labels.end());
    return ds;
}

Mat vectorize(const Dataset& dataset, Split split) {
    const std::size_t n = dataset.width * dataset.height;
    std::size_t count = 0;
    for (const Sample& s : dataset.samples)
        if (s.split == split) ++count;
    if (count == 0)
        throw ValueError("vectorize: no samples in split '" + to_string(split) + "'");

    Mat m(n, count);
    std::size_t c = 0;
    for (const Sample& s : dataset.samples) {
        if (s.split != split) continue;
        if (s.pixels.size() != n)
            throw DimensionError("vectorize: sample '" + s.source_path + "' has " +
                                 std::to_string(s.pixels.size()) +
                                 " pixels, expected " + std::to_string(n));
        std::copy(s.pixels.begin(), s.pixels.end(), m.col(c));
        ++c;
    }
    return m;
}

} // namespace eigenexpr
