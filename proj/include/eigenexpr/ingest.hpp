#ifndef EIGENEXPR_INGEST_HPP
#define EIGENEXPR_INGEST_HPP

#include <string>
#include <vector>

#include "eigenexpr/error.hpp"
#include "eigenexpr/linalg.hpp"

namespace eigenexpr {

enum class Split { train, test };

std::string to_string(Split s);

/// One labeled face image, preprocessed to a row-major pixel vector in [0, 1].
struct Sample {
    Vec pixels;
    std::string label;   // lowercase, trimmed
    std::string subject;
    Split split = Split::train;
    std::string source_path;
};

/// Ordered collection of samples sharing one resolution. Sample order is
/// manifest order; label_set lists the distinct labels actually present,
/// sorted.
struct Dataset {
    std::vector<Sample> samples;
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<std::string> label_set;
};

/// Preprocessing parameters. Grayscale weights must be nonnegative and sum
/// to 1 within 1e-9; "bilinear" is the only supported resample method.
struct IngestConfig {
    std::size_t width = 64;
    std::size_t height = 64;
    double gray_r = 0.299;
    double gray_g = 0.587;
    double gray_b = 0.114;
    std::string resample = "bilinear";

    void validate() const;
};

/// Decodes a P2/P3/P5/P6 image, converts to grayscale by the configured
/// luminance weights, resizes to config.width x config.height with bilinear
/// interpolation, and scales to [0, 1] by the file's maxval. The result is
/// flattened row-major, row 0 first.
Vec load_image(const std::string& path, const IngestConfig& config);

/// Loads a dataset from a CSV manifest with header `path,label,subject,split`.
/// Lines starting with '#' are comments. Relative image paths resolve against
/// the manifest's directory; row order is preserved. Errors name the failing
/// row and path.
Dataset load_manifest(const std::string& path, const IngestConfig& config);

/// Data matrix for one split: width*height rows, one column per matching
/// sample, in dataset order.
Mat vectorize(const Dataset& dataset, Split split);

} // namespace eigenexpr

#endif // EIGENEXPR_INGEST_HPP
