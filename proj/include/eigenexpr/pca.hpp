#ifndef EIGENEXPR_PCA_HPP
#define EIGENEXPR_PCA_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "eigenexpr/ingest.hpp"
#include "eigenexpr/linalg.hpp"

namespace eigenexpr {

/// Training parameters. k is the smallest component count whose cumulative
/// eigenvalue fraction reaches variance_threshold, optionally capped by
/// max_components (0 = no cap). Gram eigenvalues at or below
/// null_eigen_ratio * lambda_1 are treated as null directions.
struct TrainConfig {
    double variance_threshold = 0.95;
    std::size_t max_components = 0;
    double eigen_tol = 1e-10;
    double null_eigen_ratio = 1e-12;

    void validate() const;
};

/// A trained eigenfaces model.
///
/// eigenfaces is N x k with orthonormal columns (N = width*height);
/// eigenvalues are those of the covariance A A^T / M, descending and
/// nonnegative; train_weights is k x M with column j the projection of
/// training image j; total_variance is the sum of every positive covariance
/// eigenvalue (retained and dropped), the denominator of explained-variance
/// fractions.
struct EigenModel {
    std::size_t width = 0;
    std::size_t height = 0;
    Vec mean_face;
    Mat eigenfaces;
    Vec eigenvalues;
    double total_variance = 0.0;
    Mat train_weights;
    std::vector<std::string> train_labels;
    std::vector<std::string> train_subjects;
    TrainConfig config;

    std::size_t pixel_count() const { return width * height; }
    std::size_t component_count() const { return eigenfaces.cols; }
    std::size_t sample_count() const { return train_labels.size(); }
};

/// Trains on the dataset's train split by the snapshot method: eigenpairs of
/// the M x M Gram matrix of the centered data, mapped back to pixel space and
/// normalized. Deterministic end to end.
EigenModel train(const Dataset& dataset, const TrainConfig& config);

/// Weight vector of an image: eigenfaces^T (pixels - mean_face).
Vec project(const EigenModel& model, const Vec& pixels);

/// Inverse map: mean_face + eigenfaces * weights. Values are not clamped.
Vec reconstruct(const EigenModel& model, const Vec& weights);

/// Cumulative variance fraction captured by the first j components,
/// 1 <= j <= k. Nondecreasing in j.
double explained_variance(const EigenModel& model, std::size_t j);

/// Writes the model as a versioned, self-describing text file; see
/// docs/model-format.md. Serialization is deterministic and numerics
/// round-trip bit-exactly.
void save_model(const EigenModel& model, const std::string& path);

/// Reads a file produced by save_model. Version, shape, and checksum
/// mismatches raise FormatError.
EigenModel load_model(const std::string& path);

} // namespace eigenexpr

#endif // EIGENEXPR_PCA_HPP
