#ifndef EIGENEXPR_CLASSIFY_HPP
#define EIGENEXPR_CLASSIFY_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "eigenexpr/pca.hpp"

namespace eigenexpr {

enum class Method { nearest_neighbor, nearest_centroid };
enum class Metric { euclidean, eigen_weighted };

std::string to_string(Method m);
std::string to_string(Metric m);

/// Classifier parameters. A present reject_threshold must be positive;
/// rejection only flags the result, the nearest label is still reported.
struct ClassifierConfig {
    Method method = Method::nearest_neighbor;
    Metric metric = Metric::euclidean;
    double reject_threshold = 0.0; // 0 = rejection disabled

    void validate() const;
};

/// One candidate match: the training index it points at, its label, and the
/// distance in weight space. For nearest_centroid the index is the label's
/// first occurrence among the training samples.
struct RankedMatch {
    std::size_t index = 0;
    std::string label;
    double distance = 0.0;
};

/// Outcome of classifying one probe. `ranked` is sorted ascending by
/// (distance, index), which makes ordering total; `label` is ranked[0]'s
/// label whether or not the probe was rejected.
struct ClassificationResult {
    std::string label;
    double distance = 0.0;
    std::vector<RankedMatch> ranked;
    bool rejected = false;
};

/// Projects the probe into eigenface space and ranks training samples
/// (nearest_neighbor) or per-label mean weight vectors (nearest_centroid)
/// by the configured metric.
ClassificationResult classify(const EigenModel& model, const Vec& pixels,
                              const ClassifierConfig& config = {});

/// Per-label arithmetic mean of the training weight columns.
std::map<std::string, Vec> centroids(const EigenModel& model);

/// Classifies every test-split sample, in dataset order. `threads` caps the
/// fan-out (0 = one per hardware thread); results are identical for any
/// thread count.
std::vector<std::pair<const Sample*, ClassificationResult>>
batch_classify(const EigenModel& model, const Dataset& dataset,
               const ClassifierConfig& config = {}, unsigned threads = 0);

} // namespace eigenexpr

#endif // EIGENEXPR_CLASSIFY_HPP
