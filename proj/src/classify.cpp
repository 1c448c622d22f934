#include "eigenexpr/classify.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <thread>

namespace eigenexpr {

namespace {

double euclidean_dist(const double* a, const double* b, std::size_t k) {
    double s = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// sqrt(sum (a_i - b_i)^2 / lambda_i) over components with lambda_i > 0.
double eigen_weighted_dist(const double* a, const double* b, const Vec& lam) {
    double s = 0.0;
    for (std::size_t i = 0; i < lam.size(); ++i) {
        if (lam[i] <= 0.0) continue;
        const double d = a[i] - b[i];
        s += d * d / lam[i];
    }
    return std::sqrt(s);
}

} // namespace

std::string to_string(Method m) {
    return m == Method::nearest_neighbor ? "nearest_neighbor" : "nearest_centroid";
}

std::string to_string(Metric m) {
    return m == Metric::euclidean ? "euclidean" : "eigen_weighted";
}

void ClassifierConfig::validate() const {
    if (reject_threshold < 0.0)
        throw ValueError("classifier config: reject_threshold must be positive");
}

ClassificationResult classify(const EigenModel& model, const Vec& pixels,
                              const ClassifierConfig& config) {
    config.validate();
    const std::size_t m = model.sample_count();
    if (m == 0) throw ValueError("classify: model has no training samples");
    if (config.metric == Metric::eigen_weighted) {
        bool any = false;
        for (double v : model.eigenvalues) any = any || v > 0.0;
        if (!any)
            throw ValueError("classify: eigen_weighted metric needs at least one "
                             "positive eigenvalue");
    }

    const Vec w = project(model, pixels);
    const std::size_t k = model.component_count();

    ClassificationResult out;
    if (config.method == Method::nearest_neighbor) {
        out.ranked.reserve(m);
        for (std::size_t j = 0; j < m; ++j) {
            const double* col = model.train_weights.col(j);
            const double d = config.metric == Metric::euclidean
                                 ? euclidean_dist(w.data(), col, k)
                                 : eigen_weighted_dist(w.data(), col,
                                                       model.eigenvalues);
            out.ranked.push_back({j, model.train_labels[j], d});
        }
    } else {
        const std::map<std::string, Vec> centers = centroids(model);
        // Representative index: the label's first occurrence in training order.
        for (const auto& [label, center] : centers) {
            std::size_t first = 0;
            while (model.train_labels[first] != label) ++first;
            const double d = config.metric == Metric::euclidean
                                 ? euclidean_dist(w.data(), center.data(), k)
                                 : eigen_weighted_dist(w.data(), center.data(),
                                                       model.eigenvalues);
            out.ranked.push_back({first, label, d});
        }
    }

    std::sort(out.ranked.begin(), out.ranked.end(),
              [](const RankedMatch& a, const RankedMatch& b) {
                  if (a.distance != b.distance) return a.distance < b.distance;
                  return a.index < b.index;
              });
    out.label = out.ranked.front().label;
    out.distance = out.ranked.front().distance;
    out.rejected = config.reject_threshold > 0.0 &&
                   out.distance > config.reject_threshold;
    return out;
}

std::map<std::string, Vec> centroids(const EigenModel& model) {
    const std::size_t m = model.sample_count();
    if (m == 0) throw ValueError("centroids: model has no training samples");
    const std::size_t k = model.component_count();

    std::map<std::string, Vec> sums;
    std::map<std::string, std::size_t> counts;
    for (std::size_t j = 0; j < m; ++j) {
        const std::string& label = model.train_labels[j];
        const auto it = sums.try_emplace(label, Vec(k, 0.0)).first;
        const double* col = model.train_weights.col(j);
        for (std::size_t i = 0; i < k; ++i) it->second[i] += col[i];
        ++counts[label];
    }
    for (auto& [label, sum] : sums) {
        const auto count = static_cast<double>(counts[label]);
        for (double& v : sum) v /= count;
    }
    return sums;
}

std::vector<std::pair<const Sample*, ClassificationResult>>
batch_classify(const EigenModel& model, const Dataset& dataset,
               const ClassifierConfig& config, unsigned threads) {
    std::vector<const Sample*> probes;
    for (const Sample& s : dataset.samples)
        if (s.split == Split::test) probes.push_back(&s);

    std::vector<std::pair<const Sample*, ClassificationResult>> results(
        probes.size());

    auto run_one = [&](std::size_t i) {
        try {
            results[i] = {probes[i], classify(model, probes[i]->pixels, config)};
        } catch (const DimensionError& e) {
            throw DimensionError("sample '" + probes[i]->source_path +
                                 "': " + e.what());
        } catch (const Error& e) {
            throw Error("sample '" + probes[i]->source_path + "': " + e.what());
        }
    };

    unsigned want = threads == 0 ? std::thread::hardware_concurrency() : threads;
    if (want == 0) want = 1;
    want = static_cast<unsigned>(
        std::min<std::size_t>(want, probes.size() ? probes.size() : 1));

    if (want <= 1 || probes.size() < 2) {
        for (std::size_t i = 0; i < probes.size(); ++i) run_one(i);
        return results;
    }

    // Contiguous chunks; the lowest failing sample index wins so the surfaced
    // error does not depend on scheduling.
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(want);
    std::vector<std::size_t> error_index(want, SIZE_MAX);
    const std::size_t chunk = (probes.size() + want - 1) / want;
    for (unsigned t = 0; t < want; ++t) {
        pool.emplace_back([&, t] {
            const std::size_t begin = static_cast<std::size_t>(t) * chunk;
            const std::size_t end = std::min(begin + chunk, probes.size());
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    run_one(i);
                } catch (...) {
                    errors[t] = std::current_exception();
                    error_index[t] = i;
                    return;
                }
            }
        });
    }
    for (std::thread& th : pool) th.join();

    std::size_t first_fail = SIZE_MAX;
    std::exception_ptr eptr;
    for (unsigned t = 0; t < want; ++t)
        if (errors[t] && error_index[t] < first_fail) {
            first_fail = error_index[t];
            eptr = errors[t];
        }
    if (eptr) std::rethrow_exception(eptr);
    return results;
}

} // namespace eigenexpr
