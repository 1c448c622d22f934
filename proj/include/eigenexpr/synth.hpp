#ifndef EIGENEXPR_SYNTH_HPP
#define EIGENEXPR_SYNTH_HPP

#include <cstddef>
#include <cstdint>
#include <string>

#include "eigenexpr/error.hpp"

namespace eigenexpr {

/// Parameters for the synthetic dataset generator.
struct SynthConfig {
    std::size_t classes = 7;
    std::size_t per_class_train = 20;
    std::size_t per_class_test = 10;
    std::size_t width = 64;
    std::size_t height = 64;
    double noise_sigma = 0.05;
    std::uint64_t seed = 42;

    void validate() const;
};

/// Writes a desk-scale dataset under out_dir: P5 images plus manifest.csv.
///
/// Each class gets a sinusoidal grating with its own orientation, spatial
/// frequency, and phase; per-image Gaussian pixel noise of std noise_sigma
/// is added and the result clamped to [0, 1]. Class labels cycle through the
/// seven basic expression categories, then "pain", "rotation", then
/// "classNN". Byte-identical output for identical configs.
///
/// Returns the manifest path.
std::string generate_synthetic(const SynthConfig& config,
                               const std::string& out_dir);

} // namespace eigenexpr

#endif // EIGENEXPR_SYNTH_HPP
