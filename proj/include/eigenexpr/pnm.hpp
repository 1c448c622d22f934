#ifndef EIGENEXPR_PNM_HPP
#define EIGENEXPR_PNM_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "eigenexpr/error.hpp"

namespace eigenexpr {

/// Decoded portable anymap. `samples` holds rows top to bottom, pixels left
/// to right, `channels` interleaved values per pixel (1 for graymaps, 3 for
/// pixmaps), each in [0, maxval].
struct PnmImage {
    int width = 0;
    int height = 0;
    int maxval = 0;
    int channels = 1;
    std::vector<std::uint16_t> samples;
};

/// Reads a P2/P3/P5/P6 file. maxval must be in [1, 65535]; binary rasters
/// with maxval > 255 use two bytes per sample, most significant first.
PnmImage read_pnm(const std::string& path);

/// Writes a binary graymap (P5). `pixels` are row-major values in [0, 1],
/// quantized to round(v * maxval); values outside [0, 1] are clamped.
void write_pgm(const std::string& path, int width, int height, int maxval,
               const std::vector<double>& pixels);

} // namespace eigenexpr

#endif // EIGENEXPR_PNM_HPP
