#include "eigenexpr/pnm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace eigenexpr {

namespace {

struct Cursor {
    const std::string& path;
    const std::string& bytes;
    std::size_t pos = 0;

    bool eof() const { return pos >= bytes.size(); }

    [[noreturn]] void fail(const std::string& msg) const {
        throw FormatError(path + ": " + msg);
    }

    // Skips whitespace and '#' comments (comment runs to end of line).
    void skip_space_and_comments() {
        while (!eof()) {
            const char c = bytes[pos];
            if (c == '#') {
                while (!eof() && bytes[pos] != '\n') ++pos;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos;
            } else {
                break;
            }
        }
    }

    int read_int(const char* what) {
        skip_space_and_comments();
        if (eof()) fail(std::string("truncated header, missing ") + what);
        if (!std::isdigit(static_cast<unsigned char>(bytes[pos])))
            fail(std::string("expected ") + what + ", found '" + bytes[pos] + "'");
        long v = 0;
        while (!eof() && std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
            v = v * 10 + (bytes[pos] - '0');
            if (v > 1000000000L) fail(std::string(what) + " out of range");
            ++pos;
        }
        return static_cast<int>(v);
    }
};

} // namespace

PnmImage read_pnm(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path + ": cannot open for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    const std::string bytes = buf.str();

    Cursor cur{path, bytes};
    if (bytes.size() < 2 || bytes[0] != 'P') cur.fail("not a PNM file (bad magic)");
    const char kind = bytes[1];
    if (kind != '2' && kind != '3' && kind != '5' && kind != '6')
        cur.fail(std::string("unsupported format P") + kind +
                 " (P2/P3/P5/P6 required)");
    cur.pos = 2;

    PnmImage img;
    img.channels = (kind == '3' || kind == '6') ? 3 : 1;
    img.width = cur.read_int("width");
    img.height = cur.read_int("height");
    img.maxval = cur.read_int("maxval");
    if (img.width <= 0 || img.height <= 0) cur.fail("non-positive dimensions");
    if (img.maxval <= 0) cur.fail("maxval must be positive");
    if (img.maxval > 65535) cur.fail("maxval exceeds 65535");

    const std::size_t count = static_cast<std::size_t>(img.width) * img.height *
                              img.channels;
    img.samples.resize(count);

    if (kind == '2' || kind == '3') {
        for (std::size_t i = 0; i < count; ++i) {
            const int v = cur.read_int("sample");
            if (v > img.maxval)
                cur.fail("sample value " + std::to_string(v) + " exceeds maxval " +
                         std::to_string(img.maxval));
            img.samples[i] = static_cast<std::uint16_t>(v);
        }
    } else {
        // Exactly one whitespace byte separates maxval from the raster.
        if (cur.eof() || !std::isspace(static_cast<unsigned char>(bytes[cur.pos])))
            cur.fail("missing whitespace before binary raster");
        ++cur.pos;
        const std::size_t per_sample = img.maxval < 256 ? 1 : 2;
        if (bytes.size() - cur.pos < count * per_sample)
            cur.fail("truncated pixel data: expected " +
                     std::to_string(count * per_sample) + " bytes, found " +
                     std::to_string(bytes.size() - cur.pos));
        for (std::size_t i = 0; i < count; ++i) {
            std::uint16_t v;
            if (per_sample == 1) {
                v = static_cast<std::uint8_t>(bytes[cur.pos++]);
            } else {
                const auto hi = static_cast<std::uint8_t>(bytes[cur.pos++]);
                const auto lo = static_cast<std::uint8_t>(bytes[cur.pos++]);
                v = static_cast<std::uint16_t>((hi << 8) | lo);
            }
            if (v > img.maxval)
                cur.fail("sample value " + std::to_string(v) + " exceeds maxval " +
                         std::to_string(img.maxval));
            img.samples[i] = v;
        }
    }
    return img;
}

void write_pgm(const std::string& path, int width, int height, int maxval,
               const std::vector<double>& pixels) {
    if (width <= 0 || height <= 0)
        throw ValueError("write_pgm: non-positive dimensions");
    if (maxval <= 0 || maxval > 65535)
        throw ValueError("write_pgm: maxval must be in [1, 65535]");
    const std::size_t count = static_cast<std::size_t>(width) * height;
    if (pixels.size() != count)
        throw DimensionError("write_pgm: expected " + std::to_string(count) +
                             " pixels, got " + std::to_string(pixels.size()));

    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError(path + ": cannot open for writing");
    out << "P5\n" << width << " " << height << "\n" << maxval << "\n";
    for (double p : pixels) {
        const double clamped = std::clamp(p, 0.0, 1.0);
        const auto q = static_cast<std::uint32_t>(std::lround(clamped * maxval));
        if (maxval < 256) {
            out.put(static_cast<char>(q));
        } else {
            out.put(static_cast<char>(q >> 8));
            out.put(static_cast<char>(q & 0xff));
        }
    }
    if (!out) throw IoError(path + ": write failed");
}

} // namespace eigenexpr
