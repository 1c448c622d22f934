#include "eigenexpr/pca.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <system_error>

namespace eigenexpr {

namespace {

// Gram eigenvalues at or below this are rank-0 noise regardless of config;
// pixels live in [0,1], so genuine variation sits many orders above it.
constexpr double kRankZeroFloor = 1e-20;

std::string fmt_double(double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v,
                                   std::chars_format::general);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string& tok, const std::string& context) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw FormatError(context + ": bad float '" + tok + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& tok, const std::string& context) {
    std::uint64_t v = 0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size())
        throw FormatError(context + ": bad integer '" + tok + "'");
    return v;
}

std::uint64_t fnv1a64(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex16(std::uint64_t v) {
    static const char* digits = "0123456789abcdef";
    std::string s(16, '0');
    for (int i = 15; i >= 0; --i) {
        s[i] = digits[v & 0xf];
        v >>= 4;
    }
    return s;
}

// Line-oriented reader for the model file.
struct ModelReader {
    const std::string& path;
    std::istringstream in;
    std::size_t lineno = 0;

    ModelReader(const std::string& p, const std::string& text)
        : path(p), in(text) {}

    [[noreturn]] void fail(const std::string& msg) {
        throw FormatError(path + ":" + std::to_string(lineno) + ": " + msg);
    }

    std::string next_line(const char* what) {
        std::string line;
        if (!std::getline(in, line))
            fail(std::string("truncated file, expected ") + what);
        ++lineno;
        return line;
    }

    // Reads "key value"; the key is fixed, the value is returned.
    std::string keyed(const std::string& key) {
        const std::string line = next_line(key.c_str());
        if (line.size() < key.size() + 2 || line.compare(0, key.size(), key) != 0 ||
            line[key.size()] != ' ')
            fail("expected '" + key + " <value>', got '" + line + "'");
        return line.substr(key.size() + 1);
    }

    void section(const std::string& name) {
        const std::string line = next_line(name.c_str());
        if (line != name) fail("expected section '" + name + "', got '" + line + "'");
    }

    Vec float_row(std::size_t count, const char* what) {
        const std::string line = next_line(what);
        Vec out;
        out.reserve(count);
        std::size_t pos = 0;
        while (pos < line.size()) {
            std::size_t end = line.find(' ', pos);
            if (end == std::string::npos) end = line.size();
            out.push_back(parse_double(line.substr(pos, end - pos),
                                       path + ":" + std::to_string(lineno)));
            pos = end + 1;
        }
        if (out.size() != count)
            fail(std::string(what) + ": expected " + std::to_string(count) +
                 " values, got " + std::to_string(out.size()));
        return out;
    }
};

void append_float_row(std::string& out, const double* v, std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
        if (i) out += ' ';
        out += fmt_double(v[i]);
    }
    out += '\n';
}

} // namespace

void TrainConfig::validate() const {
    if (!(variance_threshold > 0.0) || variance_threshold > 1.0)
        throw ValueError("train config: variance_threshold must be in (0, 1]");
    if (!(eigen_tol > 0.0))
        throw ValueError("train config: eigen_tol must be positive");
    if (!(null_eigen_ratio >= 0.0))
        throw ValueError("train config: null_eigen_ratio must be nonnegative");
}

EigenModel train(const Dataset& dataset, const TrainConfig& config) {
    config.validate();
    const std::size_t n = dataset.width * dataset.height;

    std::vector<const Sample*> pool;
    for (const Sample& s : dataset.samples)
        if (s.split == Split::train) pool.push_back(&s);
    const std::size_t m = pool.size();
    if (m < 2)
        throw ValueError("train: need at least 2 training samples, got " +
                         std::to_string(m));
    for (const Sample* s : pool)
        if (s->pixels.size() != n)
            throw DimensionError("train: sample '" + s->source_path + "' has " +
                                 std::to_string(s->pixels.size()) +
                                 " pixels, expected " + std::to_string(n));

    // Mean face.
    Vec mean(n, 0.0);
    for (const Sample* s : pool)
        for (std::size_t i = 0; i < n; ++i) mean[i] += s->pixels[i];
    for (double& v : mean) v /= static_cast<double>(m);

    // Centered data matrix, one image per column.
    Mat centered(n, m);
    for (std::size_t j = 0; j < m; ++j) {
        double* col = centered.col(j);
        const Vec& px = pool[j]->pixels;
        for (std::size_t i = 0; i < n; ++i) col[i] = px[i] - mean[i];
    }

    // Snapshot method: eigenpairs of the M x M Gram matrix.
    const EigenDecomposition ed = sym_eigen(gram(centered), config.eigen_tol);

    // Clamp round-off negatives, detect degenerate data, drop null
    // directions. The rank of centered data is at most min(M-1, N).
    Vec lam = ed.eigenvalues;
    for (double& v : lam) v = std::max(v, 0.0);
    if (lam[0] <= kRankZeroFloor)
        throw ValueError("train: training images are identical (rank 0 after centering)");
    std::size_t rank = 0;
    while (rank < m && lam[rank] > config.null_eigen_ratio * lam[0]) ++rank;
    rank = std::min(rank, std::min(m - 1, n));

    // Covariance (A A^T / M) eigenvalues; total includes dropped positives.
    double total = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        if (lam[i] > 0.0) total += lam[i] / static_cast<double>(m);

    // k = smallest count reaching the variance threshold, then caps.
    std::size_t k = rank;
    double cum = 0.0;
    for (std::size_t i = 0; i < rank; ++i) {
        cum += lam[i] / static_cast<double>(m);
        if (cum / total >= config.variance_threshold) {
            k = i + 1;
            break;
        }
    }
    if (config.max_components > 0) k = std::min(k, config.max_components);

    // Eigenfaces u_i = A v_i / ||A v_i|| for the retained components.
    EigenModel model;
    model.width = dataset.width;
    model.height = dataset.height;
    model.mean_face = std::move(mean);
    model.total_variance = total;
    model.config = config;
    model.eigenfaces = Mat(n, k);
    model.eigenvalues.resize(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Vec vi(ed.eigenvectors.col(i), ed.eigenvectors.col(i) + m);
        const Vec u = matvec(centered, vi);
        const double len = norm2(u);
        if (!(len > 0.0))
            throw ValueError("train: null eigenface for component " +
                             std::to_string(i));
        double* col = model.eigenfaces.col(i);
        for (std::size_t r = 0; r < n; ++r) col[r] = u[r] / len;
        model.eigenvalues[i] = lam[i] / static_cast<double>(m);
    }

    // Project every training image through the public path.
    model.train_weights = Mat(k, m);
    model.train_labels.resize(m);
    model.train_subjects.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
        const Vec w = project(model, pool[j]->pixels);
        std::copy(w.begin(), w.end(), model.train_weights.col(j));
        model.train_labels[j] = pool[j]->label;
        model.train_subjects[j] = pool[j]->subject;
    }
    return model;
}

Vec project(const EigenModel& model, const Vec& pixels) {
    const std::size_t n = model.pixel_count();
    if (pixels.size() != n)
        throw DimensionError("project: expected " + std::to_string(n) +
                             " pixels, got " + std::to_string(pixels.size()));
    const std::size_t k = model.component_count();
    Vec w(k, 0.0);
    for (std::size_t i = 0; i < k; ++i) {
        const double* face = model.eigenfaces.col(i);
        double s = 0.0;
        for (std::size_t r = 0; r < n; ++r)
            s += face[r] * (pixels[r] - model.mean_face[r]);
        w[i] = s;
    }
    return w;
}

Vec reconstruct(const EigenModel& model, const Vec& weights) {
    const std::size_t k = model.component_count();
    if (weights.size() != k)
        throw DimensionError("reconstruct: expected " + std::to_string(k) +
                             " weights, got " + std::to_string(weights.size()));
    Vec out = model.mean_face;
    for (std::size_t i = 0; i < k; ++i) {
        const double* face = model.eigenfaces.col(i);
        const double wi = weights[i];
        for (std::size_t r = 0; r < out.size(); ++r) out[r] += face[r] * wi;
    }
    return out;
}

double explained_variance(const EigenModel& model, std::size_t j) {
    if (j < 1 || j > model.component_count())
        throw ValueError("explained_variance: component index " + std::to_string(j) +
                         " out of range [1, " +
                         std::to_string(model.component_count()) + "]");
    double cum = 0.0;
    for (std::size_t i = 0; i < j; ++i) cum += model.eigenvalues[i];
    return cum / model.total_variance;
}

void save_model(const EigenModel& model, const std::string& path) {
    const std::size_t n = model.pixel_count();
    const std::size_t k = model.component_count();
    const std::size_t m = model.sample_count();

    std::string out;
    out += "eigenexpr-model 1\n";
    out += "width " + std::to_string(model.width) + "\n";
    out += "height " + std::to_string(model.height) + "\n";
    out += "samples " + std::to_string(m) + "\n";
    out += "components " + std::to_string(k) + "\n";
    out += "total_variance " + fmt_double(model.total_variance) + "\n";
    out += "variance_threshold " + fmt_double(model.config.variance_threshold) + "\n";
    out += "max_components " + std::to_string(model.config.max_components) + "\n";
    out += "eigen_tol " + fmt_double(model.config.eigen_tol) + "\n";
    out += "null_eigen_ratio " + fmt_double(model.config.null_eigen_ratio) + "\n";
    out += "labels\n";
    for (const std::string& s : model.train_labels) out += s + "\n";
    out += "subjects\n";
    for (const std::string& s : model.train_subjects) out += s + "\n";
    out += "eigenvalues\n";
    append_float_row(out, model.eigenvalues.data(), k);
    out += "mean_face\n";
    append_float_row(out, model.mean_face.data(), n);
    out += "eigenfaces\n";
    for (std::size_t i = 0; i < k; ++i)
        append_float_row(out, model.eigenfaces.col(i), n);
    out += "train_weights\n";
    for (std::size_t j = 0; j < m; ++j)
        append_float_row(out, model.train_weights.col(j), k);
    out += "checksum " + hex16(fnv1a64(out)) + "\n";

    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError(path + ": cannot open for writing");
    f << out;
    if (!f) throw IoError(path + ": write failed");
}

EigenModel load_model(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError(path + ": cannot open for reading");
    std::ostringstream buf;
    buf << f.rdbuf();
    const std::string text = buf.str();

    // Version gates everything else; a future format may checksum differently.
    if (text.rfind("eigenexpr-model ", 0) != 0)
        throw FormatError(path + ": not an eigenexpr model file");
    const std::size_t eol = text.find('\n');
    if (eol == std::string::npos)
        throw FormatError(path + ": truncated header");
    const std::uint64_t version = parse_u64(text.substr(16, eol - 16),
                                            path + ": version");
    if (version != 1)
        throw FormatError(path + ": unsupported format_version " +
                          std::to_string(version) + " (supported: 1)");

    // The checksum line covers every preceding byte.
    const std::string marker = "checksum ";
    const std::size_t cpos = text.rfind("\n" + marker);
    if (cpos == std::string::npos)
        throw FormatError(path + ": missing checksum line (truncated file?)");
    const std::string payload = text.substr(0, cpos + 1);
    const std::size_t hash_at = cpos + 1 + marker.size();
    const std::string stored = text.substr(hash_at, 16);
    if (stored.size() != 16 || hex16(fnv1a64(payload)) != stored)
        throw FormatError(path + ": checksum mismatch, file is corrupt");

    ModelReader r(path, payload);
    r.next_line("magic header"); // already validated above

    EigenModel model;
    model.width = parse_u64(r.keyed("width"), path);
    model.height = parse_u64(r.keyed("height"), path);
    const std::size_t m = parse_u64(r.keyed("samples"), path);
    const std::size_t k = parse_u64(r.keyed("components"), path);
    model.total_variance = parse_double(r.keyed("total_variance"), path);
    model.config.variance_threshold =
        parse_double(r.keyed("variance_threshold"), path);
    model.config.max_components = parse_u64(r.keyed("max_components"), path);
    model.config.eigen_tol = parse_double(r.keyed("eigen_tol"), path);
    model.config.null_eigen_ratio = parse_double(r.keyed("null_eigen_ratio"), path);

    const std::size_t n = model.pixel_count();
    if (n == 0 || k == 0 || m == 0)
        throw FormatError(path + ": empty model (zero dimensions)");
    if (k > m || k > n)
        throw FormatError(path + ": shape inconsistency: components " +
                          std::to_string(k) + " exceeds samples " +
                          std::to_string(m) + " or pixels " + std::to_string(n));

    r.section("labels");
    model.train_labels.reserve(m);
    for (std::size_t j = 0; j < m; ++j)
        model.train_labels.push_back(r.next_line("label"));
    r.section("subjects");
    model.train_subjects.reserve(m);
    for (std::size_t j = 0; j < m; ++j)
        model.train_subjects.push_back(r.next_line("subject"));

    r.section("eigenvalues");
    model.eigenvalues = r.float_row(k, "eigenvalues");
    r.section("mean_face");
    model.mean_face = r.float_row(n, "mean_face");
    r.section("eigenfaces");
    model.eigenfaces = Mat(n, k);
    for (std::size_t i = 0; i < k; ++i) {
        const Vec row = r.float_row(n, "eigenface");
        std::copy(row.begin(), row.end(), model.eigenfaces.col(i));
    }
    r.section("train_weights");
    model.train_weights = Mat(k, m);
    for (std::size_t j = 0; j < m; ++j) {
        const Vec row = r.float_row(k, "train_weights");
        std::copy(row.begin(), row.end(), model.train_weights.col(j));
    }
    return model;
}

} // namespace eigenexpr
