#include "eigenexpr/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace eigenexpr {

namespace {

void ensure_finite(const double* p, std::size_t n, const char* what) {
    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(p[i]))
            throw ValueError(std::string(what) + ": non-finite entry at index " +
                             std::to_string(i));
    }
}

double max_abs(const Mat& m) {
    double s = 0.0;
    for (double v : m.data) s = std::max(s, std::abs(v));
    return s;
}

double frob_norm(const Mat& m) {
    double s = 0.0;
    for (double v : m.data) s += v * v;
    return std::sqrt(s);
}

double offdiag_frob(const Mat& m) {
    double s = 0.0;
    for (std::size_t c = 0; c < m.cols; ++c)
        for (std::size_t r = 0; r < m.rows; ++r)
            if (r != c) s += m(r, c) * m(r, c);
    return std::sqrt(s);
}

// Flip each column so its largest-magnitude entry is positive; on magnitude
// ties the lowest index wins.
void fix_signs(Mat& v) {
    for (std::size_t c = 0; c < v.cols; ++c) {
        double* col = v.col(c);
        std::size_t pivot = 0;
        for (std::size_t r = 1; r < v.rows; ++r)
            if (std::abs(col[r]) > std::abs(col[pivot])) pivot = r;
        if (col[pivot] < 0.0)
            for (std::size_t r = 0; r < v.rows; ++r) col[r] = -col[r];
    }
}

} // namespace

Mat Mat::identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
}

double dot(const Vec& u, const Vec& v) {
    if (u.size() != v.size())
        throw DimensionError("dot: length mismatch (" + std::to_string(u.size()) +
                             " vs " + std::to_string(v.size()) + ")");
    double s = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
    return s;
}

double norm2(const Vec& v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

Vec axpy(double alpha, const Vec& u, const Vec& v) {
    if (u.size() != v.size())
        throw DimensionError("axpy: length mismatch (" + std::to_string(u.size()) +
                             " vs " + std::to_string(v.size()) + ")");
    Vec out(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = alpha * u[i] + v[i];
    return out;
}

Vec matvec(const Mat& a, const Vec& v) {
    if (a.cols != v.size())
        throw DimensionError("matvec: " + std::to_string(a.rows) + "x" +
                             std::to_string(a.cols) + " matrix vs length-" +
                             std::to_string(v.size()) + " vector");
    Vec out(a.rows, 0.0);
    for (std::size_t c = 0; c < a.cols; ++c) {
        const double* col = a.col(c);
        const double x = v[c];
        for (std::size_t r = 0; r < a.rows; ++r) out[r] += col[r] * x;
    }
    return out;
}

Mat gram(const Mat& a) {
    if (a.cols == 0) throw ValueError("gram: matrix has no columns");
    ensure_finite(a.data.data(), a.data.size(), "gram");
    Mat g(a.cols, a.cols);
    for (std::size_t i = 0; i < a.cols; ++i) {
        const double* ci = a.col(i);
        for (std::size_t j = i; j < a.cols; ++j) {
            const double* cj = a.col(j);
            double s = 0.0;
            for (std::size_t r = 0; r < a.rows; ++r) s += ci[r] * cj[r];
            g(i, j) = s;
            g(j, i) = s;
        }
    }
    return g;
}

EigenDecomposition sym_eigen(const Mat& m, double tol, std::size_t max_sweeps) {
    if (m.rows != m.cols)
        throw DimensionError("sym_eigen: matrix is " + std::to_string(m.rows) +
                             "x" + std::to_string(m.cols) + ", expected square");
    if (!(tol > 0.0)) throw ValueError("sym_eigen: tol must be positive");
    ensure_finite(m.data.data(), m.data.size(), "sym_eigen");

    const std::size_t n = m.rows;
    const double scale = max_abs(m);
    const double asym_tol = 1e-9 * (1.0 + scale);
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = c + 1; r < n; ++r)
            if (std::abs(m(r, c) - m(c, r)) > asym_tol)
                throw ValueError("sym_eigen: matrix is not symmetric at (" +
                                 std::to_string(r) + "," + std::to_string(c) +
                                 "): " + std::to_string(m(r, c)) + " vs " +
                                 std::to_string(m(c, r)));

    Mat w = m;
    // Symmetrize exactly so round-off in the caller cannot leak through.
    for (std::size_t c = 0; c < n; ++c)
        for (std::size_t r = c + 1; r < n; ++r) {
            const double avg = 0.5 * (w(r, c) + w(c, r));
            w(r, c) = avg;
            w(c, r) = avg;
        }

    Mat v = Mat::identity(n);
    const double stop = tol * std::max(1.0, frob_norm(w));

    bool converged = offdiag_frob(w) <= stop;
    for (std::size_t sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const double apq = w(p, q);
                if (apq == 0.0) continue;
                const double app = w(p, p);
                const double aqq = w(q, q);
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                const double tau = s / (1.0 + c);

                w(p, p) = app - t * apq;
                w(q, q) = aqq + t * apq;
                w(p, q) = 0.0;
                w(q, p) = 0.0;
                for (std::size_t r = 0; r < n; ++r) {
                    if (r != p && r != q) {
                        const double arp = w(r, p);
                        const double arq = w(r, q);
                        const double nrp = arp - s * (arq + tau * arp);
                        const double nrq = arq + s * (arp - tau * arq);
                        w(r, p) = nrp;
                        w(p, r) = nrp;
                        w(r, q) = nrq;
                        w(q, r) = nrq;
                    }
                    const double vrp = v(r, p);
                    const double vrq = v(r, q);
                    v(r, p) = vrp - s * (vrq + tau * vrp);
                    v(r, q) = vrq + s * (vrp - tau * vrq);
                }
            }
        }
        converged = offdiag_frob(w) <= stop;
    }
    if (!converged) {
        const double resid = offdiag_frob(w);
        throw ConvergenceError("sym_eigen: no convergence after " +
                                   std::to_string(max_sweeps) +
                                   " sweeps, off-diagonal norm " +
                                   std::to_string(resid),
                               resid);
    }

    // Sort descending by eigenvalue; equal values keep their Jacobi order so
    // the result is a deterministic function of the input.
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return w(a, a) > w(b, b); });

    EigenDecomposition out;
    out.eigenvalues.resize(n);
    out.eigenvectors = Mat(n, n);
    for (std::size_t c = 0; c < n; ++c) {
        out.eigenvalues[c] = w(order[c], order[c]);
        const double* src = v.col(order[c]);
        std::copy(src, src + n, out.eigenvectors.col(c));
    }
    fix_signs(out.eigenvectors);
    return out;
}

} // namespace eigenexpr
