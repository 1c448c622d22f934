#ifndef EIGENEXPR_LINALG_HPP
#define EIGENEXPR_LINALG_HPP

#include <cstddef>
#include <vector>

#include "eigenexpr/error.hpp"

namespace eigenexpr {

/// Dense real vector. All public operations keep entries finite.
using Vec = std::vector<double>;

/// Dense real matrix, column-major: element (r, c) sits at data[c * rows + r].
/// Columns are the semantic unit throughout (images, eigenfaces), so column
/// access dominates.
struct Mat {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Mat() = default;
    Mat(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t r, std::size_t c) { return data[c * rows + r]; }
    double operator()(std::size_t r, std::size_t c) const { return data[c * rows + r]; }

    double* col(std::size_t c) { return data.data() + c * rows; }
    const double* col(std::size_t c) const { return data.data() + c * rows; }

    static Mat identity(std::size_t n);
};

/// Result of a symmetric eigendecomposition. Eigenvalues are sorted
/// descending; eigenvectors holds one unit-norm column per eigenvalue,
/// sign-fixed so each column's largest-magnitude entry is positive
/// (ties broken toward the lowest index).
struct EigenDecomposition {
    Vec eigenvalues;
    Mat eigenvectors;
};

/// Dot product, summed in ascending index order.
double dot(const Vec& u, const Vec& v);

/// Euclidean norm.
double norm2(const Vec& v);

/// alpha * u + v, elementwise.
Vec axpy(double alpha, const Vec& u, const Vec& v);

/// Matrix-vector product a * v, each entry summed in ascending index order.
Vec matvec(const Mat& a, const Vec& v);

/// a^T * a. The upper triangle is computed and mirrored, so the result is
/// exactly symmetric.
Mat gram(const Mat& a);

/// Eigendecomposition of a symmetric matrix by cyclic Jacobi sweeps.
///
/// `m` must be square and symmetric within 1e-9 * (1 + max|m|). Sweeps run
/// until the off-diagonal Frobenius norm drops to tol * max(1, ||m||_F),
/// or ConvergenceError after max_sweeps. Deterministic: identical input
/// yields bit-identical output.
EigenDecomposition sym_eigen(const Mat& m, double tol = 1e-10,
                             std::size_t max_sweeps = 100);

} // namespace eigenexpr

#endif // EIGENEXPR_LINALG_HPP
