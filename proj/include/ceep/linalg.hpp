#pragma once

// Dense complex linear algebra: the matrix carrier, eigendecomposition,
// matrix exponential and integer powers. Every spectral or positivity test
// elsewhere in the library reduces to the routines declared here.

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ceep {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

namespace tol {
/// Eigenpair residual bound, relative to the Frobenius norm of the input.
inline constexpr double eig = 1e-8;
/// Eigenvalues closer than cluster * max(1, ||M||_F) count as one eigenvalue.
inline constexpr double cluster = 1e-6;
/// Frobenius agreement between expm and the Taylor series oracle.
inline constexpr double expm = 1e-10;
}  // namespace tol

/// Dense row-major matrix of complex scalars.
class ComplexMatrix {
public:
    ComplexMatrix() = default;
    ComplexMatrix(std::size_t rows, std::size_t cols);
    ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);
    ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static ComplexMatrix identity(std::size_t n);
    static ComplexMatrix zeros(std::size_t n) { return ComplexMatrix(n, n); }
    static ComplexMatrix diagonal(std::span<const Complex> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool is_square() const noexcept { return rows_ == cols_; }
    bool empty() const noexcept { return entries_.empty(); }

    Complex& operator()(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
    const Complex& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

    std::span<Complex> row(std::size_t r) { return {entries_.data() + r * cols_, cols_}; }
    std::span<const Complex> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }
    ComplexVector column(std::size_t c) const;
    void set_column(std::size_t c, std::span<const Complex> values);

    std::span<const Complex> entries() const noexcept { return entries_; }

    ComplexMatrix transpose() const;
    ComplexMatrix adjoint() const;
    ComplexMatrix conj() const;

    double frobenius_norm() const;
    double norm1() const;
    double max_abs() const;
    Complex trace() const;
    bool all_finite() const;

    ComplexMatrix& operator+=(const ComplexMatrix& other);
    ComplexMatrix& operator-=(const ComplexMatrix& other);
    ComplexMatrix& operator*=(Complex scale);

    friend bool operator==(const ComplexMatrix&, const ComplexMatrix&) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs);
ComplexMatrix operator-(ComplexMatrix m);
ComplexMatrix operator*(Complex scale, ComplexMatrix m);
ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs);
ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v);

/// Outer product x * y^H.
ComplexMatrix outer(std::span<const Complex> x, std::span<const Complex> y);

double norm2(std::span<const Complex> v);
/// y^H x.
Complex dot(std::span<const Complex> y, std::span<const Complex> x);

/// Solves A X = B by LU with partial pivoting. Throws DomainError if A is singular.
ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b);

/// (M + M^H) / 2.
ComplexMatrix hermitian_part(const ComplexMatrix& m);
/// ||M M^H - M^H M||_F <= tolerance.
bool is_normal(const ComplexMatrix& m, double tolerance = 1e-9);

/// Rank from Gaussian elimination with complete pivoting; pivots below
/// `relative_tolerance * max|M|` count as zero.
std::size_t numeric_rank(const ComplexMatrix& m, double relative_tolerance = 1e-8);

struct SpectralSummary {
    /// Sorted by spectral_order with sort_quantum(eigenvalues).
    ComplexVector eigenvalues;
    /// Column i is the unit right eigenvector for eigenvalues[i].
    ComplexMatrix right_vectors;
    /// Column i is the unit left eigenvector z (z^H M = lambda z^H) for eigenvalues[i].
    ComplexMatrix left_vectors;
    std::size_t dominant_index = 0;
    /// ||M x - lambda x||_2 per pair.
    std::vector<double> residuals;
    /// ||z^H M - lambda z^H||_2 per pair.
    std::vector<double> left_residuals;
    /// ||M||_F of the decomposed matrix.
    double matrix_norm = 0.0;

    std::size_t size() const noexcept { return eigenvalues.size(); }
    ComplexVector right_vector(std::size_t i) const { return right_vectors.column(i); }
    ComplexVector left_vector(std::size_t i) const { return left_vectors.column(i); }
    /// Radius within which two eigenvalues are the same eigenvalue.
    double cluster_radius() const;
    /// Algebraic multiplicity of eigenvalues[i] by clustering.
    std::size_t multiplicity(std::size_t i) const;
};

/// Cluster radius tol::cluster * max(1, frobenius_norm).
double cluster_radius(double frobenius_norm);

/// Number of entries of `values` within `radius` of `center`.
std::size_t count_within(std::span<const Complex> values, Complex center, double radius);

/// Sort key shared by every spectrum the library reports: descending modulus,
/// then descending real part, then descending imaginary part. Modulus and real
/// part are compared after rounding to multiples of `quantum`, so exact ties
/// (conjugate pairs, circulant spectra) are not decided by rounding noise.
bool spectral_order(const Complex& a, const Complex& b, double quantum = 0.0);

/// The quantum eigenvalues() sorts with: 1e-9 * max(1, max |lambda|).
double sort_quantum(std::span<const Complex> values);

/// Full eigensystem: Hessenberg reduction, Wilkinson-shifted complex QR,
/// inverse iteration for right and left eigenvectors.
SpectralSummary eig(const ComplexMatrix& m);

/// Eigenvalues only, sorted by spectral_order.
ComplexVector eigenvalues(const ComplexMatrix& m);

/// n - rank(M - lambda I). Less than the algebraic multiplicity iff lambda is defective.
std::size_t geometric_multiplicity(const ComplexMatrix& m, Complex lambda);

/// Matrix exponential by scaling and squaring with the [13/13] Pade approximant.
ComplexMatrix expm(const ComplexMatrix& m);

/// Truncated Taylor series sum M^k / k!, stopping once a term's Frobenius norm
/// drops below 1e-14. Throws ConvergenceError if that needs more than k_max terms.
/// Meant only as an independent check on expm for small, moderate-norm inputs.
ComplexMatrix expm_series_oracle(const ComplexMatrix& m, std::size_t k_max);

/// M^k by binary exponentiation; M^0 = I.
ComplexMatrix matpow(const ComplexMatrix& m, unsigned k);

}  // namespace ceep
