#include "ceep/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

#include "ceep/error.hpp"

namespace ceep {

namespace {

void require_same_shape(const ComplexMatrix& a, const ComplexMatrix& b, const char* op) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw DimensionError(std::string(op) + ": shape mismatch " + std::to_string(a.rows()) + "x" +
                             std::to_string(a.cols()) + " vs " + std::to_string(b.rows()) + "x" +
                             std::to_string(b.cols()));
    }
}

}  // namespace

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols)
    : rows_(rows), cols_(cols), entries_(rows * cols, Complex{}) {}

ComplexMatrix::ComplexMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw DimensionError("matrix entry count " + std::to_string(entries_.size()) + " != " +
                             std::to_string(rows_) + "x" + std::to_string(cols_));
    }
}

ComplexMatrix::ComplexMatrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    entries_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
        if (r.size() != cols_) {
            throw DimensionError("ragged initializer list");
        }
        entries_.insert(entries_.end(), r.begin(), r.end());
    }
}

ComplexMatrix ComplexMatrix::identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const Complex> values) {
    ComplexMatrix m(values.size(), values.size());
    for (std::size_t i = 0; i < values.size(); ++i) {
        m(i, i) = values[i];
    }
    return m;
}

ComplexVector ComplexMatrix::column(std::size_t c) const {
    ComplexVector out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r] = (*this)(r, c);
    }
    return out;
}

void ComplexMatrix::set_column(std::size_t c, std::span<const Complex> values) {
    if (values.size() != rows_) {
        throw DimensionError("set_column: length mismatch");
    }
    for (std::size_t r = 0; r < rows_; ++r) {
        (*this)(r, c) = values[r];
    }
}

ComplexMatrix ComplexMatrix::transpose() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t(c, r) = (*this)(r, c);
        }
    }
    return t;
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            t(c, r) = std::conj((*this)(r, c));
        }
    }
    return t;
}

ComplexMatrix ComplexMatrix::conj() const {
    ComplexMatrix out = *this;
    for (auto& e : out.entries_) {
        e = std::conj(e);
    }
    return out;
}

double ComplexMatrix::frobenius_norm() const {
    double scale = 0.0;
    double sum = 1.0;
    // scaled accumulation, same as LAPACK's zlassq
    for (const auto& e : entries_) {
        for (double part : {e.real(), e.imag()}) {
            const double a = std::abs(part);
            if (a == 0.0) {
                continue;
            }
            if (scale < a) {
                sum = 1.0 + sum * (scale / a) * (scale / a);
                scale = a;
            } else {
                sum += (a / scale) * (a / scale);
            }
        }
    }
    return scale * std::sqrt(sum);
}

double ComplexMatrix::norm1() const {
    double best = 0.0;
    for (std::size_t c = 0; c < cols_; ++c) {
        double col = 0.0;
        for (std::size_t r = 0; r < rows_; ++r) {
            col += std::abs((*this)(r, c));
        }
        best = std::max(best, col);
    }
    return best;
}

double ComplexMatrix::max_abs() const {
    double best = 0.0;
    for (const auto& e : entries_) {
        best = std::max(best, std::abs(e));
    }
    return best;
}

Complex ComplexMatrix::trace() const {
    Complex t{};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
        t += (*this)(i, i);
    }
    return t;
}

bool ComplexMatrix::all_finite() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const Complex& e) { return std::isfinite(e.real()) && std::isfinite(e.imag()); });
}

ComplexMatrix& ComplexMatrix::operator+=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator+");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] += other.entries_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator-=(const ComplexMatrix& other) {
    require_same_shape(*this, other, "operator-");
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] -= other.entries_[i];
    }
    return *this;
}

ComplexMatrix& ComplexMatrix::operator*=(Complex scale) {
    for (auto& e : entries_) {
        e *= scale;
    }
    return *this;
}

ComplexMatrix operator+(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs += rhs; }
ComplexMatrix operator-(ComplexMatrix lhs, const ComplexMatrix& rhs) { return lhs -= rhs; }
ComplexMatrix operator-(ComplexMatrix m) { return m *= -1.0; }
ComplexMatrix operator*(Complex scale, ComplexMatrix m) { return m *= scale; }

ComplexMatrix operator*(const ComplexMatrix& lhs, const ComplexMatrix& rhs) {
    if (lhs.cols() != rhs.rows()) {
        throw DimensionError("matrix product: inner dimensions " + std::to_string(lhs.cols()) + " and " +
                             std::to_string(rhs.rows()));
    }
    ComplexMatrix out(lhs.rows(), rhs.cols());
    for (std::size_t i = 0; i < lhs.rows(); ++i) {
        auto out_row = out.row(i);
        for (std::size_t k = 0; k < lhs.cols(); ++k) {
            const Complex a = lhs(i, k);
            if (a == Complex{}) {
                continue;
            }
            const auto rhs_row = rhs.row(k);
            for (std::size_t j = 0; j < rhs.cols(); ++j) {
                out_row[j] += a * rhs_row[j];
            }
        }
    }
    return out;
}

ComplexVector operator*(const ComplexMatrix& m, std::span<const Complex> v) {
    if (m.cols() != v.size()) {
        throw DimensionError("matrix-vector product: " + std::to_string(m.cols()) + " columns, vector of " +
                             std::to_string(v.size()));
    }
    ComplexVector out(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        Complex acc{};
        const auto r = m.row(i);
        for (std::size_t j = 0; j < v.size(); ++j) {
            acc += r[j] * v[j];
        }
        out[i] = acc;
    }
    return out;
}

ComplexMatrix outer(std::span<const Complex> x, std::span<const Complex> y) {
    ComplexMatrix out(x.size(), y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = 0; j < y.size(); ++j) {
            out(i, j) = x[i] * std::conj(y[j]);
        }
    }
    return out;
}

double norm2(std::span<const Complex> v) {
    double scale = 0.0;
    for (const auto& e : v) {
        scale = std::max(scale, std::abs(e));
    }
    if (scale == 0.0) {
        return 0.0;
    }
    double sum = 0.0;
    for (const auto& e : v) {
        sum += std::norm(e / scale);
    }
    return scale * std::sqrt(sum);
}

Complex dot(std::span<const Complex> y, std::span<const Complex> x) {
    if (x.size() != y.size()) {
        throw DimensionError("dot: length mismatch");
    }
    Complex acc{};
    for (std::size_t i = 0; i < x.size(); ++i) {
        acc += std::conj(y[i]) * x[i];
    }
    return acc;
}

ComplexMatrix solve(const ComplexMatrix& a, const ComplexMatrix& b) {
    if (!a.is_square() || a.rows() != b.rows()) {
        throw DimensionError("solve: expected square A with matching right-hand side");
    }
    const std::size_t n = a.rows();
    ComplexMatrix lu = a;
    ComplexMatrix x = b;
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) {
                pivot = i;
            }
        }
        if (lu(pivot, k) == Complex{}) {
            throw DomainError("solve: matrix is singular");
        }
        if (pivot != k) {
            std::swap_ranges(lu.row(k).begin(), lu.row(k).end(), lu.row(pivot).begin());
            std::swap_ranges(x.row(k).begin(), x.row(k).end(), x.row(pivot).begin());
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = lu(i, k) / lu(k, k);
            if (f == Complex{}) {
                continue;
            }
            for (std::size_t j = k + 1; j < n; ++j) {
                lu(i, j) -= f * lu(k, j);
            }
            for (std::size_t j = 0; j < x.cols(); ++j) {
                x(i, j) -= f * x(k, j);
            }
        }
    }
    for (std::size_t k = n; k-- > 0;) {
        for (std::size_t j = 0; j < x.cols(); ++j) {
            Complex acc = x(k, j);
            for (std::size_t i = k + 1; i < n; ++i) {
                acc -= lu(k, i) * x(i, j);
            }
            x(k, j) = acc / lu(k, k);
        }
    }
    return x;
}

ComplexMatrix hermitian_part(const ComplexMatrix& m) {
    if (!m.is_square()) {
        throw DimensionError("hermitian_part: matrix must be square");
    }
    ComplexMatrix h = m + m.adjoint();
    h *= 0.5;
    return h;
}

bool is_normal(const ComplexMatrix& m, double tolerance) {
    const ComplexMatrix mh = m.adjoint();
    return (m * mh - mh * m).frobenius_norm() <= tolerance;
}

std::size_t numeric_rank(const ComplexMatrix& m, double relative_tolerance) {
    ComplexMatrix work = m;
    const double threshold = relative_tolerance * std::max(1.0, m.max_abs());
    const std::size_t steps = std::min(work.rows(), work.cols());
    std::size_t rank = 0;
    for (std::size_t k = 0; k < steps; ++k) {
        std::size_t pr = k;
        std::size_t pc = k;
        double best = -1.0;
        for (std::size_t i = k; i < work.rows(); ++i) {
            for (std::size_t j = k; j < work.cols(); ++j) {
                if (std::abs(work(i, j)) > best) {
                    best = std::abs(work(i, j));
                    pr = i;
                    pc = j;
                }
            }
        }
        if (best <= threshold) {
            break;
        }
        std::swap_ranges(work.row(k).begin(), work.row(k).end(), work.row(pr).begin());
        for (std::size_t i = 0; i < work.rows(); ++i) {
            std::swap(work(i, k), work(i, pc));
        }
        for (std::size_t i = k + 1; i < work.rows(); ++i) {
            const Complex f = work(i, k) / work(k, k);
            for (std::size_t j = k; j < work.cols(); ++j) {
                work(i, j) -= f * work(k, j);
            }
        }
        ++rank;
    }
    return rank;
}

ComplexMatrix matpow(const ComplexMatrix& m, unsigned k) {
    if (!m.is_square()) {
        throw DimensionError("matpow: matrix must be square");
    }
    ComplexMatrix result = ComplexMatrix::identity(m.rows());
    ComplexMatrix base = m;
    while (k > 0) {
        if (k & 1U) {
            result = result * base;
        }
        k >>= 1U;
        if (k > 0) {
            base = base * base;
        }
    }
    return result;
}

}  // namespace ceep
