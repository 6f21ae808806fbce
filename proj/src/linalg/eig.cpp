#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "ceep/error.hpp"
#include "ceep/linalg.hpp"

namespace ceep {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

double abs1(const Complex& z) { return std::abs(z.real()) + std::abs(z.imag()); }

// Unitary similarity to upper Hessenberg form by Householder reflections.
ComplexMatrix hessenberg(ComplexMatrix h) {
    const std::size_t n = h.rows();
    if (n < 3) {
        return h;
    }
    ComplexVector v(n);
    for (std::size_t k = 0; k + 2 < n; ++k) {
        double norm_x = 0.0;
        for (std::size_t i = k + 1; i < n; ++i) {
            norm_x = std::hypot(norm_x, std::abs(h(i, k)));
        }
        if (norm_x == 0.0) {
            continue;
        }
        const Complex x0 = h(k + 1, k);
        const Complex phase = std::abs(x0) == 0.0 ? Complex{1.0} : x0 / std::abs(x0);
        const Complex alpha = -phase * norm_x;

        std::fill(v.begin(), v.end(), Complex{});
        for (std::size_t i = k + 1; i < n; ++i) {
            v[i] = h(i, k);
        }
        v[k + 1] -= alpha;
        const double vnorm = norm2(v);
        if (vnorm == 0.0) {
            continue;
        }
        for (auto& e : v) {
            e /= vnorm;
        }

        // H <- (I - 2 v v^H) H
        for (std::size_t j = k; j < n; ++j) {
            Complex s{};
            for (std::size_t i = k + 1; i < n; ++i) {
                s += std::conj(v[i]) * h(i, j);
            }
            s *= 2.0;
            for (std::size_t i = k + 1; i < n; ++i) {
                h(i, j) -= v[i] * s;
            }
        }
        // H <- H (I - 2 v v^H)
        for (std::size_t i = 0; i < n; ++i) {
            Complex s{};
            for (std::size_t j = k + 1; j < n; ++j) {
                s += h(i, j) * v[j];
            }
            s *= 2.0;
            for (std::size_t j = k + 1; j < n; ++j) {
                h(i, j) -= s * std::conj(v[j]);
            }
        }
        for (std::size_t i = k + 2; i < n; ++i) {
            h(i, k) = Complex{};
        }
    }
    return h;
}

struct Rotation {
    double c = 1.0;
    Complex s{};
};

// G = [[c, s], [-conj(s), c]] with G [a; b] = [r; 0].
Rotation make_rotation(const Complex& a, const Complex& b) {
    const double abs_b = std::abs(b);
    if (abs_b == 0.0) {
        return {1.0, Complex{}};
    }
    const double abs_a = std::abs(a);
    if (abs_a == 0.0) {
        return {0.0, std::conj(b) / abs_b};
    }
    const double r = std::hypot(abs_a, abs_b);
    return {abs_a / r, (a / abs_a) * std::conj(b) / r};
}

// Eigenvalue of the 2x2 block [[a, b], [c, d]] closer to d.
Complex wilkinson_shift(const Complex& a, const Complex& b, const Complex& c, const Complex& d) {
    const Complex half = 0.5 * (a - d);
    const Complex disc = std::sqrt(half * half + b * c);
    const Complex mid = 0.5 * (a + d);
    const Complex mu1 = mid + disc;
    const Complex mu2 = mid - disc;
    return std::abs(mu1 - d) < std::abs(mu2 - d) ? mu1 : mu2;
}

ComplexVector hessenberg_qr_eigenvalues(ComplexMatrix h) {
    const std::size_t n = h.rows();
    ComplexVector values(n);
    if (n == 0) {
        return values;
    }
    const double hnorm = std::max(h.frobenius_norm(), std::numeric_limits<double>::min());
    const std::size_t max_sweeps = 100 * n;
    std::size_t sweeps = 0;
    std::size_t its = 0;
    std::vector<Rotation> rotations(n);

    std::size_t hi = n - 1;
    while (true) {
        if (hi == 0) {
            values[0] = h(0, 0);
            break;
        }
        // locate the top of the unreduced block ending at hi
        std::size_t lo = hi;
        while (lo > 0) {
            double scale = abs1(h(lo - 1, lo - 1)) + abs1(h(lo, lo));
            if (scale == 0.0) {
                scale = hnorm;
            }
            if (abs1(h(lo, lo - 1)) <= kEps * scale) {
                h(lo, lo - 1) = Complex{};
                break;
            }
            --lo;
        }
        if (lo == hi) {
            values[hi] = h(hi, hi);
            --hi;
            its = 0;
            continue;
        }
        if (++sweeps > max_sweeps) {
            std::ostringstream msg;
            msg << "eig: QR iteration did not converge after " << max_sweeps << " sweeps; subdiagonal entry ("
                << hi << "," << hi - 1 << ") stuck at |h| = " << std::abs(h(hi, hi - 1));
            throw ConvergenceError(msg.str());
        }
        ++its;

        Complex mu;
        if (its % 10 == 0) {
            // exceptional shift to break cycles
            mu = h(hi, hi) + 0.75 * std::abs(h(hi, hi - 1).real()) + Complex(0.0, 0.5 * std::abs(h(hi, hi - 1)));
        } else {
            mu = wilkinson_shift(h(hi - 1, hi - 1), h(hi - 1, hi), h(hi, hi - 1), h(hi, hi));
        }

        for (std::size_t k = lo; k <= hi; ++k) {
            h(k, k) -= mu;
        }
        // QR of the active block by Givens rotations ...
        for (std::size_t k = lo; k < hi; ++k) {
            const Rotation g = make_rotation(h(k, k), h(k + 1, k));
            rotations[k] = g;
            for (std::size_t j = k; j <= hi; ++j) {
                const Complex u = h(k, j);
                const Complex w = h(k + 1, j);
                h(k, j) = g.c * u + g.s * w;
                h(k + 1, j) = -std::conj(g.s) * u + g.c * w;
            }
        }
        // ... then RQ, which keeps the block Hessenberg
        for (std::size_t k = lo; k < hi; ++k) {
            const Rotation& g = rotations[k];
            const std::size_t last = std::min(k + 1, hi);
            for (std::size_t i = lo; i <= last; ++i) {
                const Complex u = h(i, k);
                const Complex w = h(i, k + 1);
                h(i, k) = u * g.c + w * std::conj(g.s);
                h(i, k + 1) = -u * g.s + w * g.c;
            }
        }
        for (std::size_t k = lo; k <= hi; ++k) {
            h(k, k) += mu;
        }
    }

    for (const auto& v : values) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) {
            throw ConvergenceError("eig: non-finite eigenvalue");
        }
    }
    return values;
}

ComplexVector start_vector(std::size_t n) {
    ComplexVector b(n);
    for (std::size_t k = 0; k < n; ++k) {
        b[k] = Complex(1.0 + 0.1 * static_cast<double>((7 * k + 3) % 11), 0.25 * static_cast<double>((5 * k + 1) % 13) / 13.0);
    }
    return b;
}

// Inverse iteration for an eigenvector of m at lambda. Tiny LU pivots are
// lifted to eps * ||m|| so exactly singular shifts still produce a direction.
ComplexVector inverse_iteration(const ComplexMatrix& m, Complex lambda, const std::vector<ComplexVector>& deflate) {
    const std::size_t n = m.rows();
    const double mnorm = m.frobenius_norm();
    const double floor = kEps * std::max(mnorm, std::numeric_limits<double>::min());

    ComplexMatrix lu = m;
    for (std::size_t i = 0; i < n; ++i) {
        lu(i, i) -= lambda;
    }
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    for (std::size_t k = 0; k < n; ++k) {
        std::size_t pivot = k;
        for (std::size_t i = k + 1; i < n; ++i) {
            if (std::abs(lu(i, k)) > std::abs(lu(pivot, k))) {
                pivot = i;
            }
        }
        if (pivot != k) {
            std::swap_ranges(lu.row(k).begin(), lu.row(k).end(), lu.row(pivot).begin());
            std::swap(perm[k], perm[pivot]);
        }
        if (std::abs(lu(k, k)) < floor) {
            lu(k, k) = floor;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            const Complex f = lu(i, k) / lu(k, k);
            lu(i, k) = f;
            for (std::size_t j = k + 1; j < n; ++j) {
                lu(i, j) -= f * lu(k, j);
            }
        }
    }

    auto lu_solve = [&](const ComplexVector& rhs) {
        ComplexVector y(n);
        for (std::size_t i = 0; i < n; ++i) {
            Complex acc = rhs[perm[i]];
            for (std::size_t j = 0; j < i; ++j) {
                acc -= lu(i, j) * y[j];
            }
            y[i] = acc;
        }
        for (std::size_t i = n; i-- > 0;) {
            Complex acc = y[i];
            for (std::size_t j = i + 1; j < n; ++j) {
                acc -= lu(i, j) * y[j];
            }
            y[i] = acc / lu(i, i);
        }
        return y;
    };

    auto normalize = [](ComplexVector& v) {
        const double nv = norm2(v);
        if (nv == 0.0 || !std::isfinite(nv)) {
            return false;
        }
        for (auto& e : v) {
            e /= nv;
        }
        return true;
    };

    ComplexVector v = start_vector(n);
    for (const auto& prev : deflate) {
        const Complex p = dot(prev, v);
        for (std::size_t i = 0; i < n; ++i) {
            v[i] -= p * prev[i];
        }
    }
    if (!normalize(v)) {
        v = start_vector(n);
        normalize(v);
    }

    const double target = 64.0 * kEps * std::max(1.0, mnorm);
    for (int it = 0; it < 6; ++it) {
        ComplexVector next = lu_solve(v);
        if (!normalize(next)) {
            break;
        }
        v = std::move(next);
        ComplexVector r = m * std::span<const Complex>(v);
        for (std::size_t i = 0; i < n; ++i) {
            r[i] -= lambda * v[i];
        }
        if (norm2(r) <= target) {
            break;
        }
    }
    return v;
}

double residual(const ComplexMatrix& m, Complex lambda, const ComplexVector& v) {
    ComplexVector r = m * std::span<const Complex>(v);
    for (std::size_t i = 0; i < v.size(); ++i) {
        r[i] -= lambda * v[i];
    }
    return norm2(r);
}

void require_square_finite(const ComplexMatrix& m, const char* op) {
    if (!m.is_square() || m.rows() == 0) {
        throw DimensionError(std::string(op) + ": expected a non-empty square matrix, got " +
                             std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    if (!m.all_finite()) {
        throw DomainError(std::string(op) + ": matrix has non-finite entries");
    }
}

}  // namespace

bool spectral_order(const Complex& a, const Complex& b, double quantum) {
    auto key = [quantum](double v) { return quantum > 0.0 ? std::round(v / quantum) : v; };
    const double ma = key(std::abs(a));
    const double mb = key(std::abs(b));
    if (ma != mb) {
        return ma > mb;
    }
    const double ra = key(a.real());
    const double rb = key(b.real());
    if (ra != rb) {
        return ra > rb;
    }
    return a.imag() > b.imag();
}

double sort_quantum(std::span<const Complex> values) {
    double largest = 1.0;
    for (const auto& v : values) {
        largest = std::max(largest, std::abs(v));
    }
    return 1e-9 * largest;
}

double cluster_radius(double frobenius_norm) { return tol::cluster * std::max(1.0, frobenius_norm); }

std::size_t count_within(std::span<const Complex> values, Complex center, double radius) {
    return static_cast<std::size_t>(
        std::count_if(values.begin(), values.end(), [&](const Complex& v) { return std::abs(v - center) <= radius; }));
}

double SpectralSummary::cluster_radius() const { return ceep::cluster_radius(matrix_norm); }

std::size_t SpectralSummary::multiplicity(std::size_t i) const {
    return count_within(eigenvalues, eigenvalues.at(i), cluster_radius());
}

ComplexVector eigenvalues(const ComplexMatrix& m) {
    require_square_finite(m, "eig");
    ComplexVector values = hessenberg_qr_eigenvalues(hessenberg(m));
    const double quantum = sort_quantum(values);
    std::stable_sort(values.begin(), values.end(),
                     [quantum](const Complex& a, const Complex& b) { return spectral_order(a, b, quantum); });
    return values;
}

SpectralSummary eig(const ComplexMatrix& m) {
    SpectralSummary out;
    out.eigenvalues = eigenvalues(m);
    const std::size_t n = m.rows();
    out.matrix_norm = m.frobenius_norm();
    out.right_vectors = ComplexMatrix(n, n);
    out.left_vectors = ComplexMatrix(n, n);
    out.residuals.resize(n);
    out.left_residuals.resize(n);
    out.dominant_index = 0;

    const ComplexMatrix mh = m.adjoint();
    const double radius = out.cluster_radius();
    for (std::size_t i = 0; i < n; ++i) {
        const Complex lambda = out.eigenvalues[i];
        // earlier members of the same cluster, so repeated eigenvalues get
        // independent vectors when the eigenspace allows it
        std::vector<ComplexVector> prev_right;
        std::vector<ComplexVector> prev_left;
        for (std::size_t j = 0; j < i; ++j) {
            if (std::abs(out.eigenvalues[j] - lambda) <= radius) {
                prev_right.push_back(out.right_vectors.column(j));
                prev_left.push_back(out.left_vectors.column(j));
            }
        }
        const ComplexVector x = inverse_iteration(m, lambda, prev_right);
        const ComplexVector z = inverse_iteration(mh, std::conj(lambda), prev_left);
        out.right_vectors.set_column(i, x);
        out.left_vectors.set_column(i, z);
        out.residuals[i] = residual(m, lambda, x);
        out.left_residuals[i] = residual(mh, std::conj(lambda), z);

        const double bound = tol::eig * out.matrix_norm;
        if (out.residuals[i] > bound || out.left_residuals[i] > bound) {
            std::ostringstream msg;
            msg << "eig: inverse iteration for eigenvalue " << lambda << " left residual "
                << std::max(out.residuals[i], out.left_residuals[i]) << " above " << bound;
            throw ConvergenceError(msg.str());
        }
    }
    return out;
}

std::size_t geometric_multiplicity(const ComplexMatrix& m, Complex lambda) {
    require_square_finite(m, "geometric_multiplicity");
    ComplexMatrix shifted = m;
    for (std::size_t i = 0; i < m.rows(); ++i) {
        shifted(i, i) -= lambda;
    }
    return m.rows() - numeric_rank(shifted, tol::cluster);
}

}  // namespace ceep
