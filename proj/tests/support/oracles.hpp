#pragma once

// Reference computations that share no code with the library: plain
// Gaussian elimination, the Faddeev-LeVerrier characteristic polynomial with
// Durand-Kerner roots, a scaled Taylor exponential and Warshall closure.

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

#include "ceep/linalg.hpp"

namespace oracle {

using ceep::Complex;
using ceep::ComplexMatrix;
using ceep::ComplexVector;

inline ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix c(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            Complex s{};
            for (std::size_t k = 0; k < a.cols(); ++k) {
                s += a(i, k) * b(k, j);
            }
            c(i, j) = s;
        }
    }
    return c;
}

inline double frobenius_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            s += std::norm(a(i, j) - b(i, j));
        }
    }
    return std::sqrt(s);
}

inline ComplexMatrix identity(std::size_t n) {
    ComplexMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

inline ComplexMatrix matpow_naive(const ComplexMatrix& m, unsigned k) {
    ComplexMatrix p = identity(m.rows());
    for (unsigned i = 0; i < k; ++i) {
        p = multiply(p, m);
    }
    return p;
}

/// Gaussian elimination with partial pivoting on a copy of [A | b].
inline ComplexVector gauss_solve(ComplexMatrix a, ComplexVector b) {
    const std::size_t n = a.rows();
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        for (std::size_t r = c + 1; r < n; ++r) {
            if (std::abs(a(r, c)) > std::abs(a(p, c))) {
                p = r;
            }
        }
        if (std::abs(a(p, c)) == 0.0) {
            throw std::runtime_error("gauss_solve: singular");
        }
        for (std::size_t j = 0; j < n; ++j) {
            std::swap(a(c, j), a(p, j));
        }
        std::swap(b[c], b[p]);
        for (std::size_t r = c + 1; r < n; ++r) {
            const Complex f = a(r, c) / a(c, c);
            for (std::size_t j = c; j < n; ++j) {
                a(r, j) -= f * a(c, j);
            }
            b[r] -= f * b[c];
        }
    }
    ComplexVector x(n);
    for (std::size_t i = n; i-- > 0;) {
        Complex s = b[i];
        for (std::size_t j = i + 1; j < n; ++j) {
            s -= a(i, j) * x[j];
        }
        x[i] = s / a(i, i);
    }
    return x;
}

/// z with z^H L = 0 and z^H 1 = 1, from the normal equations of the stacked
/// system [L^H; 1^T] z = [0; 1].
inline ComplexVector left_null_vector(const ComplexMatrix& l) {
    const std::size_t n = l.rows();
    ComplexMatrix a(n + 1, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) = std::conj(l(j, i));
        }
        a(n, i) = 1.0;
    }
    ComplexMatrix normal(n, n);
    ComplexVector rhs(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            for (std::size_t k = 0; k <= n; ++k) {
                normal(i, j) += std::conj(a(k, i)) * a(k, j);
            }
        }
        rhs[i] = std::conj(a(n, i));
    }
    return gauss_solve(normal, rhs);
}

/// 1 z^H x0.
inline ComplexVector consensus_limit(const ComplexMatrix& l, const ComplexVector& x0) {
    const ComplexVector z = left_null_vector(l);
    Complex value{};
    for (std::size_t i = 0; i < z.size(); ++i) {
        value += std::conj(z[i]) * x0[i];
    }
    return ComplexVector(x0.size(), value);
}

/// Coefficients c_0..c_n of det(lambda I - M) = sum c_k lambda^k, c_n = 1.
inline ComplexVector characteristic_polynomial(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    ComplexVector c(n + 1);
    c[n] = 1.0;
    ComplexMatrix mk(n, n);  // M_0 = 0
    for (std::size_t k = 1; k <= n; ++k) {
        ComplexMatrix next = multiply(m, mk);
        for (std::size_t i = 0; i < n; ++i) {
            next(i, i) += c[n - k + 1];
        }
        mk = next;
        const ComplexMatrix amk = multiply(m, mk);
        Complex tr{};
        for (std::size_t i = 0; i < n; ++i) {
            tr += amk(i, i);
        }
        c[n - k] = -tr / static_cast<double>(k);
    }
    return c;
}

inline Complex horner(const ComplexVector& c, Complex x) {
    Complex v{};
    for (std::size_t k = c.size(); k-- > 0;) {
        v = v * x + c[k];
    }
    return v;
}

/// Durand-Kerner iteration on the characteristic polynomial.
inline ComplexVector eigenvalues_by_charpoly(const ComplexMatrix& m) {
    const ComplexVector c = characteristic_polynomial(m);
    const std::size_t n = m.rows();
    double bound = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        bound = std::max(bound, std::abs(c[k]));
    }
    const double radius = 1.0 + bound;
    ComplexVector roots(n);
    const Complex seed(0.4, 0.9);
    Complex p = 1.0;
    for (std::size_t k = 0; k < n; ++k) {
        roots[k] = p * std::min(radius, 2.0);
        p *= seed;
    }
    for (int iter = 0; iter < 2000; ++iter) {
        double shift = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            Complex denom = 1.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j != k) {
                    denom *= roots[k] - roots[j];
                }
            }
            const Complex step = horner(c, roots[k]) / denom;
            roots[k] -= step;
            shift = std::max(shift, std::abs(step));
        }
        if (shift < 1e-15) {
            break;
        }
    }
    return roots;
}

/// Greedy nearest-neighbour matching; returns the largest matched distance.
inline double spectrum_distance(const ComplexVector& expected, const ComplexVector& actual) {
    std::vector<bool> used(actual.size(), false);
    double worst = 0.0;
    for (const auto& e : expected) {
        std::size_t best = actual.size();
        for (std::size_t i = 0; i < actual.size(); ++i) {
            if (!used[i] && (best == actual.size() || std::abs(actual[i] - e) < std::abs(actual[best] - e))) {
                best = i;
            }
        }
        if (best == actual.size()) {
            return INFINITY;
        }
        used[best] = true;
        worst = std::max(worst, std::abs(actual[best] - e));
    }
    return worst;
}

/// Taylor series on M / 2^s with ||M / 2^s||_F <= 1/2, then s squarings.
inline ComplexMatrix expm_taylor(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    double norm = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            norm += std::norm(m(i, j));
        }
    }
    norm = std::sqrt(norm);
    int s = 0;
    while (norm / std::ldexp(1.0, s) > 0.5) {
        ++s;
    }
    ComplexMatrix a = m;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            a(i, j) /= std::ldexp(1.0, s);
        }
    }
    ComplexMatrix sum = identity(n);
    ComplexMatrix term = identity(n);
    for (int k = 1; k <= 30; ++k) {
        term = multiply(term, a);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                term(i, j) /= static_cast<double>(k);
                sum(i, j) += term(i, j);
            }
        }
    }
    for (int k = 0; k < s; ++k) {
        sum = multiply(sum, sum);
    }
    return sum;
}

/// Strong connectivity of the off-diagonal support via Warshall closure.
inline bool support_strongly_connected(const ComplexMatrix& m) {
    const std::size_t n = m.rows();
    std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
    for (std::size_t i = 0; i < n; ++i) {
        reach[i][i] = true;
        for (std::size_t j = 0; j < n; ++j) {
            if (i != j && m(i, j) != Complex{}) {
                reach[i][j] = true;
            }
        }
    }
    for (std::size_t k = 0; k < n; ++k) {
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                reach[i][j] = reach[i][j] || (reach[i][k] && reach[k][j]);
            }
        }
    }
    for (const auto& row : reach) {
        if (std::find(row.begin(), row.end(), false) != row.end()) {
            return false;
        }
    }
    return true;
}

inline bool real_part_positive(const ComplexMatrix& m) {
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (!(m(i, j).real() > 0.0)) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace oracle
