#include <array>
#include <cmath>
#include <string>

#include "ceep/error.hpp"
#include "ceep/linalg.hpp"

namespace ceep {

namespace {

// [13/13] Pade coefficients and the 1-norm threshold below which no scaling is
// needed for double precision (Higham 2005).
constexpr std::array<double, 14> kPade13 = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0, 1187353796428800.0,
    129060195264000.0,   10559470521600.0,    670442572800.0,     33522128640.0,
    1323241920.0,        40840800.0,          960960.0,           16380.0,
    182.0,               1.0};
constexpr double kTheta13 = 5.371920351148152;

ComplexMatrix combine(std::initializer_list<std::pair<double, const ComplexMatrix*>> terms, std::size_t n) {
    ComplexMatrix out(n, n);
    for (const auto& [coef, m] : terms) {
        ComplexMatrix scaled = *m;
        scaled *= coef;
        out += scaled;
    }
    return out;
}

}  // namespace

ComplexMatrix expm(const ComplexMatrix& m) {
    if (!m.is_square() || m.rows() == 0) {
        throw DimensionError("expm: expected a non-empty square matrix");
    }
    if (!m.all_finite()) {
        throw DomainError("expm: matrix has non-finite entries");
    }
    const std::size_t n = m.rows();
    const double norm = m.norm1();
    int squarings = 0;
    if (norm > kTheta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm / kTheta13)));
    }
    ComplexMatrix a = m;
    a *= std::ldexp(1.0, -squarings);

    const ComplexMatrix ident = ComplexMatrix::identity(n);
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    const auto& b = kPade13;

    const ComplexMatrix u_inner = a6 * combine({{b[13], &a6}, {b[11], &a4}, {b[9], &a2}}, n) +
                                  combine({{b[7], &a6}, {b[5], &a4}, {b[3], &a2}, {b[1], &ident}}, n);
    const ComplexMatrix u = a * u_inner;
    const ComplexMatrix v = a6 * combine({{b[12], &a6}, {b[10], &a4}, {b[8], &a2}}, n) +
                            combine({{b[6], &a6}, {b[4], &a4}, {b[2], &a2}, {b[0], &ident}}, n);

    ComplexMatrix result = solve(v - u, v + u);
    for (int s = 0; s < squarings; ++s) {
        result = result * result;
        if (!result.all_finite()) {
            throw RangeError("expm: overflow in squaring phase (step " + std::to_string(s + 1) + " of " +
                             std::to_string(squarings) + ")");
        }
    }
    if (!result.all_finite()) {
        throw RangeError("expm: non-finite result");
    }
    return result;
}

ComplexMatrix expm_series_oracle(const ComplexMatrix& m, std::size_t k_max) {
    if (!m.is_square() || m.rows() == 0) {
        throw DimensionError("expm_series_oracle: expected a non-empty square matrix");
    }
    const std::size_t n = m.rows();
    ComplexMatrix sum = ComplexMatrix::identity(n);
    ComplexMatrix term = ComplexMatrix::identity(n);
    for (std::size_t k = 1; k <= k_max; ++k) {
        term = term * m;
        term *= 1.0 / static_cast<double>(k);
        sum += term;
        if (term.frobenius_norm() < 1e-14) {
            return sum;
        }
    }
    if (m.frobenius_norm() == 0.0) {
        return sum;
    }
    throw ConvergenceError("expm_series_oracle: term norm still >= 1e-14 after " + std::to_string(k_max) + " terms");
}

}  // namespace ceep
