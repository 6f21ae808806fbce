#include "ceep/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ceep/error.hpp"

namespace ceep {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr unsigned kPowerScan = 200;
constexpr std::size_t kSamplePoints = 64;

std::string format_complex(Complex z) {
    std::ostringstream out;
    out.precision(6);
    out << z.real() << (z.imag() < 0 ? "-" : "+") << std::abs(z.imag()) << "i";
    return out.str();
}

PFReport pf_from_summary(const SpectralSummary& s) {
    PFReport r;
    const Complex lambda = s.eigenvalues.at(s.dominant_index);
    r.dominant_eigenvalue = lambda;

    r.details.imaginary = tol::cluster - std::abs(lambda.imag());
    r.details.real_part = lambda.real() - tol::cluster;
    r.dominant_is_positive_real = r.details.imaginary >= 0.0 && r.details.real_part > 0.0;

    double nearest = kInf;
    double largest_other = 0.0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i == s.dominant_index) {
            continue;
        }
        nearest = std::min(nearest, std::abs(s.eigenvalues[i] - lambda));
        largest_other = std::max(largest_other, std::abs(s.eigenvalues[i]));
    }
    r.details.separation = nearest - s.cluster_radius();
    r.dominant_is_simple = s.multiplicity(s.dominant_index) == 1;
    r.details.dominance = lambda.real() - largest_other - tol::cluster;
    r.strictly_dominant_modulus = r.details.dominance > 0.0;

    r.dominant_vector = normalize_phase(s.right_vector(s.dominant_index));
    double min_re = kInf;
    for (const auto& e : r.dominant_vector) {
        min_re = std::min(min_re, e.real());
    }
    r.details.vector = min_re - tol::cluster;
    r.right_vector_real_positive = r.details.vector > 0.0;

    r.holds = r.dominant_is_positive_real && r.dominant_is_simple && r.strictly_dominant_modulus &&
              r.right_vector_real_positive;
    return r;
}

bool within_cone(std::span<const Complex> v) {
    return std::all_of(v.begin(), v.end(),
                       [](const Complex& e) { return e.real() - std::abs(e.imag()) >= -tol::cluster; });
}

}  // namespace

const char* to_string(ShiftRule rule) {
    switch (rule) {
        case ShiftRule::paper_eq5:
            return "paper_eq5";
        case ShiftRule::corrected_dominance:
            return "corrected_dominance";
    }
    return "unknown";
}

const char* to_string(Verdict verdict) {
    switch (verdict) {
        case Verdict::RealEEP:
            return "RealEEP";
        case Verdict::NotRealEEP:
            return "NotRealEEP";
        case Verdict::Inconclusive:
            return "Inconclusive";
    }
    return "unknown";
}

ShiftRule parse_shift_rule(const std::string& text) {
    if (text == "paper_eq5") {
        return ShiftRule::paper_eq5;
    }
    if (text == "corrected_dominance") {
        return ShiftRule::corrected_dominance;
    }
    throw DomainError("unknown shift rule '" + text + "' (expected paper_eq5 or corrected_dominance)");
}

ComplexVector normalize_phase(std::span<const Complex> v) {
    ComplexVector out(v.begin(), v.end());
    const double nv = norm2(v);
    if (nv == 0.0) {
        return out;
    }
    double largest = 0.0;
    for (const auto& e : v) {
        largest = std::max(largest, std::abs(e));
    }
    std::size_t pivot = 0;
    while (std::abs(v[pivot]) < largest * (1.0 - 1e-12)) {
        ++pivot;
    }
    const Complex rotate = std::conj(v[pivot]) / std::abs(v[pivot]) / nv;
    for (auto& e : out) {
        e *= rotate;
    }
    out[pivot] = std::abs(out[pivot]);
    return out;
}

PFReport check_strong_complex_pf(const ComplexMatrix& m) { return pf_from_summary(eig(m)); }

ClassPReport check_class_p(const ComplexMatrix& m) {
    const SpectralSummary s = eig(m);
    ClassPReport r;
    r.pf_of_M = pf_from_summary(s);
    r.pf_of_M_conjugate_transpose = check_strong_complex_pf(m.adjoint());
    r.right_condition = within_cone(r.pf_of_M.dominant_vector);
    r.left_condition = within_cone(normalize_phase(s.left_vector(s.dominant_index)));
    r.member = r.pf_of_M.holds && r.pf_of_M_conjugate_transpose.holds && r.right_condition && r.left_condition;
    return r;
}

double choose_shift(std::span<const Complex> eigs, ShiftRule rule) {
    double largest = 0.0;
    for (const auto& e : eigs) {
        largest = std::max(largest, std::abs(e));
    }
    const double zero_radius = cluster_radius(largest);
    double bound = 0.0;
    for (const auto& e : eigs) {
        if (std::abs(e) <= zero_radius) {
            continue;
        }
        if (e.real() <= 0.0) {
            throw DomainError("choose_shift: eigenvalue " + format_complex(e) +
                              " has non-positive real part; no shift makes d dominant");
        }
        const double candidate =
            rule == ShiftRule::paper_eq5 ? std::abs(e) / 2.0 : std::norm(e) / (2.0 * e.real());
        bound = std::max(bound, candidate);
    }
    double margin = 1e-6 * (1.0 + largest);
    if (rule == ShiftRule::paper_eq5) {
        return bound + margin;
    }
    // the dominance gap grows like margin * Re(lambda) / d; widen the margin
    // until the gap clears the tolerance used by the PF check
    auto gap = [&](double d) {
        double worst = 0.0;
        for (const auto& e : eigs) {
            if (std::abs(e) > zero_radius) {
                worst = std::max(worst, std::abs(Complex(d) - e));
            }
        }
        return d - worst;
    };
    for (int i = 0; i < 60 && gap(bound + margin) <= 2.0 * tol::cluster; ++i) {
        margin *= 2.0;
    }
    return bound + margin;
}

bool real_part_positive(const ComplexMatrix& m) {
    const double threshold = tol::cluster * m.max_abs();
    const auto entries = m.entries();
    return std::all_of(entries.begin(), entries.end(), [&](const Complex& e) { return e.real() > threshold; });
}

std::optional<unsigned> is_real_eventually_positive(const ComplexMatrix& m, unsigned k_max) {
    if (!m.is_square() || m.rows() == 0) {
        throw DimensionError("is_real_eventually_positive: expected a non-empty square matrix");
    }
    if (k_max < 1) {
        throw DomainError("is_real_eventually_positive: k_max must be >= 1");
    }
    std::vector<bool> positive(k_max + 1, false);
    ComplexMatrix power = m;
    for (unsigned k = 1; k <= k_max; ++k) {
        if (k > 1) {
            power = power * m;
        }
        if (!power.all_finite()) {
            throw RangeError("is_real_eventually_positive: overflow at power " + std::to_string(k) +
                             "; normalize by the spectral radius first");
        }
        positive[k] = real_part_positive(power);
    }
    if (!positive[k_max]) {
        return std::nullopt;
    }
    unsigned k0 = k_max;
    while (k0 > 1 && positive[k0 - 1]) {
        --k0;
    }
    return k0;
}

std::optional<double> is_real_eep(const ComplexMatrix& m, std::span<const double> t_grid) {
    if (t_grid.empty()) {
        throw DomainError("is_real_eep: empty time grid");
    }
    for (std::size_t i = 0; i < t_grid.size(); ++i) {
        if (!(t_grid[i] > 0.0) || (i > 0 && !(t_grid[i] > t_grid[i - 1]))) {
            throw DomainError("is_real_eep: time grid must be positive and strictly ascending");
        }
    }
    std::optional<double> onset;
    for (double t : t_grid) {
        ComplexMatrix e;
        try {
            e = expm(t * m);
        } catch (const RangeError&) {
            // growth past double range; positivity cannot be confirmed here or later
            return std::nullopt;
        }
        if (real_part_positive(e)) {
            if (!onset) {
                onset = t;
            }
        } else {
            onset.reset();
        }
    }
    return onset;
}

bool symmetric_part_psd(const ComplexMatrix& l) {
    if (!l.is_square()) {
        throw DimensionError("symmetric_part_psd: matrix must be square");
    }
    const double floor = -1e-9 * l.frobenius_norm();
    const ComplexVector values = eigenvalues(hermitian_part(l));
    return std::all_of(values.begin(), values.end(), [&](const Complex& v) { return v.real() >= floor; });
}

std::vector<double> sampling_grid(std::span<const Complex> laplacian_eigs, double cluster_radius,
                                  std::size_t points) {
    double slowest = kInf;
    for (const auto& e : laplacian_eigs) {
        if (std::abs(e) > cluster_radius && e.real() > 0.0) {
            slowest = std::min(slowest, e.real());
        }
    }
    double lo = 0.01;
    double hi = 10.0;
    if (std::isfinite(slowest)) {
        const double tau = 1.0 / slowest;
        lo = 1e-3 * tau;
        hi = 50.0 * tau;
    }
    std::vector<double> grid(points);
    const double ratio = points > 1 ? std::log(hi / lo) / static_cast<double>(points - 1) : 0.0;
    for (std::size_t i = 0; i < points; ++i) {
        grid[i] = lo * std::exp(ratio * static_cast<double>(i));
    }
    grid.back() = hi;
    return grid;
}

EEPCertificate certify_laplacian(const LaplacianBundle& b, ShiftRule rule) {
    const ComplexMatrix& l = b.laplacian;
    const std::size_t n = l.rows();
    EEPCertificate cert;
    cert.shift_rule = rule;

    const SpectralSummary s = eig(l);
    cert.laplacian_eigenvalues = s.eigenvalues;
    const double radius = s.cluster_radius();

    const std::size_t zero_count = count_within(s.eigenvalues, Complex{}, radius);
    cert.zero_eigenvalue_simple = zero_count == 1;
    if (zero_count != 1) {
        std::ostringstream note;
        note << "zero eigenvalue of -L has algebraic multiplicity " << zero_count;
        if (zero_count > 1) {
            note << " (geometric " << geometric_multiplicity(l, Complex{}) << ")";
        }
        cert.evidence_notes.push_back(note.str());
    }

    cert.nonzero_spectrum_in_open_rhp = std::all_of(s.eigenvalues.begin(), s.eigenvalues.end(), [&](const Complex& e) {
        return std::abs(e) <= radius || e.real() > radius;
    });
    if (!cert.nonzero_spectrum_in_open_rhp) {
        cert.evidence_notes.push_back("some nonzero eigenvalue of L has non-positive real part");
    }
    cert.structure_covered =
        b.flags.undirected || (b.flags.strongly_connected && b.flags.weight_balanced);
    if (!b.flags.unsigned_weights) {
        cert.evidence_notes.push_back("graph is signed (some Re(w) < 0); verdict rests on the spectrum alone");
    }
    cert.symmetric_part_psd = symmetric_part_psd(l);
    cert.laplacian_normal = is_normal(l);

    try {
        cert.shift_d = choose_shift(s.eigenvalues, rule);
    } catch (const DomainError& e) {
        cert.evidence_notes.push_back(std::string("no admissible shift: ") + e.what());
    }
    if (cert.shift_d) {
        ComplexMatrix shifted = ComplexMatrix::identity(n);
        shifted *= *cert.shift_d;
        shifted -= l;
        cert.class_p = check_class_p(shifted);
        cert.class_p_evaluated = true;
        if (!cert.class_p.member) {
            std::ostringstream note;
            note << "B = dI - L with d = " << *cert.shift_d << " (" << to_string(rule) << ") is not in class P";
            if (!cert.class_p.pf_of_M.strictly_dominant_modulus) {
                note << "; d is not strictly modulus-dominant (margin " << cert.class_p.pf_of_M.details.dominance
                     << ")";
            }
            cert.evidence_notes.push_back(note.str());
        }
        const double rho = std::abs(cert.class_p.pf_of_M.dominant_eigenvalue);
        if (rho > 0.0) {
            ComplexMatrix normalized = shifted;
            normalized *= 1.0 / rho;
            cert.power_onset_k0 = is_real_eventually_positive(normalized, kPowerScan);
            if (!cert.power_onset_k0) {
                cert.evidence_notes.push_back("Re((B/rho)^k) not positive through k = " + std::to_string(kPowerScan));
            }
        }
    }

    if (!cert.zero_eigenvalue_simple) {
        cert.verdict = Verdict::NotRealEEP;
    } else if (cert.nonzero_spectrum_in_open_rhp && cert.structure_covered) {
        cert.verdict = Verdict::RealEEP;
    } else {
        cert.verdict = Verdict::Inconclusive;
        if (!cert.structure_covered) {
            cert.evidence_notes.push_back(
                "graph is neither undirected nor strongly connected and weight-balanced; no sufficient condition applies");
        }
    }

    const ComplexMatrix minus_l = -l;
    std::vector<double> grid = sampling_grid(s.eigenvalues, radius, kSamplePoints);
    cert.exponential_onset_t0 = is_real_eep(minus_l, grid);
    if (cert.verdict == Verdict::RealEEP && !cert.exponential_onset_t0) {
        // slow transients: extend the horizon tenfold before giving up
        for (auto& t : grid) {
            t *= 10.0;
        }
        cert.exponential_onset_t0 = is_real_eep(minus_l, grid);
    }

    switch (cert.verdict) {
        case Verdict::RealEEP:
            if (!cert.exponential_onset_t0) {
                cert.sampled_disagreement = true;
                cert.evidence_notes.push_back("DISAGREEMENT: spectral verdict RealEEP but no sampled onset found");
            } else if (!real_part_positive(expm((2.0 * *cert.exponential_onset_t0) * minus_l))) {
                cert.sampled_disagreement = true;
                cert.evidence_notes.push_back("DISAGREEMENT: Re(exp(-L t)) not positive at 2 t0");
            }
            break;
        case Verdict::NotRealEEP:
            if (cert.exponential_onset_t0) {
                cert.sampled_disagreement = true;
                cert.evidence_notes.push_back("DISAGREEMENT: spectral verdict NotRealEEP but sampled onset found");
            }
            break;
        case Verdict::Inconclusive: {
            std::ostringstream note;
            note << "sampled check: ";
            if (cert.exponential_onset_t0) {
                note << "Re(exp(-L t)) > 0 from t = " << *cert.exponential_onset_t0 << " through t = " << grid.back();
            } else {
                note << "Re(exp(-L t)) not positive at t = " << grid.back();
            }
            cert.evidence_notes.push_back(note.str());
            break;
        }
    }
    return cert;
}

}  // namespace ceep
