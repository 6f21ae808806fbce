#pragma once

// Real eventual exponential positivity (real EEP) certification.
//
// A complex matrix M is real EEP when Re(exp(M t)) is entrywise positive for
// every t past some onset. For a Laplacian L the question is whether -L is
// real EEP, which is what makes the flow x' = -L x reach consensus. The
// certificate combines a spectral decision (simple zero eigenvalue, the rest
// of the spectrum in the open right half-plane, plus the structural cases the
// theory covers) with the Perron-Frobenius evidence for the shifted matrix
// B = d I - L and a sampled check of the exponential itself.

#include <optional>
#include <string>
#include <vector>

#include "ceep/graph.hpp"
#include "ceep/linalg.hpp"

namespace ceep {

/// Margins behind each PF condition; positive means the condition holds with room to spare.
struct PFMargins {
    double imaginary = 0.0;   ///< tol - |Im lambda1|
    double real_part = 0.0;   ///< Re lambda1 - tol
    double separation = 0.0;  ///< distance to the nearest other eigenvalue minus the cluster radius
    double dominance = 0.0;   ///< Re lambda1 - max_{i>1} |lambda_i| - tol
    double vector = 0.0;      ///< min_i Re(x_i) - tol after phase normalization
};

/// Strong complex Perron-Frobenius property of a square matrix.
struct PFReport {
    bool holds = false;
    Complex dominant_eigenvalue{};
    bool dominant_is_positive_real = false;
    bool dominant_is_simple = false;
    bool strictly_dominant_modulus = false;
    bool right_vector_real_positive = false;
    /// Dominant right eigenvector after normalize_phase.
    ComplexVector dominant_vector;
    PFMargins details;
};

struct ClassPReport {
    PFReport pf_of_M;
    PFReport pf_of_M_conjugate_transpose;
    /// Re(x) >= |Im(x)| entrywise for the dominant right eigenvector of M.
    bool right_condition = false;
    /// Re(z) >= |Im(z)| entrywise for the dominant left eigenvector of M.
    bool left_condition = false;
    bool member = false;
};

enum class ShiftRule { paper_eq5, corrected_dominance };
enum class Verdict { RealEEP, NotRealEEP, Inconclusive };

const char* to_string(ShiftRule rule);
const char* to_string(Verdict verdict);
/// Accepts "paper_eq5" and "corrected_dominance"; throws DomainError otherwise.
ShiftRule parse_shift_rule(const std::string& text);

struct EEPCertificate {
    Verdict verdict = Verdict::Inconclusive;
    /// Absent when some nonzero eigenvalue has Re <= 0 (no shift can dominate).
    std::optional<double> shift_d;
    ShiftRule shift_rule = ShiftRule::corrected_dominance;
    bool zero_eigenvalue_simple = false;
    /// Every nonzero eigenvalue of L has positive real part.
    bool nonzero_spectrum_in_open_rhp = false;
    /// Undirected, or strongly connected and weight-balanced.
    bool structure_covered = false;
    ClassPReport class_p;
    bool class_p_evaluated = false;
    std::optional<unsigned> power_onset_k0;
    std::optional<double> exponential_onset_t0;
    bool symmetric_part_psd = false;
    bool laplacian_normal = false;
    /// Sampled exponential check contradicts the spectral verdict.
    bool sampled_disagreement = false;
    ComplexVector laplacian_eigenvalues;
    std::vector<std::string> evidence_notes;
};

/// Unit 2-norm, then rotate so the largest-modulus entry (first one on ties)
/// is positive real.
ComplexVector normalize_phase(std::span<const Complex> v);

PFReport check_strong_complex_pf(const ComplexMatrix& m);

ClassPReport check_class_p(const ComplexMatrix& m);

/// Shift d for B = d I - L from the spectrum of L. Eigenvalues within the
/// cluster radius of zero are ignored; every other one must have Re > 0.
///   paper_eq5:           max |lambda| / 2
///   corrected_dominance: max |lambda|^2 / (2 Re lambda), the least d with |d - lambda| < d
/// plus margin 1e-6 * (1 + max |lambda|). For corrected_dominance the margin is
/// doubled until d - max |d - lambda| exceeds 2 * tol::cluster.
double choose_shift(std::span<const Complex> eigs, ShiftRule rule);

/// Smallest k0 <= k_max with Re(M^k) > 0 entrywise for every k in [k0, k_max].
std::optional<unsigned> is_real_eventually_positive(const ComplexMatrix& m, unsigned k_max);

/// Smallest grid point t0 with Re(exp(M t)) > 0 entrywise at every grid point >= t0.
/// Returns nullopt once exp(M t) overflows, since positivity can no longer be confirmed.
std::optional<double> is_real_eep(const ComplexMatrix& m, std::span<const double> t_grid);

/// Every eigenvalue of (L + L^H)/2 is >= -1e-9 ||L||_F.
bool symmetric_part_psd(const ComplexMatrix& l);

/// Re(m) > 0 entrywise, with entries below tol::cluster * max|m| treated as zero.
bool real_part_positive(const ComplexMatrix& m);

/// Log-spaced sample times from 1e-3 tau to 50 tau, tau = 1 / (smallest positive
/// real part among the nonzero eigenvalues). Falls back to [0.01, 10] when no
/// such eigenvalue exists.
std::vector<double> sampling_grid(std::span<const Complex> laplacian_eigs, double cluster_radius, std::size_t points);

EEPCertificate certify_laplacian(const LaplacianBundle& b, ShiftRule rule = ShiftRule::corrected_dominance);

}  // namespace ceep
