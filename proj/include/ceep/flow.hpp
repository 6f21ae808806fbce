#pragma once

#include <optional>
#include <span>
#include <vector>

#include "ceep/linalg.hpp"

namespace ceep {

/// Max pairwise disagreement below which the agents count as agreeing.
inline constexpr double kConsensusTol = 1e-4;

/// Trajectory of the Laplacian flow x' = -L x.
struct FlowResult {
    std::vector<double> times;
    std::vector<ComplexVector> states;
    /// 1 z^H x0, present when -L has a simple zero eigenvalue and the rest of the spectrum is stable.
    std::optional<ComplexVector> predicted_limit;
    /// max_{i,j} |x_i - x_j| per time.
    std::vector<double> disagreement;
    bool consensus_reached = false;
    /// First time the disagreement drops below kConsensusTol and stays there.
    std::optional<double> consensus_time;
};

/// Rank-one limit of exp(-L t): projector = 1 z^H with z^H L = 0 and z^H 1 = 1.
struct ConsensusProjector {
    ComplexMatrix projector;
    ComplexVector left_null_vector;

    ComplexVector apply(std::span<const Complex> x0) const { return projector * x0; }
};

/// Present iff -L has a simple zero eigenvalue and every other eigenvalue of L
/// has positive real part.
std::optional<ConsensusProjector> predicted_limit(const ComplexMatrix& l);

/// max_{i,j} |x_i - x_j|.
double disagreement(std::span<const Complex> x);

/// x(t) = exp(-L t) x0 at each requested time (ascending, starting at 0).
FlowResult simulate_exact(const ComplexMatrix& l, std::span<const Complex> x0, std::span<const double> times);

/// Fixed-step classical RK4. Rejects dt >= 2.7 / rho(L), and any dt whose RK4
/// amplification factor exceeds one on some eigenvalue of -L.
FlowResult simulate_rk4(const ComplexMatrix& l, std::span<const Complex> x0, double dt, double horizon);

/// 0 followed by 400 log-spaced times from 1e-3 tau to 50 tau, tau = 1 / min
/// nonzero Re(lambda(L)); uniform [0, 10] when there is no such eigenvalue.
std::vector<double> default_time_grid(const ComplexMatrix& l);

/// 0, dt, 2 dt, ... up to horizon (last step shortened to land on it).
std::vector<double> uniform_time_grid(double dt, double horizon);

}  // namespace ceep
