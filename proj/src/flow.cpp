#include "ceep/flow.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "ceep/error.hpp"

namespace ceep {

namespace {

constexpr double kRk4RadiusBound = 2.7;

void require_flow_inputs(const ComplexMatrix& l, std::span<const Complex> x0) {
    if (!l.is_square() || l.rows() == 0) {
        throw DimensionError("flow: Laplacian must be a non-empty square matrix");
    }
    if (x0.size() != l.rows()) {
        throw DimensionError("flow: initial state has " + std::to_string(x0.size()) + " entries, Laplacian is " +
                             std::to_string(l.rows()) + "x" + std::to_string(l.rows()));
    }
}

void fill_consensus(FlowResult& r) {
    r.disagreement.clear();
    r.disagreement.reserve(r.states.size());
    for (const auto& x : r.states) {
        r.disagreement.push_back(disagreement(x));
    }
    std::size_t first = r.states.size();
    while (first > 0 && r.disagreement[first - 1] < kConsensusTol) {
        --first;
    }
    if (first < r.states.size()) {
        r.consensus_time = r.times[first];
        r.consensus_reached = true;
    }
}

// Slowest decay rate among the nonzero eigenvalues, if any has Re > 0.
std::optional<double> slowest_rate(const ComplexVector& eigs, double radius) {
    double slowest = std::numeric_limits<double>::infinity();
    for (const auto& e : eigs) {
        if (std::abs(e) > radius && e.real() > 0.0) {
            slowest = std::min(slowest, e.real());
        }
    }
    if (!std::isfinite(slowest)) {
        return std::nullopt;
    }
    return slowest;
}

Complex rk4_amplification(Complex z) { return 1.0 + z * (1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0))); }

}  // namespace

double disagreement(std::span<const Complex> x) {
    double worst = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        for (std::size_t j = i + 1; j < x.size(); ++j) {
            worst = std::max(worst, std::abs(x[i] - x[j]));
        }
    }
    return worst;
}

std::optional<ConsensusProjector> predicted_limit(const ComplexMatrix& l) {
    const SpectralSummary s = eig(l);
    const double radius = s.cluster_radius();
    std::optional<std::size_t> zero_index;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const Complex e = s.eigenvalues[i];
        if (std::abs(e) <= radius) {
            if (zero_index) {
                return std::nullopt;
            }
            zero_index = i;
        } else if (e.real() <= radius) {
            return std::nullopt;
        }
    }
    if (!zero_index) {
        return std::nullopt;
    }
    ComplexVector z = s.left_vector(*zero_index);
    // scale so that z^H 1 = 1
    Complex sum{};
    for (const auto& e : z) {
        sum += std::conj(e);
    }
    if (std::abs(sum) == 0.0) {
        return std::nullopt;
    }
    for (auto& e : z) {
        e /= std::conj(sum);
    }
    const ComplexVector ones(l.rows(), Complex{1.0});
    return ConsensusProjector{outer(ones, z), z};
}

std::vector<double> uniform_time_grid(double dt, double horizon) {
    if (!(dt > 0.0) || !(horizon >= 0.0)) {
        throw DomainError("time grid: dt must be positive and horizon non-negative");
    }
    std::vector<double> times{0.0};
    const auto steps = static_cast<std::size_t>(std::floor(horizon / dt + 1e-9));
    for (std::size_t k = 1; k <= steps; ++k) {
        times.push_back(std::min(horizon, static_cast<double>(k) * dt));
    }
    if (horizon - times.back() > 1e-12 * std::max(1.0, horizon)) {
        times.push_back(horizon);
    } else {
        times.back() = horizon;
    }
    return times;
}

std::vector<double> default_time_grid(const ComplexMatrix& l) {
    const SpectralSummary s = eig(l);
    const auto rate = slowest_rate(s.eigenvalues, s.cluster_radius());
    if (!rate) {
        return uniform_time_grid(10.0 / 400.0, 10.0);
    }
    const double tau = 1.0 / *rate;
    const double lo = 1e-3 * tau;
    const double hi = 50.0 * tau;
    std::vector<double> times{0.0};
    constexpr std::size_t kPoints = 400;
    for (std::size_t i = 0; i < kPoints; ++i) {
        times.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(kPoints - 1)));
    }
    times.back() = hi;
    return times;
}

FlowResult simulate_exact(const ComplexMatrix& l, std::span<const Complex> x0, std::span<const double> times) {
    require_flow_inputs(l, x0);
    if (times.empty() || times.front() != 0.0) {
        throw DomainError("simulate_exact: times must start at 0");
    }
    for (std::size_t i = 1; i < times.size(); ++i) {
        if (!(times[i] > times[i - 1])) {
            throw DomainError("simulate_exact: times must be strictly ascending");
        }
    }
    FlowResult r;
    r.times.assign(times.begin(), times.end());
    r.states.reserve(times.size());
    const ComplexMatrix minus_l = -l;
    for (double t : times) {
        if (t == 0.0) {
            r.states.emplace_back(x0.begin(), x0.end());
        } else {
            r.states.push_back(expm(t * minus_l) * x0);
        }
    }
    if (const auto p = predicted_limit(l)) {
        r.predicted_limit = p->apply(x0);
    }
    fill_consensus(r);
    return r;
}

FlowResult simulate_rk4(const ComplexMatrix& l, std::span<const Complex> x0, double dt, double horizon) {
    require_flow_inputs(l, x0);
    if (!(dt > 0.0) || !(horizon >= 0.0) || (horizon > 0.0 && dt > horizon)) {
        throw DomainError("simulate_rk4: need dt > 0 and dt <= horizon");
    }
    const ComplexVector eigs = eigenvalues(l);
    const double rho = std::abs(eigs.front());
    if (dt * rho >= kRk4RadiusBound) {
        std::ostringstream msg;
        msg << "simulate_rk4: dt = " << dt << " is unstable; need dt < " << kRk4RadiusBound << " / rho(L) = "
            << kRk4RadiusBound / rho;
        throw DomainError(msg.str());
    }
    for (const auto& e : eigs) {
        if (std::abs(rk4_amplification(-dt * e)) > 1.0 + 1e-12 && e.real() >= 0.0) {
            std::ostringstream msg;
            msg << "simulate_rk4: dt = " << dt << " puts -dt*lambda outside the RK4 stability region for lambda = "
                << e;
            throw DomainError(msg.str());
        }
    }

    const ComplexMatrix minus_l = -l;
    const std::size_t n = x0.size();
    auto axpy = [n](const ComplexVector& x, Complex a, const ComplexVector& k) {
        ComplexVector out(n);
        for (std::size_t i = 0; i < n; ++i) {
            out[i] = x[i] + a * k[i];
        }
        return out;
    };

    FlowResult r;
    r.times = uniform_time_grid(dt, horizon);
    r.states.reserve(r.times.size());
    ComplexVector x(x0.begin(), x0.end());
    r.states.push_back(x);
    for (std::size_t step = 1; step < r.times.size(); ++step) {
        const double h = r.times[step] - r.times[step - 1];
        const ComplexVector k1 = minus_l * std::span<const Complex>(x);
        const ComplexVector k2 = minus_l * std::span<const Complex>(axpy(x, 0.5 * h, k1));
        const ComplexVector k3 = minus_l * std::span<const Complex>(axpy(x, 0.5 * h, k2));
        const ComplexVector k4 = minus_l * std::span<const Complex>(axpy(x, h, k3));
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        r.states.push_back(x);
    }
    if (const auto p = predicted_limit(l)) {
        r.predicted_limit = p->apply(x0);
    }
    fill_consensus(r);
    return r;
}

}  // namespace ceep
