#include <catch_amalgamated.hpp>

#include <cmath>

#include "ceep/certify.hpp"
#include "ceep/error.hpp"
#include "ceep/flow.hpp"
#include "ceep/graph.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"
#include "support/random.hpp"

using namespace ceep;
using Catch::Matchers::WithinAbs;

namespace {

double max_distance(const ComplexVector& a, const ComplexVector& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(a[i] - b[i]));
    }
    return worst;
}

double slowest_rate(const ComplexMatrix& l) {
    double slowest = INFINITY;
    for (const auto& e : eigenvalues(l)) {
        if (std::abs(e) > 1e-8) {
            slowest = std::min(slowest, e.real());
        }
    }
    return slowest;
}

}  // namespace

TEST_CASE("disagreement", "[flow]") {
    CHECK(disagreement(ComplexVector{Complex(1.0, 1.0)}) == 0.0);
    CHECK_THAT(disagreement(ComplexVector{0.0, Complex(3.0, 4.0), 1.0}), WithinAbs(5.0, 1e-15));
}

TEST_CASE("time grids", "[flow]") {
    const auto g = uniform_time_grid(0.3, 1.0);
    REQUIRE(g.size() == 5);
    CHECK(g.front() == 0.0);
    CHECK(g.back() == 1.0);
    CHECK_THAT(g[3], WithinAbs(0.9, 1e-15));
    CHECK(uniform_time_grid(0.25, 1.0).size() == 5);
    CHECK(uniform_time_grid(0.1, 0.0) == std::vector<double>{0.0});
    CHECK_THROWS_AS(uniform_time_grid(0.0, 1.0), DomainError);

    const auto d = default_time_grid(fixtures::l2());
    REQUIRE(d.size() == 401);
    CHECK(d.front() == 0.0);
    CHECK(std::is_sorted(d.begin(), d.end()));
    CHECK_THAT(d.back(), WithinAbs(50.0 / slowest_rate(fixtures::l2()), 1e-9));
}

TEST_CASE("predicted limits of the regression Laplacians", "[flow]") {
    const ComplexMatrix third = Complex(1.0 / 3.0) * ComplexMatrix{{1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}, {1.0, 1.0, 1.0}};
    const auto p1 = predicted_limit(fixtures::l1());
    REQUIRE(p1.has_value());
    CHECK((p1->projector - third).max_abs() < 1e-10);
    const auto p2 = predicted_limit(fixtures::l2());
    REQUIRE(p2.has_value());
    CHECK((p2->projector - third).max_abs() < 1e-10);
    CHECK_FALSE(predicted_limit(fixtures::l3()).has_value());
    CHECK_FALSE(predicted_limit(ComplexMatrix(3, 3)).has_value());
}

TEST_CASE("the directed cycle reaches consensus at the average", "[flow]") {
    const ComplexMatrix l = fixtures::l2();
    const FlowResult r = simulate_exact(l, fixtures::kX0, uniform_time_grid(0.05, 20.0));
    REQUIRE(r.predicted_limit.has_value());
    const ComplexVector oracle_limit = oracle::consensus_limit(l, fixtures::kX0);
    CHECK(max_distance(*r.predicted_limit, oracle_limit) < 1e-10);
    CHECK_THAT(oracle_limit[0].real(), WithinAbs(4.0, 1e-12));
    CHECK_THAT(oracle_limit[0].imag(), WithinAbs(1.7 / 3.0, 1e-12));
    CHECK(r.consensus_reached);
    REQUIRE(r.consensus_time.has_value());
    CHECK(*r.consensus_time < 20.0);
    CHECK(r.disagreement.back() < kConsensusTol);
    CHECK(max_distance(r.states.back(), oracle_limit) < 1e-4);
    // real and imaginary parts converge separately
    for (const auto& e : r.states.back()) {
        CHECK_THAT(e.real(), WithinAbs(4.0, 1e-4));
        CHECK_THAT(e.imag(), WithinAbs(1.7 / 3.0, 1e-4));
    }
}

TEST_CASE("the counterexample freezes its sinks", "[flow]") {
    const FlowResult r = simulate_exact(fixtures::l3(), fixtures::kX0, uniform_time_grid(0.1, 40.0));
    CHECK_FALSE(r.predicted_limit.has_value());
    CHECK_FALSE(r.consensus_reached);
    for (const auto& x : r.states) {
        CHECK(std::abs(x[0] - fixtures::kX0[0]) < 1e-12);
        CHECK(std::abs(x[2] - fixtures::kX0[2]) < 1e-12);
    }
    CHECK(std::abs(r.states.back()[1] - Complex(5.0, 1.35)) < 1e-8);
    CHECK(*std::min_element(r.disagreement.begin(), r.disagreement.end()) > 0.5);
}

TEST_CASE("zero Laplacian keeps the state", "[flow]") {
    const ComplexMatrix zero(3, 3);
    const FlowResult exact = simulate_exact(zero, fixtures::kX0, uniform_time_grid(0.5, 5.0));
    for (const auto& x : exact.states) {
        CHECK(x == fixtures::kX0);
    }
    CHECK_FALSE(exact.consensus_reached);
}

TEST_CASE("initial state is reported exactly", "[flow]") {
    const FlowResult exact = simulate_exact(fixtures::l1(), fixtures::kX0, uniform_time_grid(0.1, 1.0));
    CHECK(exact.states.front() == fixtures::kX0);
    const FlowResult rk4 = simulate_rk4(fixtures::l1(), fixtures::kX0, 0.01, 1.0);
    CHECK(rk4.states.front() == fixtures::kX0);
    CHECK(rk4.times.size() == exact.times.size() * 10 - 9);
}

TEST_CASE("RK4 on a scalar decay", "[flow][rk4]") {
    const FlowResult r = simulate_rk4(ComplexMatrix{{1.0}}, ComplexVector{1.0}, 0.01, 1.0);
    CHECK_THAT(r.states.back()[0].real(), WithinAbs(std::exp(-1.0), 1e-9));
    CHECK(r.states.back()[0].imag() == 0.0);
    const FlowResult rot = simulate_rk4(ComplexMatrix{{Complex(0.0, 1.0)}}, ComplexVector{1.0}, 0.001, 2.0);
    CHECK(std::abs(rot.states.back()[0] - std::polar(1.0, -2.0)) < 1e-10);
}

TEST_CASE("RK4 agrees with the exponential", "[flow][rk4]") {
    const FlowResult rk4 = simulate_rk4(fixtures::l2(), fixtures::kX0, 0.001, 10.0);
    const FlowResult exact = simulate_exact(fixtures::l2(), fixtures::kX0, rk4.times);
    double worst = 0.0;
    for (std::size_t i = 0; i < rk4.states.size(); ++i) {
        worst = std::max(worst, max_distance(rk4.states[i], exact.states[i]));
    }
    CHECK(worst < 1e-6);

    const FlowResult l1 = simulate_rk4(fixtures::l1(), fixtures::kX0, 0.01, 10.0);
    CHECK(l1.consensus_reached);
    CHECK(max_distance(l1.states.back(), *l1.predicted_limit) < 1e-4);
}

TEST_CASE("RK4 step size guard", "[flow][rk4]") {
    const double rho = std::abs(eigenvalues(fixtures::l1()).front());
    CHECK_THROWS_AS(simulate_rk4(fixtures::l1(), fixtures::kX0, 2.7 / rho, 10.0), DomainError);
    CHECK_NOTHROW(simulate_rk4(fixtures::l1(), fixtures::kX0, 0.5 / rho, 10.0));
    CHECK_THROWS_AS(simulate_rk4(fixtures::l1(), fixtures::kX0, 0.0, 1.0), DomainError);
    CHECK_THROWS_AS(simulate_rk4(fixtures::l1(), fixtures::kX0, 2.0, 1.0), DomainError);
}

TEST_CASE("flow dimension checks", "[flow]") {
    const ComplexVector short_x0{1.0, 2.0};
    CHECK_THROWS_AS(simulate_exact(fixtures::l1(), short_x0, uniform_time_grid(0.1, 1.0)), DimensionError);
    CHECK_THROWS_AS(simulate_rk4(fixtures::l1(), short_x0, 0.01, 1.0), DimensionError);
    CHECK_THROWS_AS(simulate_exact(fixtures::l1(), fixtures::kX0, std::vector<double>{0.5, 1.0}), DomainError);
    CHECK_THROWS_AS(simulate_exact(fixtures::l1(), fixtures::kX0, std::vector<double>{0.0, 1.0, 1.0}), DomainError);
}

TEST_CASE("trajectories approach the oracle limit", "[flow][property]") {
    gen::Rng rng(61);
    for (int trial = 0; trial < 40; ++trial) {
        const std::size_t n = rng.index(2, 7);
        const bool undirected = rng.chance(0.5);
        const WeightedDigraph g = undirected
                                      ? gen::connected_undirected(rng, n, {})
                                      : gen::balanced_digraph(rng, n, gen::WeightRange{0.2, 2.0, 0.0, 0.0, 0.2}, 1);
        const ComplexMatrix l = build_laplacian(g).laplacian;
        ComplexVector x0(n);
        for (auto& e : x0) {
            e = rng.complex(-5.0, 5.0, -5.0, 5.0);
        }
        const auto p = predicted_limit(l);
        REQUIRE(p.has_value());
        const ComplexVector oracle_limit = oracle::consensus_limit(l, x0);
        CHECK(max_distance(p->apply(x0), oracle_limit) < 1e-8);
        const double horizon = 50.0 / slowest_rate(l);
        const FlowResult r = simulate_exact(l, x0, std::vector<double>{0.0, horizon});
        CHECK(max_distance(r.states.back(), oracle_limit) < 1e-8);
        CHECK(r.consensus_reached);
    }
}
