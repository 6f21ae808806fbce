#include <catch_amalgamated.hpp>

#include <cmath>
#include <string>

#include "ceep/certify.hpp"
#include "ceep/error.hpp"
#include "ceep/flow.hpp"
#include "ceep/graph.hpp"
#include "ceep/io.hpp"
#include "support/fixtures.hpp"
#include "support/random.hpp"

using namespace ceep;

namespace {

std::size_t parse_error_line(auto&& fn) {
    try {
        fn();
    } catch (const ParseError& e) {
        return e.line();
    }
    return static_cast<std::size_t>(-1);
}

std::string data_file(const std::string& name) { return read_text_file(std::string(CEEP_DATA_DIR) + "/" + name); }

}  // namespace

TEST_CASE("complex literals", "[io]") {
    CHECK(parse_complex("3") == Complex(3.0, 0.0));
    CHECK(parse_complex("-2.5") == Complex(-2.5, 0.0));
    CHECK(parse_complex("1+0.5i") == Complex(1.0, 0.5));
    CHECK(parse_complex("1 + 0.5i") == Complex(1.0, 0.5));
    CHECK(parse_complex("2-1i") == Complex(2.0, -1.0));
    CHECK(parse_complex("0.7i") == Complex(0.0, 0.7));
    CHECK(parse_complex("-i") == Complex(0.0, -1.0));
    CHECK(parse_complex("1e-3+2E2i") == Complex(1e-3, 200.0));
    CHECK(parse_complex("-1.5e+2-3e-1i") == Complex(-150.0, -0.3));
    for (const char* bad : {"", "abc", "1+", "1+2", "i1", "1++2i", "nan", "1+infi"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(parse_complex(bad), ParseError);
    }
}

TEST_CASE("complex formatting round-trips", "[io][property]") {
    CHECK(format_complex({1.0, -0.5}) == "1-0.5i");
    CHECK(format_complex({0.0, 0.0}) == "0+0i");
    gen::Rng rng(71);
    for (int trial = 0; trial < 500; ++trial) {
        const Complex z = rng.complex(-1e3, 1e3, -1e-3, 1e-3) * std::pow(10.0, rng.uniform(-8.0, 8.0));
        CHECK(parse_complex(format_complex(z)) == z);
    }
    const ComplexVector list = parse_complex_list("6+2i, 2-1i, 4+0.7i");
    CHECK(list == fixtures::kX0);
    CHECK_THROWS_AS(parse_complex_list("1,,2"), ParseError);
}

TEST_CASE("edge list parsing", "[io]") {
    const WeightedDigraph g = parse_edge_list("# comment\n3 directed\n\n0 2 1 0.5\n1 0 1+0.5i\n2 1 1 0.5 # tail\n");
    CHECK(g.directed());
    CHECK(build_laplacian(g).laplacian == fixtures::l2());

    const WeightedDigraph u = parse_edge_list(data_file("ex1.edges"));
    CHECK_FALSE(u.directed());
    CHECK(build_laplacian(u).laplacian == fixtures::l1());
    CHECK(build_laplacian(parse_edge_list(data_file("ex2.edges"))).laplacian == fixtures::l2());
    CHECK(build_laplacian(parse_edge_list(data_file("counter.edges"))).laplacian == fixtures::l3());

    const WeightedDigraph empty = parse_edge_list("2 undirected\n");
    CHECK(empty.order() == 2);
    CHECK(empty.edges().empty());
}

TEST_CASE("edge list errors carry line numbers", "[io]") {
    CHECK(parse_error_line([] { parse_edge_list(""); }) == 0);
    CHECK(parse_error_line([] { parse_edge_list("3 sideways\n"); }) == 1);
    CHECK(parse_error_line([] { parse_edge_list("0 directed\n"); }) == 1);
    CHECK(parse_error_line([] { parse_edge_list("3 directed\n0 1 1 0\n0 3 1 0\n"); }) == 3);
    CHECK(parse_error_line([] { parse_edge_list("3 directed\n0 1\n"); }) == 2);
    CHECK(parse_error_line([] { parse_edge_list("3 directed\n# c\n1 1 1 0\n"); }) == 3);
    CHECK(parse_error_line([] { parse_edge_list("3 directed\n0 1 x 0\n"); }) == 2);
    CHECK(parse_error_line([] { parse_edge_list("3 directed\n-1 1 1 0\n"); }) == 2);
    try {
        parse_edge_list("3 directed\n0 1 1 0\n0 3 1 0\n");
        FAIL("expected ParseError");
    } catch (const ParseError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
    try {
        parse_edge_list("3 directed\n0 1 1 0\n0 1 2 0\n");
        FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("edge lists round-trip", "[io][property]") {
    gen::Rng rng(72);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = rng.index(1, 8);
        const WeightedDigraph g =
            rng.chance(0.5) ? gen::connected_undirected(rng, n, {}) : gen::sparse_digraph(rng, n, 0.4);
        const WeightedDigraph back = parse_edge_list(write_edge_list(g));
        CHECK(back.directed() == g.directed());
        CHECK(build_laplacian(back).laplacian == build_laplacian(g).laplacian);
    }
}

TEST_CASE("matrix CSV", "[io]") {
    const ComplexMatrix m = parse_matrix_csv("0, 1+0.5i\n-2i,3\n");
    CHECK(m == ComplexMatrix{{0.0, Complex(1.0, 0.5)}, {Complex(0.0, -2.0), 3.0}});
    CHECK(parse_matrix_csv(write_matrix_csv(fixtures::l1())) == fixtures::l1());
    CHECK(parse_error_line([] { parse_matrix_csv("1,2\n3\n"); }) == 2);
    CHECK_THROWS_AS(parse_matrix_csv(""), ParseError);

    gen::Rng rng(73);
    for (int trial = 0; trial < 50; ++trial) {
        const ComplexMatrix r = gen::matrix(rng, rng.index(1, 6), rng.uniform(0.1, 100.0));
        CHECK(parse_matrix_csv(write_matrix_csv(r)) == r);
    }
}

TEST_CASE("bus admittance of single branches", "[io][power]") {
    const ComplexMatrix reactive = ybus_from_branches({Branch{1, 2, 0.0, 1.0, 0.0}}, 2);
    const Complex j{0.0, 1.0};
    CHECK((reactive - ComplexMatrix{{-j, j}, {j, -j}}).max_abs() < 1e-15);
    const ComplexMatrix resistive = ybus_from_branches({Branch{1, 2, 1.0, 0.0, 0.0}}, 2);
    CHECK((resistive - ComplexMatrix{{1.0, -1.0}, {-1.0, 1.0}}).max_abs() < 1e-15);

    const ComplexMatrix charged = ybus_from_branches({Branch{1, 2, 1.0, 0.0, 0.4}}, 2);
    CHECK(std::abs(charged(0, 0) - Complex(1.0, 0.2)) < 1e-15);
    CHECK(std::abs(charged(0, 1) - Complex(-1.0, 0.0)) < 1e-15);
    const ComplexMatrix omitted = ybus_from_branches({Branch{1, 2, 1.0, 0.0, 0.4}}, 2, ShuntModel::omit_charging);
    CHECK(omitted == resistive);

    CHECK_THROWS_AS(ybus_from_branches({Branch{1, 2, 0.0, 0.0, 0.0}}, 2), DomainError);
    CHECK_THROWS_AS(ybus_from_branches({Branch{1, 3, 1.0, 0.0, 0.0}}, 2), DomainError);
}

TEST_CASE("branch list parsing", "[io][power]") {
    const BranchNetwork net = parse_branch_list("buses 3\n1 2 0.1 0.2 0.0\n# c\n2 3 0.0 0.5 0.02\n");
    CHECK(net.bus_count == 3);
    REQUIRE(net.branches.size() == 2);
    CHECK(net.branches[1].from_bus == 2);
    CHECK(net.branches[1].charging == 0.02);
    CHECK(parse_error_line([] { parse_branch_list("3\n"); }) == 1);
    CHECK(parse_error_line([] { parse_branch_list("buses 2\n1 2 0 0 0\n"); }) == 2);
    CHECK(parse_error_line([] { parse_branch_list("buses 2\n1 3 1 0 0\n"); }) == 2);
    CHECK(parse_error_line([] { parse_branch_list("buses 2\n2 2 1 0 0\n"); }) == 2);
    CHECK(parse_error_line([] { parse_branch_list("buses 2\n1 2 1 0\n"); }) == 2);

    // parallel branches merge into one edge whose weight is the summed admittance
    const std::vector<Branch> parallel{Branch{1, 2, 1.0, 0.0, 0.0}, Branch{2, 1, 0.0, 1.0, 0.0}};
    const WeightedDigraph g = graph_from_branches(parallel, 2);
    REQUIRE(g.edges().size() == 1);
    CHECK(std::abs(g.edges()[0].weight - Complex(1.0, -1.0)) < 1e-15);
    CHECK((build_laplacian(g).laplacian - ybus_from_branches(parallel, 2)).max_abs() < 1e-15);
}

TEST_CASE("the twelve-bus network", "[io][power]") {
    const BranchNetwork net = parse_branch_list(data_file("power12.branches"));
    CHECK(net.bus_count == 12);
    const ComplexMatrix y = ybus_from_branches(net.branches, net.bus_count);
    CHECK(y == y.transpose());
    CHECK_FALSE(y == y.adjoint());

    const ComplexMatrix shunt_free = ybus_from_branches(net.branches, net.bus_count, ShuntModel::omit_charging);
    const LaplacianBundle b = build_laplacian(graph_from_branches(net.branches, net.bus_count));
    CHECK((b.laplacian - shunt_free).max_abs() < 1e-12);
    CHECK(b.flags.undirected);
    const EEPCertificate c = certify_laplacian(b);
    CHECK(c.verdict == Verdict::RealEEP);
    CHECK(c.zero_eigenvalue_simple);
    CHECK(c.exponential_onset_t0.has_value());
}

TEST_CASE("trajectory CSV", "[io]") {
    FlowResult one;
    one.times = {0.0};
    one.states = {ComplexVector{Complex(1.5, -2.0)}};
    one.disagreement = {0.0};
    CHECK(write_trajectory_csv(one) == "t,re_x1,im_x1,disagreement\n0,1.5,-2,0\n");

    const FlowResult r = simulate_exact(fixtures::l2(), fixtures::kX0, uniform_time_grid(0.5, 5.0));
    const TrajectoryTable t = parse_trajectory_csv(write_trajectory_csv(r));
    CHECK(t.times == r.times);
    CHECK(t.states == r.states);
    CHECK(t.disagreement == r.disagreement);

    CHECK(parse_error_line([] { parse_trajectory_csv("t,x,disagreement\n"); }) == 1);
    CHECK(parse_error_line([] { parse_trajectory_csv("t,re_x1,im_x1,disagreement\n0,1,2\n"); }) == 2);
    CHECK_THROWS_AS(read_text_file("/nonexistent/file.edges"), ParseError);
}
