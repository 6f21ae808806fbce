#pragma once

// Text formats. All are UTF-8 with LF line endings; '#' starts a comment
// (edge and branch lists only) and blank lines are ignored.
//
// Complex literals everywhere: "a", "a+bi", "a-bi", "bi", with optional
// whitespace ("1 + 0.5i"). Writers emit "a+bi" with 17 significant digits so
// values round-trip exactly.
//
// Edge list:
//     <n> <directed|undirected>
//     <src> <dst> <re> <im>        0-based vertices; or <src> <dst> <a+bi>
//
// Branch list (1-based buses, Pi-model line data):
//     buses <n>
//     <from> <to> <r> <x> <b>
//
// Matrix CSV: one row per line, cells separated by commas.
//
// Trajectory CSV: header t,re_x1,im_x1,...,re_xn,im_xn,disagreement and one
// row per time point.

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ceep/flow.hpp"
#include "ceep/graph.hpp"
#include "ceep/linalg.hpp"

namespace ceep {

Complex parse_complex(std::string_view text);
std::string format_complex(Complex z);
std::string format_real(double v);

/// Comma-separated complex literals, e.g. "6+2i, 2-1i, 4+0.7i".
ComplexVector parse_complex_list(std::string_view text);

WeightedDigraph parse_edge_list(std::string_view text);
std::string write_edge_list(const WeightedDigraph& g);

ComplexMatrix parse_matrix_csv(std::string_view text);
std::string write_matrix_csv(const ComplexMatrix& m);

struct Branch {
    std::size_t from_bus = 1;
    std::size_t to_bus = 1;
    double resistance = 0.0;
    double reactance = 0.0;
    /// Total line-charging susceptance, split half to each end.
    double charging = 0.0;
};

struct BranchNetwork {
    std::size_t bus_count = 0;
    std::vector<Branch> branches;
};

BranchNetwork parse_branch_list(std::string_view text);

enum class ShuntModel { include_charging, omit_charging };

/// Pi-model bus admittance matrix. Complex symmetric by construction.
ComplexMatrix ybus_from_branches(const std::vector<Branch>& branches, std::size_t bus_count,
                                 ShuntModel shunts = ShuntModel::include_charging);

/// Undirected graph whose edge weights are the series admittances 1/(r + jx),
/// parallel branches merged. Its Laplacian is the charging-free Y-bus.
WeightedDigraph graph_from_branches(const std::vector<Branch>& branches, std::size_t bus_count);

std::string write_trajectory_csv(const FlowResult& result);

struct TrajectoryTable {
    std::vector<double> times;
    std::vector<ComplexVector> states;
    std::vector<double> disagreement;
};

TrajectoryTable parse_trajectory_csv(std::string_view text);

/// Whole-file read; throws ParseError (line 0) if the file cannot be opened.
std::string read_text_file(const std::string& path);

}  // namespace ceep
