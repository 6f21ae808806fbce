#include "ceep/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>
#include <utility>

#include "ceep/error.hpp"

namespace ceep {

namespace {

constexpr double kStructureTol = 1e-12;

using Adjacency = std::vector<std::vector<std::size_t>>;

std::vector<bool> reachable_from(const Adjacency& next, std::size_t start) {
    std::vector<bool> seen(next.size(), false);
    std::vector<std::size_t> stack{start};
    seen[start] = true;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (std::size_t v : next[u]) {
            if (!seen[v]) {
                seen[v] = true;
                stack.push_back(v);
            }
        }
    }
    return seen;
}

bool all_true(const std::vector<bool>& v) { return std::all_of(v.begin(), v.end(), [](bool b) { return b; }); }

// Forward and reverse reachability from vertex 0.
bool strongly_connected(const Adjacency& forward) {
    const std::size_t n = forward.size();
    if (n <= 1) {
        return true;
    }
    Adjacency backward(n);
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v : forward[u]) {
            backward[v].push_back(u);
        }
    }
    return all_true(reachable_from(forward, 0)) && all_true(reachable_from(backward, 0));
}

Adjacency arc_lists(const WeightedDigraph& g) {
    Adjacency next(g.order());
    for (const auto& e : g.arcs()) {
        if (e.weight != Complex{}) {
            next[e.src].push_back(e.dst);
        }
    }
    return next;
}

bool entries_close(const ComplexMatrix& a, const ComplexMatrix& b) {
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            if (std::abs(a(i, j) - b(i, j)) > kStructureTol) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

WeightedDigraph::WeightedDigraph(std::size_t n, std::vector<Edge> edges, bool directed)
    : n_(n), edges_(std::move(edges)), directed_(directed) {
    if (n_ == 0) {
        throw ValidationError("graph must have at least one vertex");
    }
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
        const Edge& e = edges_[k];
        const std::string where = "edge #" + std::to_string(k) + " (" + std::to_string(e.src) + "->" +
                                  std::to_string(e.dst) + ")";
        if (e.src >= n_ || e.dst >= n_) {
            throw ValidationError(where + ": vertex index out of range for n = " + std::to_string(n_));
        }
        if (e.src == e.dst) {
            throw ValidationError(where + ": self-loops are not allowed");
        }
        const std::pair<std::size_t, std::size_t> key = directed_ ? std::pair{e.src, e.dst} : std::pair{std::min(e.src, e.dst), std::max(e.src, e.dst)};
        if (!seen.insert(key).second) {
            throw ValidationError(where + ": duplicate edge");
        }
        if (!std::isfinite(e.weight.real()) || !std::isfinite(e.weight.imag())) {
            throw ValidationError(where + ": non-finite weight");
        }
    }
}

std::vector<Edge> WeightedDigraph::arcs() const {
    if (directed_) {
        return edges_;
    }
    std::vector<Edge> out;
    out.reserve(2 * edges_.size());
    for (const auto& e : edges_) {
        out.push_back(e);
        out.push_back({e.dst, e.src, e.weight});
    }
    return out;
}

ComplexMatrix WeightedDigraph::adjacency() const {
    ComplexMatrix a(n_, n_);
    for (const auto& e : arcs()) {
        a(e.src, e.dst) = e.weight;
    }
    return a;
}

LaplacianBundle build_laplacian(const WeightedDigraph& g) {
    const std::size_t n = g.order();
    LaplacianBundle b;
    b.adjacency = g.adjacency();
    b.out_degree = ComplexMatrix(n, n);
    b.in_degree = ComplexMatrix(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            b.out_degree(i, i) += b.adjacency(i, j);
            b.in_degree(j, j) += b.adjacency(i, j);
        }
    }
    b.laplacian = b.out_degree - b.adjacency;

    b.flags.undirected = entries_close(b.adjacency, b.adjacency.transpose());
    b.flags.weight_balanced = is_weight_balanced(b);
    const auto edges = g.edges();
    b.flags.unsigned_weights =
        std::all_of(edges.begin(), edges.end(), [](const Edge& e) { return e.weight.real() >= 0.0; });
    b.flags.strongly_connected = is_strongly_connected(g);
    b.flags.weakly_connected = is_weakly_connected(g);
    return b;
}

bool is_weight_balanced(const LaplacianBundle& b) { return entries_close(b.out_degree, b.in_degree); }

bool is_strongly_connected(const WeightedDigraph& g) { return strongly_connected(arc_lists(g)); }

bool is_weakly_connected(const WeightedDigraph& g) {
    Adjacency sym(g.order());
    for (const auto& e : g.arcs()) {
        if (e.weight != Complex{}) {
            sym[e.src].push_back(e.dst);
            sym[e.dst].push_back(e.src);
        }
    }
    return all_true(reachable_from(sym, 0));
}

bool support_strongly_connected(const ComplexMatrix& m) {
    if (!m.is_square()) {
        throw DimensionError("support_strongly_connected: matrix must be square");
    }
    Adjacency next(m.rows());
    for (std::size_t i = 0; i < m.rows(); ++i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
            if (i != j && m(i, j) != Complex{}) {
                next[i].push_back(j);
            }
        }
    }
    return strongly_connected(next);
}

bool is_irreducible(const ComplexMatrix& m) {
    if (!m.is_square()) {
        throw DimensionError("is_irreducible: matrix must be square");
    }
    if (m.rows() < 2) {
        throw DomainError("is_irreducible: reducibility is defined for n >= 2");
    }
    return support_strongly_connected(m);
}

bool irreducible_bruteforce(const ComplexMatrix& m) {
    if (!m.is_square()) {
        throw DimensionError("irreducible_bruteforce: matrix must be square");
    }
    const std::size_t n = m.rows();
    if (n < 2 || n > 8) {
        throw DomainError("irreducible_bruteforce: supports 2 <= n <= 8, got n = " + std::to_string(n));
    }
    std::vector<std::size_t> p(n);
    std::iota(p.begin(), p.end(), 0);
    do {
        // (P M P^T)(i, j) = m(p[i], p[j])
        for (std::size_t r = 1; r < n; ++r) {
            bool zero_block = true;
            for (std::size_t i = r; i < n && zero_block; ++i) {
                for (std::size_t j = 0; j < r; ++j) {
                    if (m(p[i], p[j]) != Complex{}) {
                        zero_block = false;
                        break;
                    }
                }
            }
            if (zero_block) {
                return false;
            }
        }
    } while (std::next_permutation(p.begin(), p.end()));
    return true;
}

}  // namespace ceep
