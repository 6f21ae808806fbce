#pragma once

#include <cstddef>
#include <vector>

#include "ceep/linalg.hpp"

namespace ceep {

struct Edge {
    std::size_t src = 0;
    std::size_t dst = 0;
    Complex weight{};

    friend bool operator==(const Edge&, const Edge&) = default;
};

/// Graph with complex edge weights. An undirected graph stores each edge once;
/// the reverse edge with the same weight is implied.
class WeightedDigraph {
public:
    /// Throws ValidationError on self-loops, out-of-range endpoints or
    /// duplicate pairs (for undirected graphs {u,v} and {v,u} are the same pair).
    WeightedDigraph(std::size_t n, std::vector<Edge> edges, bool directed);

    std::size_t order() const noexcept { return n_; }
    bool directed() const noexcept { return directed_; }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    /// Directed arcs with undirected edges expanded into both orientations.
    std::vector<Edge> arcs() const;

    /// Adjacency matrix, a_ij = weight of arc i -> j.
    ComplexMatrix adjacency() const;

private:
    std::size_t n_;
    std::vector<Edge> edges_;
    bool directed_;
};

struct GraphFlags {
    bool undirected = false;
    bool weight_balanced = false;
    bool unsigned_weights = false;
    bool strongly_connected = false;
    bool weakly_connected = false;
};

struct LaplacianBundle {
    ComplexMatrix adjacency;
    ComplexMatrix out_degree;
    ComplexMatrix in_degree;
    /// out_degree - adjacency
    ComplexMatrix laplacian;
    GraphFlags flags;
};

LaplacianBundle build_laplacian(const WeightedDigraph& g);

/// D_out == D_in entrywise within 1e-12.
bool is_weight_balanced(const LaplacianBundle& b);

/// Support-pattern connectivity; weights only matter through being nonzero.
bool is_strongly_connected(const WeightedDigraph& g);
bool is_weakly_connected(const WeightedDigraph& g);

/// Strong connectivity of the digraph of nonzero off-diagonal entries of m.
/// Throws DomainError for n < 2.
bool is_irreducible(const ComplexMatrix& m);

/// Exhaustive search for a permutation P and split r putting P M P^T in block
/// upper-triangular form with an exactly zero lower-left block. 2 <= n <= 8.
bool irreducible_bruteforce(const ComplexMatrix& m);

/// Strong connectivity of the support digraph of a square matrix (arc i -> j
/// whenever i != j and m(i,j) != 0).
bool support_strongly_connected(const ComplexMatrix& m);

}  // namespace ceep
