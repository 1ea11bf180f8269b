#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace gsf {

// Undirected simple graph with sorted per-vertex adjacency lists.
// Immutable after construction; safe to share across threads.
class Graph {
  public:
    // Validates: no self-loops, no duplicate edges, vertex indices in range.
    Graph(int n, std::vector<std::pair<int, int>> edges, std::string descriptor);

    int n() const { return n_; }
    const std::vector<std::pair<int, int>>& edges() const { return edges_; }
    const std::string& descriptor() const { return descriptor_; }

    std::span<const int> neighbors(int v) const {
        return {adj_.data() + off_[v], adj_.data() + off_[v + 1]};
    }
    int degree(int v) const { return off_[v + 1] - off_[v]; }
    int max_degree() const { return max_degree_; }

    // CSR layout for hot loops
    const std::vector<int>& csr_offsets() const { return off_; }
    const std::vector<int>& csr_adjacency() const { return adj_; }

  private:
    int n_;
    std::vector<std::pair<int, int>> edges_;
    std::vector<int> off_;
    std::vector<int> adj_;
    int max_degree_ = 0;
    std::string descriptor_;
};

// Periodic ring of n vertices (1D cluster layout). n must be even and >= 4.
Graph build_ring(int n);

// Periodic d-regular lattice on nx x ny vertices for d in 3..8.
// nx, ny >= 3; nx must be even when d is odd. Vertices are indexed
// row-major with x fastest: v = x + nx*y.
Graph build_2d_regular(int d, int nx, int ny);

// Stack of 2D d2-regular layers (d2 in 3..6) with periodic vertical edges;
// result is (d2+2)-regular. nz >= 3; layer preconditions as in 2D.
// v = x + nx*y + nx*ny*z.
Graph build_3d_stack(int d2, int nx, int ny, int nz);

// Complete graph on n >= 1 vertices.
Graph build_complete(int n);

// Two-column "i j" edge list, one edge per line (debug aid).
void write_edge_list(const Graph& g, std::ostream& out);

}  // namespace gsf
