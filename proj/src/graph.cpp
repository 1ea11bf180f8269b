#include "gsf/graph.hpp"

#include <algorithm>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>

namespace gsf {

Graph::Graph(int n, std::vector<std::pair<int, int>> edges, std::string descriptor)
    : n_(n), edges_(std::move(edges)), descriptor_(std::move(descriptor)) {
    if (n_ <= 0) throw std::invalid_argument("graph: vertex count must be positive");

    std::set<std::pair<int, int>> seen;
    for (auto& [i, j] : edges_) {
        if (i < 0 || j < 0 || i >= n_ || j >= n_)
            throw std::invalid_argument("graph: edge endpoint out of range in " + descriptor_);
        if (i == j)
            throw std::invalid_argument("graph: self-loop at vertex " + std::to_string(i));
        if (i > j) std::swap(i, j);
        if (!seen.insert({i, j}).second)
            throw std::invalid_argument("graph: duplicate edge (" + std::to_string(i) + "," +
                                        std::to_string(j) + ") in " + descriptor_);
    }
    std::sort(edges_.begin(), edges_.end());

    std::vector<int> deg(n_, 0);
    for (const auto& [i, j] : edges_) {
        ++deg[i];
        ++deg[j];
    }
    off_.assign(n_ + 1, 0);
    for (int v = 0; v < n_; ++v) off_[v + 1] = off_[v] + deg[v];
    adj_.resize(off_[n_]);
    std::vector<int> cursor(off_.begin(), off_.end() - 1);
    for (const auto& [i, j] : edges_) {
        adj_[cursor[i]++] = j;
        adj_[cursor[j]++] = i;
    }
    for (int v = 0; v < n_; ++v) {
        std::sort(adj_.begin() + off_[v], adj_.begin() + off_[v + 1]);
        max_degree_ = std::max(max_degree_, deg[v]);
    }
}

Graph build_ring(int n) {
    if (n < 4 || n % 2 != 0)
        throw std::invalid_argument(
            "build_ring: n must be even and >= 4 (the 1D solver pairs sites into n/2 "
            "two-site blocks); got n=" + std::to_string(n));
    std::vector<std::pair<int, int>> edges;
    edges.reserve(n);
    for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
    return Graph(n, std::move(edges), "1d-cluster:" + std::to_string(n));
}

namespace {

const char* layout_tag(int d) {
    switch (d) {
        case 3: return "brick";
        case 4: return "square";
        case 5: return "square+altdiag";
        case 6: return "tri";
        case 7: return "tri+altdiag";
        case 8: return "unionjack";
        default: return "?";
    }
}

// Edge set of the periodic 2D layouts. Vertex (x,y) -> base + x + nx*y.
// Layouts: d=4 square; d=3 square minus horizontal edges at odd x+y;
// d=6 square plus the "/" diagonal (x,y)-(x+1,y+1) on every plaquette;
// d=8 both diagonals; d=5 square plus "/" only on even-x plaquettes;
// d=7 as d=6 plus "\" (x,y+1)-(x+1,y) on even-x plaquettes.
// Exact d-regularity for odd d needs nx even (wrap parity).
void append_2d_edges(std::vector<std::pair<int, int>>& edges, int d, int nx, int ny,
                     int base) {
    auto at = [&](int x, int y) {
        return base + ((x % nx + nx) % nx) + nx * ((y % ny + ny) % ny);
    };
    for (int y = 0; y < ny; ++y) {
        for (int x = 0; x < nx; ++x) {
            if (d != 3 || (x + y) % 2 == 0) edges.emplace_back(at(x, y), at(x + 1, y));
            edges.emplace_back(at(x, y), at(x, y + 1));
            bool slash = (d == 6 || d == 7 || d == 8) || ((d == 5) && x % 2 == 0);
            bool backslash = (d == 8) || ((d == 7) && x % 2 == 0);
            if (slash) edges.emplace_back(at(x, y), at(x + 1, y + 1));
            if (backslash) edges.emplace_back(at(x, y + 1), at(x + 1, y));
        }
    }
}

void check_2d_args(int d, int nx, int ny, const char* who) {
    if (d < 3 || d > 8)
        throw std::invalid_argument(std::string(who) + ": layer degree must be in 3..8, got " +
                                    std::to_string(d));
    if (nx < 3 || ny < 3)
        throw std::invalid_argument(std::string(who) + ": nx and ny must be >= 3, got " +
                                    std::to_string(nx) + "x" + std::to_string(ny));
    if (d % 2 == 1 && nx % 2 != 0)
        throw std::invalid_argument(std::string(who) + ": nx must be even when d is odd (got d=" +
                                    std::to_string(d) + ", nx=" + std::to_string(nx) + ")");
}

}  // namespace

Graph build_2d_regular(int d, int nx, int ny) {
    check_2d_args(d, nx, ny, "build_2d_regular");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<size_t>(nx) * ny * d / 2);
    append_2d_edges(edges, d, nx, ny, 0);
    std::string desc = "2d-regular:d=" + std::to_string(d) + ":" + std::to_string(nx) + "x" +
                       std::to_string(ny) + ":periodic:" + layout_tag(d);
    return Graph(nx * ny, std::move(edges), std::move(desc));
}

Graph build_3d_stack(int d2, int nx, int ny, int nz) {
    if (d2 < 3 || d2 > 6)
        throw std::invalid_argument("build_3d_stack: layer degree d2 must be in 3..6, got " +
                                    std::to_string(d2));
    check_2d_args(d2, nx, ny, "build_3d_stack");
    if (nz < 3)
        throw std::invalid_argument("build_3d_stack: nz must be >= 3 for periodic stacking, got " +
                                    std::to_string(nz));
    const int layer = nx * ny;
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<size_t>(layer) * nz * (d2 + 2) / 2);
    for (int z = 0; z < nz; ++z) {
        append_2d_edges(edges, d2, nx, ny, z * layer);
        for (int v = 0; v < layer; ++v)
            edges.emplace_back(z * layer + v, ((z + 1) % nz) * layer + v);
    }
    std::string desc = "3d-regular:d=" + std::to_string(d2 + 2) + ":" + std::to_string(nx) + "x" +
                       std::to_string(ny) + "x" + std::to_string(nz) + ":periodic:layer=" +
                       layout_tag(d2);
    return Graph(layer * nz, std::move(edges), std::move(desc));
}

Graph build_complete(int n) {
    if (n < 1) throw std::invalid_argument("build_complete: n must be >= 1");
    std::vector<std::pair<int, int>> edges;
    edges.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
    return Graph(n, std::move(edges), "complete:" + std::to_string(n));
}

void write_edge_list(const Graph& g, std::ostream& out) {
    for (const auto& [i, j] : g.edges()) out << i << ' ' << j << '\n';
}

}  // namespace gsf
