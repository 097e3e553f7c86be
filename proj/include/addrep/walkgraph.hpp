#pragma once

// Multigraph machinery for the closed-walk taxonomy.
//
// A nontrivial closed walk traverses every edge at most twice and at least
// one edge exactly once; it is even when its length (number of edge
// traversals) is even. A loop traversed once is a closed walk of length 1
// (odd); two parallel edges form an even closed walk of length 2.
//
// detect_even_closed_walk decides existence with a constructive certificate
// either way: a witness walk, or per-component summaries showing cycle rank
// <= 1 with an odd unique cycle. brute_force_even_walk is the independent
// exhaustive oracle used to validate the detector.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "addrep/errors.hpp"

namespace addrep {

class MultiGraph {
public:
    MultiGraph() = default;
    // Loops (u == v) and parallel edges are allowed; every endpoint must be
    // a declared vertex (InconsistentInput otherwise). Duplicate vertex
    // labels are collapsed.
    MultiGraph(std::vector<std::uint64_t> vertices,
               std::vector<std::pair<std::uint64_t, std::uint64_t>> edges);

    // Text format: first line "V E"; then E lines "u v" with labels in
    // [0, V). Vertices are 0..V-1.
    static MultiGraph from_text(std::istream& in);
    void write_text(std::ostream& out) const;

    std::size_t vertex_count() const noexcept { return vertices_.size(); }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<std::uint64_t>& vertices() const noexcept { return vertices_; }
    const std::vector<std::pair<std::uint64_t, std::uint64_t>>& edges() const noexcept {
        return edges_;
    }
    bool is_loop(std::size_t edge) const { return edges_.at(edge).first == edges_.at(edge).second; }

    // Dense internal vertex index for a label.
    std::size_t vertex_index(std::uint64_t label) const;
    // Incidence lists as (edge index, neighbour vertex index); loops once.
    const std::vector<std::vector<std::pair<std::size_t, std::size_t>>>& adjacency() const noexcept {
        return adj_;
    }

private:
    std::vector<std::uint64_t> vertices_; // sorted unique labels
    std::vector<std::pair<std::uint64_t, std::uint64_t>> edges_;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> adj_;
};

// Closed walk v_1, e_1, v_2, ..., v_n, e_n, (v_1). vertices[i] is the
// position before traversing edges[i]; the final edge returns to vertices[0].
struct Walk {
    std::vector<std::uint64_t> vertices;
    std::vector<std::size_t> edges;
    std::size_t length() const noexcept { return edges.size(); }
};

enum class CycleParity { none, odd, even };

const char* cycle_parity_name(CycleParity p);

// Per-component structure. excess = |E| - |V|; cycle_rank = excess + 1 for a
// connected component. parity describes the unique cycle when cycle_rank = 1
// (none when the component is a tree or has rank >= 2).
struct ComponentSummary {
    std::size_t vertex_count = 0;
    std::size_t edge_count = 0;
    std::int64_t excess = 0;
    std::int64_t cycle_rank = 0;
    CycleParity parity = CycleParity::none;
};

// Either a witness walk, or a certificate that none exists (every component
// at cycle rank <= 1, any unique cycle odd). components summarises the whole
// graph in both cases.
struct WalkVerdict {
    std::optional<Walk> walk;
    std::vector<ComponentSummary> components;
    bool even_walk_found() const noexcept { return walk.has_value(); }
};

// True iff w is a nontrivial even closed walk of g: incidence-valid, even
// length, every edge used <= 2 times, some edge used exactly once.
// MalformedWalk if the sequence is not a walk of g at all.
bool is_nontrivial_even_closed_walk(const MultiGraph& g, const Walk& w);

// Structural decision via component-wise cycle rank; every returned walk is
// re-checked with is_nontrivial_even_closed_walk before being handed out.
WalkVerdict detect_even_closed_walk(const MultiGraph& g);

// Exhaustive oracle: BFS over (vertex, per-edge usage <= 2) states. Complete
// for max_len >= 2|E| (enforced). Exponential; intended for |E| <= 8.
// expansion_cap bounds the explored state space (BudgetExceeded beyond).
inline constexpr std::size_t kDefaultExpansionCap = std::size_t{1} << 22;
std::optional<Walk> brute_force_even_walk(const MultiGraph& g, std::size_t max_len,
                                          std::size_t expansion_cap = kDefaultExpansionCap);

// Runs the detector; when no even walk exists, checks the edge bound
// |E| <= |V| implied by the certificate (per-component excess in {-1, 0}).
struct EdgeBoundReport {
    WalkVerdict verdict;
    std::size_t vertices = 0;
    std::size_t edges = 0;
    bool bound_checked = false; // true iff verdict is NoEvenWalk
    bool bound_holds = false;   // |E| <= |V| (meaningful when checked)
};

EdgeBoundReport edge_bound_check(const MultiGraph& g);

} // namespace addrep
