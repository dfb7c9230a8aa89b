/*
 * stable_graph.hpp
 * ----------------
 * Decorated multigraphs encoding the topological type of a multicurve on
 * a closed surface: vertices carry the genus of a complementary piece,
 * edges carry the (positive integer) weight of a curve. Loops and
 * parallel edges are allowed.
 *
 * Symmetry convention: sym_plus_order / sym_order both count decorated
 * graph automorphisms, i.e. pairs of (vertex bijection, edge bijection)
 * preserving incidence, vertex genus and edge weight. Swapping the two
 * half-edges of a loop does not count. Explicit overrides in the input
 * file win over the computed value.
 */
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "mcstat/rational.hpp"

namespace mcstat {

struct GraphVertex {
    std::string id;
    unsigned genus = 0;
};

struct GraphEdge {
    std::string id;
    int a = 0, b = 0;  // vertex indices; a == b for a loop
    unsigned long weight = 1;
};

struct GraphConstants {
    unsigned one_handles = 0;   // vertices with (g_v, n_v) == (1,1)
    unsigned long sym_plus = 1;
    unsigned long sym = 1;
    int d = 0;  // 3g - 3
    int k = 0;  // edge count
    bool overridden = false;
};

class StableGraph {
public:
    StableGraph(std::vector<GraphVertex> vertices, std::vector<GraphEdge> edges,
                std::optional<unsigned> declared_genus = std::nullopt,
                std::optional<unsigned long> override_sym_plus = std::nullopt,
                std::optional<unsigned long> override_sym = std::nullopt);

    // Multicurve text format (see docs/formats.md); diagnostics carry
    // 1-based line numbers.
    static StableGraph parse(const std::string& text);

    int vertex_count() const { return static_cast<int>(vertices_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }
    const GraphVertex& vertex(int i) const { return vertices_[i]; }
    const GraphEdge& edge(int i) const { return edges_[i]; }

    unsigned genus() const { return genus_; }
    int dim() const { return 3 * static_cast<int>(genus_) - 3; }
    int valence(int v) const;  // n_v; a loop contributes 2

    unsigned one_handle_count() const;
    unsigned long automorphism_order() const;  // always computed
    unsigned long sym_plus_order() const;      // override honored
    unsigned long sym_order() const;           // override honored
    bool has_override() const { return override_sym_plus_ || override_sym_; }
    GraphConstants constants() const;

    // Identical strings exactly for isomorphic decorated graphs.
    std::string canonical_form() const;

    // Edge indices sorted by edge id; fixes the variable order x1..xk.
    std::vector<int> edges_by_id() const;

private:
    std::vector<GraphVertex> vertices_;
    std::vector<GraphEdge> edges_;
    unsigned genus_ = 0;
    std::optional<unsigned long> override_sym_plus_, override_sym_;

    void validate(std::optional<unsigned> declared_genus) const;
};

// All isomorphism classes with total genus g and k edges. Weights run
// over 1..weight_cap (1 = unweighted). Deterministic order (sorted by
// canonical form). Throws ResourceLimitError past resource_cap
// candidate combinations.
std::vector<StableGraph> enumerate_stable_graphs(unsigned g, int k, unsigned long weight_cap = 1,
                                                 std::size_t resource_cap = 4000000);

}  // namespace mcstat
