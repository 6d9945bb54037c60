#pragma once

// Metagraph algebra: set-to-set directed edges, adjacency and closure
// matrices whose cells hold <coinput, cooutput, path> triples.

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace mdcust {

using ElementId = std::string;
using EdgeId = std::string;
using ElementSet = std::set<ElementId>;
using EdgeIdSet = std::set<EdgeId>;
using EdgePath = std::vector<EdgeId>;

struct Edge {
    EdgeId id;
    ElementSet invertex;
    ElementSet outvertex;

    bool operator==(const Edge&) const = default;
};

struct Triple {
    ElementSet coinput;
    ElementSet cooutput;
    EdgePath path;

    bool operator==(const Triple&) const = default;
};

// Cells key triples by path; two triples in one cell never share a path.
struct PathOrder {
    bool operator()(const Triple& a, const Triple& b) const { return a.path < b.path; }
};
using TripleSet = std::set<Triple, PathOrder>;

using CellKey = std::pair<ElementId, ElementId>;  // (source, target)

// Sparse row or column: keyed by the opposite endpoint.
using SparseLine = std::map<ElementId, TripleSet>;

class TripleMatrix {
public:
    TripleMatrix() = default;
    explicit TripleMatrix(ElementSet domain) : domain_(std::move(domain)) {}

    const ElementSet& domain() const noexcept { return domain_; }
    const std::map<CellKey, TripleSet>& cells() const noexcept { return cells_; }

    // Absent cells read as the empty set.
    const TripleSet& cell(const ElementId& source, const ElementId& target) const;

    // Returns false when a triple with the same path is already present.
    bool insert(const ElementId& source, const ElementId& target, Triple triple);

    SparseLine row(const ElementId& source) const;
    SparseLine column(const ElementId& target) const;

    std::size_t triple_count() const noexcept;
    bool empty() const noexcept { return cells_.empty(); }

    bool operator==(const TripleMatrix&) const = default;

private:
    ElementSet domain_;
    std::map<CellKey, TripleSet> cells_;
};

class Metagraph {
public:
    Metagraph() = default;

    // Throws Error{EmptyEdge | UnknownElement | DuplicateEdgeId}.
    Metagraph(ElementSet elements, std::vector<Edge> edges);

    const ElementSet& elements() const noexcept { return elements_; }
    const std::map<EdgeId, Edge>& edges() const noexcept { return edges_; }

    bool has_element(const ElementId& x) const { return elements_.contains(x); }
    bool has_edge(const EdgeId& id) const { return edges_.contains(id); }

    // Throws Error{UnknownEdge}.
    const Edge& edge(const EdgeId& id) const;

    // Edge ids whose outvertex (producers) or invertex (consumers) contains x,
    // in edge-id order.
    const std::vector<EdgeId>& producers(const ElementId& x) const;
    const std::vector<EdgeId>& consumers(const ElementId& x) const;

    bool operator==(const Metagraph& other) const {
        return elements_ == other.elements_ && edges_ == other.edges_;
    }

private:
    ElementSet elements_;
    std::map<EdgeId, Edge> edges_;
    std::map<ElementId, std::vector<EdgeId>> producers_;
    std::map<ElementId, std::vector<EdgeId>> consumers_;
};

// V_e \ {x}; throws Error{NotInVertex} when x is not in the invertex.
ElementSet coinput(const ElementId& x, const Edge& e);
// W_e \ {x}; throws Error{NotInVertex} when x is not in the outvertex.
ElementSet cooutput(const ElementId& x, const Edge& e);

TripleMatrix build_adjacency(const Metagraph& s);

// Single row/column of the adjacency matrix without building the rest.
// Throw Error{UnknownElement}.
SparseLine adjacency_column(const Metagraph& s, const ElementId& x);
SparseLine adjacency_row(const Metagraph& s, const ElementId& x);

// Cellwise union. Throws Error{DomainMismatch}.
TripleMatrix sum_adjacency(const TripleMatrix& a, const TripleMatrix& b);

struct ClosureResult {
    TripleMatrix matrix;
    bool truncated = false;  // longer simple paths exist beyond the cap
};

// All simple (edge-non-repeating) paths up to max_path_len edges; the default
// cap is |E|, which never truncates.
ClosureResult closure(const Metagraph& s, std::optional<std::size_t> max_path_len = std::nullopt);

struct PathCheck {
    bool holds = false;
    ElementSet coinput;
    ElementSet cooutput;
    std::size_t length = 0;
};

// Throws Error{UnknownEdge}.
PathCheck is_simple_path(const Metagraph& s, const EdgePath& seq, const ElementId& source,
                         const ElementId& target);

// Throws Error{UnknownEdge | UnknownElement}.
bool is_metapath(const Metagraph& s, const EdgeIdSet& edge_ids, const ElementSet& sources,
                 const ElementSet& targets);

bool is_submetagraph(const Metagraph& sub, const Metagraph& host);
// Pure input/output status is judged against the host.
bool is_input_independent(const Metagraph& sub, const Metagraph& host);
bool is_output_independent(const Metagraph& sub, const Metagraph& host);
bool is_independent(const Metagraph& sub, const Metagraph& host);

} // namespace mdcust
