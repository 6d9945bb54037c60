#include "mdcust/metagraph.hpp"

#include "mdcust/error.hpp"

#include <algorithm>
#include <iterator>
#include <tuple>

namespace mdcust {

namespace {

const TripleSet kEmptyCell{};
const std::vector<EdgeId> kNoEdges{};

ElementSet set_minus(const ElementSet& a, const ElementSet& b) {
    ElementSet out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

ElementSet without(ElementSet s, const ElementId& x) {
    s.erase(x);
    return s;
}

bool intersects(const ElementSet& a, const ElementSet& b) {
    auto i = a.begin();
    auto j = b.begin();
    while (i != a.end() && j != b.end()) {
        if (*i < *j) {
            ++i;
        } else if (*j < *i) {
            ++j;
        } else {
            return true;
        }
    }
    return false;
}

} // namespace

// ---------------------------------------------------------------------------
// TripleMatrix

const TripleSet& TripleMatrix::cell(const ElementId& source, const ElementId& target) const {
    auto it = cells_.find({source, target});
    return it == cells_.end() ? kEmptyCell : it->second;
}

bool TripleMatrix::insert(const ElementId& source, const ElementId& target, Triple triple) {
    return cells_[{source, target}].insert(std::move(triple)).second;
}

SparseLine TripleMatrix::row(const ElementId& source) const {
    SparseLine line;
    for (auto it = cells_.lower_bound({source, ElementId{}});
         it != cells_.end() && it->first.first == source; ++it) {
        line.emplace(it->first.second, it->second);
    }
    return line;
}

SparseLine TripleMatrix::column(const ElementId& target) const {
    SparseLine line;
    for (const auto& [key, triples] : cells_) {
        if (key.second == target) {
            line.emplace(key.first, triples);
        }
    }
    return line;
}

std::size_t TripleMatrix::triple_count() const noexcept {
    std::size_t n = 0;
    for (const auto& [key, triples] : cells_) {
        n += triples.size();
    }
    return n;
}

// ---------------------------------------------------------------------------
// Metagraph

Metagraph::Metagraph(ElementSet elements, std::vector<Edge> edges) : elements_(std::move(elements)) {
    for (auto& e : edges) {
        if (e.id.empty()) {
            throw Error(Errc::SchemaError, "edge id must be non-empty");
        }
        if (e.invertex.empty() && e.outvertex.empty()) {
            throw Error(Errc::EmptyEdge, "edge '" + e.id + "' has empty invertex and outvertex");
        }
        for (const auto* side : {&e.invertex, &e.outvertex}) {
            for (const auto& x : *side) {
                if (!elements_.contains(x)) {
                    throw Error(Errc::UnknownElement,
                                "edge '" + e.id + "' references unknown element '" + x + "'");
                }
            }
        }
        if (edges_.contains(e.id)) {
            throw Error(Errc::DuplicateEdgeId, "duplicate edge id '" + e.id + "'");
        }
        EdgeId id = e.id;
        edges_.emplace(std::move(id), std::move(e));
    }
    // edges_ iterates in id order, so the index vectors come out sorted.
    for (const auto& [id, e] : edges_) {
        for (const auto& x : e.outvertex) {
            producers_[x].push_back(id);
        }
        for (const auto& x : e.invertex) {
            consumers_[x].push_back(id);
        }
    }
}

const Edge& Metagraph::edge(const EdgeId& id) const {
    auto it = edges_.find(id);
    if (it == edges_.end()) {
        throw Error(Errc::UnknownEdge, "unknown edge '" + id + "'");
    }
    return it->second;
}

const std::vector<EdgeId>& Metagraph::producers(const ElementId& x) const {
    auto it = producers_.find(x);
    return it == producers_.end() ? kNoEdges : it->second;
}

const std::vector<EdgeId>& Metagraph::consumers(const ElementId& x) const {
    auto it = consumers_.find(x);
    return it == consumers_.end() ? kNoEdges : it->second;
}

// ---------------------------------------------------------------------------
// Adjacency

ElementSet coinput(const ElementId& x, const Edge& e) {
    if (!e.invertex.contains(x)) {
        throw Error(Errc::NotInVertex, "'" + x + "' is not in the invertex of '" + e.id + "'");
    }
    return without(e.invertex, x);
}

ElementSet cooutput(const ElementId& x, const Edge& e) {
    if (!e.outvertex.contains(x)) {
        throw Error(Errc::NotInVertex, "'" + x + "' is not in the outvertex of '" + e.id + "'");
    }
    return without(e.outvertex, x);
}

TripleMatrix build_adjacency(const Metagraph& s) {
    TripleMatrix a(s.elements());
    for (const auto& [id, e] : s.edges()) {
        for (const auto& src : e.invertex) {
            for (const auto& dst : e.outvertex) {
                a.insert(src, dst, Triple{without(e.invertex, src), without(e.outvertex, dst), {id}});
            }
        }
    }
    return a;
}

SparseLine adjacency_column(const Metagraph& s, const ElementId& x) {
    if (!s.has_element(x)) {
        throw Error(Errc::UnknownElement, "unknown element '" + x + "'");
    }
    SparseLine line;
    for (const auto& id : s.producers(x)) {
        const Edge& e = s.edge(id);
        for (const auto& src : e.invertex) {
            line[src].insert(Triple{without(e.invertex, src), without(e.outvertex, x), {id}});
        }
    }
    return line;
}

SparseLine adjacency_row(const Metagraph& s, const ElementId& x) {
    if (!s.has_element(x)) {
        throw Error(Errc::UnknownElement, "unknown element '" + x + "'");
    }
    SparseLine line;
    for (const auto& id : s.consumers(x)) {
        const Edge& e = s.edge(id);
        for (const auto& dst : e.outvertex) {
            line[dst].insert(Triple{without(e.invertex, x), without(e.outvertex, dst), {id}});
        }
    }
    return line;
}

TripleMatrix sum_adjacency(const TripleMatrix& a, const TripleMatrix& b) {
    if (a.domain() != b.domain()) {
        throw Error(Errc::DomainMismatch, "matrices are defined over different generating sets");
    }
    TripleMatrix out = a;
    for (const auto& [key, triples] : b.cells()) {
        for (const auto& t : triples) {
            out.insert(key.first, key.second, t);
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Closure

namespace {

struct PartialPath {
    ElementId source;
    EdgePath edges;
    ElementSet inputs;   // union of invertices
    ElementSet outputs;  // union of outvertices

    bool operator<(const PartialPath& o) const {
        return std::tie(source, edges) < std::tie(o.source, o.edges);
    }
};

void emit(TripleMatrix& m, const Metagraph& s, const PartialPath& p) {
    const ElementSet net_inputs = without(set_minus(p.inputs, p.outputs), p.source);
    for (const auto& target : s.edge(p.edges.back()).outvertex) {
        m.insert(p.source, target, Triple{net_inputs, without(p.outputs, target), p.edges});
    }
}

} // namespace

ClosureResult closure(const Metagraph& s, std::optional<std::size_t> max_path_len) {
    const std::size_t cap = max_path_len.value_or(s.edges().size());
    ClosureResult result{TripleMatrix(s.elements()), false};
    if (cap == 0) {
        result.truncated = !s.edges().empty();
        return result;
    }

    std::set<PartialPath> frontier;
    for (const auto& [id, e] : s.edges()) {
        for (const auto& src : e.invertex) {
            frontier.insert(PartialPath{src, {id}, e.invertex, e.outvertex});
        }
    }

    for (std::size_t length = 1; !frontier.empty(); ++length) {
        for (const auto& p : frontier) {
            emit(result.matrix, s, p);
        }
        // Extend through every element the last edge produces; the same
        // (source, sequence) reached through different joints is kept once.
        std::set<PartialPath> next;
        for (const auto& p : frontier) {
            const Edge& last = s.edge(p.edges.back());
            for (const auto& joint : last.outvertex) {
                for (const auto& id : s.consumers(joint)) {
                    if (std::find(p.edges.begin(), p.edges.end(), id) != p.edges.end()) {
                        continue;
                    }
                    PartialPath q{p.source, p.edges, p.inputs, p.outputs};
                    q.edges.push_back(id);
                    if (next.contains(q)) {
                        continue;
                    }
                    const Edge& e = s.edge(id);
                    q.inputs.insert(e.invertex.begin(), e.invertex.end());
                    q.outputs.insert(e.outvertex.begin(), e.outvertex.end());
                    next.insert(std::move(q));
                }
            }
        }
        if (length == cap) {
            result.truncated = !next.empty();
            break;
        }
        frontier = std::move(next);
    }
    return result;
}

// ---------------------------------------------------------------------------
// Predicates

PathCheck is_simple_path(const Metagraph& s, const EdgePath& seq, const ElementId& source,
                         const ElementId& target) {
    std::vector<const Edge*> edges;
    edges.reserve(seq.size());
    for (const auto& id : seq) {
        edges.push_back(&s.edge(id));
    }
    PathCheck check;
    if (edges.empty() || !edges.front()->invertex.contains(source) ||
        !edges.back()->outvertex.contains(target)) {
        return check;
    }
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        if (!intersects(edges[i]->outvertex, edges[i + 1]->invertex)) {
            return check;
        }
    }
    if (EdgeIdSet(seq.begin(), seq.end()).size() != seq.size()) {
        return check;
    }
    ElementSet inputs;
    ElementSet outputs;
    for (const Edge* e : edges) {
        inputs.insert(e->invertex.begin(), e->invertex.end());
        outputs.insert(e->outvertex.begin(), e->outvertex.end());
    }
    check.holds = true;
    check.coinput = without(set_minus(inputs, outputs), source);
    check.cooutput = without(outputs, target);
    check.length = seq.size();
    return check;
}

bool is_metapath(const Metagraph& s, const EdgeIdSet& edge_ids, const ElementSet& sources,
                 const ElementSet& targets) {
    std::vector<Edge> chosen;
    for (const auto& id : edge_ids) {
        chosen.push_back(s.edge(id));
    }
    for (const auto* side : {&sources, &targets}) {
        for (const auto& x : *side) {
            if (!s.has_element(x)) {
                throw Error(Errc::UnknownElement, "unknown element '" + x + "'");
            }
        }
    }

    ElementSet inputs;
    ElementSet outputs;
    for (const auto& e : chosen) {
        inputs.insert(e.invertex.begin(), e.invertex.end());
        outputs.insert(e.outvertex.begin(), e.outvertex.end());
    }
    const ElementSet net_inputs = set_minus(inputs, outputs);
    if (!std::includes(sources.begin(), sources.end(), net_inputs.begin(), net_inputs.end())) {
        return false;
    }
    if (!std::includes(outputs.begin(), outputs.end(), targets.begin(), targets.end())) {
        return false;
    }

    // Every chosen edge must lie on some simple path from B to C inside E'.
    const Metagraph sub(s.elements(), chosen);
    const TripleMatrix paths = closure(sub).matrix;
    EdgeIdSet covered;
    for (const auto& [key, triples] : paths.cells()) {
        if (!sources.contains(key.first) || !targets.contains(key.second)) {
            continue;
        }
        for (const auto& t : triples) {
            covered.insert(t.path.begin(), t.path.end());
        }
    }
    return covered == edge_ids;
}

bool is_submetagraph(const Metagraph& sub, const Metagraph& host) {
    if (!std::includes(host.elements().begin(), host.elements().end(), sub.elements().begin(),
                       sub.elements().end())) {
        return false;
    }
    for (const auto& [id, e] : sub.edges()) {
        auto it = host.edges().find(id);
        if (it == host.edges().end() || !(it->second == e)) {
            return false;
        }
    }
    return true;
}

bool is_input_independent(const Metagraph& sub, const Metagraph& host) {
    if (!is_submetagraph(sub, host)) {
        return false;
    }
    for (const auto& x : sub.elements()) {
        for (const auto& id : host.producers(x)) {
            if (!sub.has_edge(id)) {
                return false;
            }
        }
    }
    return true;
}

bool is_output_independent(const Metagraph& sub, const Metagraph& host) {
    if (!is_submetagraph(sub, host)) {
        return false;
    }
    for (const auto& x : sub.elements()) {
        for (const auto& id : host.consumers(x)) {
            if (!sub.has_edge(id)) {
                return false;
            }
        }
    }
    return true;
}

bool is_independent(const Metagraph& sub, const Metagraph& host) {
    return is_input_independent(sub, host) && is_output_independent(sub, host);
}

} // namespace mdcust
