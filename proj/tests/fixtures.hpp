#pragma once

// Shared test fixtures and independent oracles. Nothing here calls the
// algorithms it is used to check.

#include "mdcust/engine.hpp"
#include "mdcust/metagraph.hpp"
#include "mdcust/model.hpp"

#include <fstream>
#include <iterator>
#include <map>
#include <random>
#include <set>
#include <string>
#include <tuple>
#include <vector>

namespace fixtures {

using namespace mdcust;

inline std::string golden_path(const std::string& name) { return std::string(MDCUST_GOLDEN_DIR) + "/" + name; }

inline std::string read_golden(const std::string& name) {
    std::ifstream in(golden_path(name), std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

// X = {x1..x6}, e1 = <{x1,x2},{x3,x4}>, e2 = <{x2},{x5}>, e3 = <{x4,x5},{x6}>
inline Metagraph example() {
    return Metagraph({"x1", "x2", "x3", "x4", "x5", "x6"},
                     {Edge{"e1", {"x1", "x2"}, {"x3", "x4"}}, Edge{"e2", {"x2"}, {"x5"}},
                      Edge{"e3", {"x4", "x5"}, {"x6"}}});
}

// Adjacency cells of example(), written out by hand.
inline std::map<CellKey, std::set<std::tuple<ElementSet, ElementSet, EdgePath>>> example_adjacency_cells() {
    return {
        {{"x1", "x3"}, {{{"x2"}, {"x4"}, {"e1"}}}},
        {{"x1", "x4"}, {{{"x2"}, {"x3"}, {"e1"}}}},
        {{"x2", "x3"}, {{{"x1"}, {"x4"}, {"e1"}}}},
        {{"x2", "x4"}, {{{"x1"}, {"x3"}, {"e1"}}}},
        {{"x2", "x5"}, {{{}, {}, {"e2"}}}},
        {{"x4", "x6"}, {{{"x5"}, {}, {"e3"}}}},
        {{"x5", "x6"}, {{{"x4"}, {}, {"e3"}}}},
    };
}

// Closure cells of example(): the adjacency cells plus the three length-2 paths.
inline std::map<CellKey, std::set<std::tuple<ElementSet, ElementSet, EdgePath>>> example_closure_cells() {
    auto cells = example_adjacency_cells();
    cells[{"x1", "x6"}] = {{{"x2", "x5"}, {"x3", "x4"}, {"e1", "e3"}}};
    cells[{"x2", "x6"}] = {{{"x1", "x5"}, {"x3", "x4"}, {"e1", "e3"}}, {{"x4"}, {"x5"}, {"e2", "e3"}}};
    return cells;
}

inline std::map<CellKey, std::set<std::tuple<ElementSet, ElementSet, EdgePath>>> cells_of(const TripleMatrix& m) {
    std::map<CellKey, std::set<std::tuple<ElementSet, ElementSet, EdgePath>>> out;
    for (const auto& [key, triples] : m.cells()) {
        for (const auto& t : triples) {
            out[key].insert({t.coinput, t.cooutput, t.path});
        }
    }
    return out;
}

// Random metagraph with at most max_elements elements and max_edges edges.
inline Metagraph random_metagraph(std::mt19937_64& rng, std::size_t max_elements, std::size_t max_edges) {
    std::uniform_int_distribution<std::size_t> n_el(1, max_elements);
    std::uniform_int_distribution<std::size_t> n_ed(0, max_edges);
    const std::size_t n = n_el(rng);
    const std::size_t k = n_ed(rng);
    ElementSet xs;
    std::vector<ElementId> ids;
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back("x" + std::to_string(i));
        xs.insert(ids.back());
    }
    std::bernoulli_distribution member(0.35);
    std::vector<Edge> edges;
    for (std::size_t j = 0; j < k; ++j) {
        Edge e{"e" + std::to_string(j), {}, {}};
        for (const auto& x : ids) {
            if (member(rng)) e.invertex.insert(x);
            if (member(rng)) e.outvertex.insert(x);
        }
        if (e.invertex.empty() && e.outvertex.empty()) {
            e.outvertex.insert(ids[std::uniform_int_distribution<std::size_t>(0, n - 1)(rng)]);
        }
        edges.push_back(std::move(e));
    }
    return Metagraph(xs, edges);
}

// Every sequence of distinct edges, checked against the simple-path
// conditions for every (source, target) pair, with coinput/cooutput taken
// straight from their set formulas.
inline std::map<CellKey, std::set<std::tuple<ElementSet, ElementSet, EdgePath>>> brute_force_closure(const Metagraph& s) {
    std::vector<const Edge*> edges;
    for (const auto& [id, e] : s.edges()) edges.push_back(&e);
    std::map<CellKey, std::set<std::tuple<ElementSet, ElementSet, EdgePath>>> out;

    std::vector<const Edge*> seq;
    std::vector<bool> used(edges.size(), false);
    auto check = [&] {
        for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
            bool meet = false;
            for (const auto& w : seq[i]->outvertex) meet = meet || seq[i + 1]->invertex.count(w) > 0;
            if (!meet) return;
        }
        ElementSet uv, uw;
        EdgePath path;
        for (const Edge* e : seq) {
            uv.insert(e->invertex.begin(), e->invertex.end());
            uw.insert(e->outvertex.begin(), e->outvertex.end());
            path.push_back(e->id);
        }
        for (const auto& x : s.elements()) {
            if (!seq.front()->invertex.count(x)) continue;
            for (const auto& y : s.elements()) {
                if (!seq.back()->outvertex.count(y)) continue;
                ElementSet ci;
                for (const auto& v : uv) {
                    if (!uw.count(v) && v != x) ci.insert(v);
                }
                ElementSet co;
                for (const auto& w : uw) {
                    if (w != y) co.insert(w);
                }
                out[{x, y}].insert({ci, co, path});
            }
        }
    };
    auto dfs = [&](auto&& self) -> void {
        if (!seq.empty()) check();
        for (std::size_t i = 0; i < edges.size(); ++i) {
            if (used[i]) continue;
            used[i] = true;
            seq.push_back(edges[i]);
            self(self);
            seq.pop_back();
            used[i] = false;
        }
    };
    dfs(dfs);
    return out;
}

// ---------------------------------------------------------------------------
// Models

inline Component component(const std::string& id, const std::string& point) { return Component{id, point, id, std::nullopt}; }

// Single-dimension model holding the given concerns; components are dealt to
// one customization point.
inline AppModel single_dimension_model(const ElementSet& components, std::vector<Concern> concerns,
                                       const std::string& revision = "r1") {
    AppModel m;
    m.id = "test";
    m.revision = revision;
    m.customization_points["cp"] = CustomizationPoint{"cp", "point", components};
    for (const auto& x : components) m.components[x] = component(x, "cp");
    Dimension d{"dim", "dimension", {}, std::nullopt};
    for (auto& c : concerns) {
        d.concerns.push_back(c.id);
        m.concerns[c.id] = std::move(c);
    }
    m.dimensions["dim"] = d;
    return derive_none_concerns(std::move(m));
}

inline RequirementEdge and_edge(const std::string& id, ElementSet in, ElementSet out) {
    return RequirementEdge{Edge{id, std::move(in), std::move(out)}, RequirementMode::And};
}

inline RequirementEdge or_edge(const std::string& id, ElementSet in, ElementSet out) {
    return RequirementEdge{Edge{id, std::move(in), std::move(out)}, RequirementMode::Or};
}

inline Concern concern(const std::string& id, ElementSet components, std::vector<RequirementEdge> edges) {
    Concern c{id, id, std::move(components), {}, false};
    for (auto& e : edges) c.edges.emplace(e.edge.id, std::move(e));
    return c;
}

// SEC: components {x1..x5}; x1 and x2 are required by x4, x2 and x3 by x5.
inline AppModel sec_model() {
    return single_dimension_model({"x1", "x2", "x3", "x4", "x5"},
                                  {concern("SEC", {"x1", "x2", "x3", "x4", "x5"},
                                           {and_edge("eA", {"x1", "x2"}, {"x4"}), and_edge("eB", {"x2", "x3"}, {"x5"})})});
}

// OR: c requires a or b.
inline AppModel or_model() {
    return single_dimension_model({"a", "b", "c"}, {concern("K", {"a", "b", "c"}, {or_edge("eC", {"a", "b"}, {"c"})})});
}

inline Operation add(const std::string& x, const std::string& concern) {
    return Operation{OpKind::Add, x, concern, std::nullopt};
}

inline Operation del(const std::string& x) { return Operation{OpKind::Delete, x, std::nullopt, std::nullopt}; }

// Unbiased random op stream: adds to a random concern (usually one holding
// the component), deletes of random components, and the odd unknown id.
inline std::vector<Operation> random_ops(std::mt19937_64& rng, const AppModel& m, std::size_t n) {
    std::vector<ElementId> comps;
    for (const auto& [id, c] : m.components) comps.push_back(id);
    std::vector<const Concern*> concerns;
    for (const auto& [id, c] : m.concerns) concerns.push_back(&c);
    auto pick = [&](std::size_t k) { return std::uniform_int_distribution<std::size_t>(0, k - 1)(rng); };
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<Operation> ops;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = u(rng);
        if (r < 0.02) {
            ops.push_back(add("unknown", concerns[pick(concerns.size())]->id));
        } else if (r < 0.04) {
            ops.push_back(add(comps[pick(comps.size())], "unknown"));
        } else if (r < 0.65) {
            const Concern& c = *concerns[pick(concerns.size())];
            if (!c.components.empty() && u(rng) < 0.9) {
                auto it = c.components.begin();
                std::advance(it, static_cast<std::ptrdiff_t>(pick(c.components.size())));
                ops.push_back(add(*it, c.id));
            } else {
                ops.push_back(add(comps[pick(comps.size())], c.id));
            }
        } else {
            ops.push_back(del(comps[pick(comps.size())]));
        }
    }
    return ops;
}

// ---------------------------------------------------------------------------
// Brute-force well-formedness checker: each clause by exhaustive enumeration
// over components, concern pairs and edges. Returns the set of violation
// codes present.

inline std::set<Violation> brute_force_violations(const AppModel& m) {
    std::set<Violation> codes;
    std::vector<ElementId> comps;
    for (const auto& [id, c] : m.components) comps.push_back(id);
    auto known = [&](const ElementId& x) { return m.components.count(x) > 0; };

    for (const auto& [cid, c] : m.concerns) {
        int listed = 0;
        for (const auto& [did, d] : m.dimensions) {
            for (const auto& k : d.concerns) listed += (k == cid);
            listed += (d.none_concern && *d.none_concern == cid);
        }
        if (listed != 1) codes.insert(Violation::ConcernInMultipleDimensions);
    }
    std::map<EdgeId, int> edge_uses;
    for (const auto& [cid, c] : m.concerns) {
        for (const auto& x : c.components) {
            if (!known(x)) codes.insert(Violation::DanglingEdgeReference);
        }
        for (const auto& [eid, re] : c.edges) {
            if (++edge_uses[eid] > 1) codes.insert(Violation::DanglingEdgeReference);
            if (re.edge.invertex.empty() && re.edge.outvertex.empty()) codes.insert(Violation::DanglingEdgeReference);
            for (const auto& x : re.edge.invertex) {
                if (!c.components.count(x)) codes.insert(Violation::DanglingEdgeReference);
            }
            for (const auto& x : re.edge.outvertex) {
                if (!c.components.count(x)) codes.insert(Violation::DanglingEdgeReference);
            }
        }
        if (c.is_none && !c.edges.empty()) codes.insert(Violation::DependentConcern);
    }
    for (const auto& [did, d] : m.dimensions) {
        std::vector<ConcernId> ids = d.concerns;
        if (d.none_concern) ids.push_back(*d.none_concern);
        for (const auto& k : ids) {
            if (!m.concerns.count(k)) codes.insert(Violation::DanglingEdgeReference);
        }
        for (const auto& x : comps) {
            int holders = 0;
            for (const auto& k : ids) {
                auto it = m.concerns.find(k);
                if (it != m.concerns.end() && it->second.components.count(x)) ++holders;
            }
            if (holders == 0) codes.insert(Violation::UncoveredComponent);
            if (holders > 1) codes.insert(Violation::OverlappingConcerns);
        }
        // Independence: any component of a concern (or touched by its edges)
        // that is produced or consumed by an edge of another concern of the
        // same dimension.
        for (const auto& k : d.concerns) {
            auto it = m.concerns.find(k);
            if (it == m.concerns.end()) continue;
            ElementSet touched;
            for (const auto& x : it->second.components) {
                if (known(x)) touched.insert(x);
            }
            for (const auto& [eid, re] : it->second.edges) {
                bool valid_edge = edge_uses[eid] == 1 && !(re.edge.invertex.empty() && re.edge.outvertex.empty());
                for (const auto& x : re.edge.invertex) valid_edge = valid_edge && known(x);
                for (const auto& x : re.edge.outvertex) valid_edge = valid_edge && known(x);
                if (!valid_edge) continue;
                touched.insert(re.edge.invertex.begin(), re.edge.invertex.end());
                touched.insert(re.edge.outvertex.begin(), re.edge.outvertex.end());
            }
            for (const auto& other : ids) {
                if (other == k) continue;
                auto ot = m.concerns.find(other);
                if (ot == m.concerns.end()) continue;
                for (const auto& [eid, re] : ot->second.edges) {
                    if (it->second.edges.count(eid)) continue;
                    bool valid_edge = edge_uses[eid] == 1 && !(re.edge.invertex.empty() && re.edge.outvertex.empty());
                    for (const auto& x : re.edge.invertex) valid_edge = valid_edge && known(x);
                    for (const auto& x : re.edge.outvertex) valid_edge = valid_edge && known(x);
                    if (!valid_edge) continue;
                    for (const auto& x : touched) {
                        if (re.edge.invertex.count(x) || re.edge.outvertex.count(x)) codes.insert(Violation::DependentConcern);
                    }
                }
            }
        }
    }
    return codes;
}

} // namespace fixtures
