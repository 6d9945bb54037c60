#include "mdcust/model.hpp"

#include "mdcust/error.hpp"

#include <algorithm>
#include <tuple>

namespace mdcust {

std::string_view to_string(RequirementMode mode) noexcept {
    return mode == RequirementMode::And ? "and" : "or";
}

std::string_view to_string(Violation v) noexcept {
    switch (v) {
    case Violation::OverlappingConcerns: return "OverlappingConcerns";
    case Violation::UncoveredComponent: return "UncoveredComponent";
    case Violation::DependentConcern: return "DependentConcern";
    case Violation::ConcernInMultipleDimensions: return "ConcernInMultipleDimensions";
    case Violation::DanglingEdgeReference: return "DanglingEdgeReference";
    }
    return "Unknown";
}

ConcernId none_concern_id(const DimensionId& dimension) { return dimension + "/none"; }

ElementSet AppModel::component_ids() const {
    ElementSet ids;
    for (const auto& [id, c] : components) {
        ids.insert(ids.end(), id);
    }
    return ids;
}

const Concern& AppModel::concern(const ConcernId& id) const {
    auto it = concerns.find(id);
    if (it == concerns.end()) {
        throw Error(Errc::UnknownConcern, "unknown concern '" + id + "'");
    }
    return it->second;
}

const Dimension& AppModel::dimension(const DimensionId& id) const {
    auto it = dimensions.find(id);
    if (it == dimensions.end()) {
        throw Error(Errc::UnknownDimension, "unknown dimension '" + id + "'");
    }
    return it->second;
}

std::optional<DimensionId> AppModel::dimension_of(const ConcernId& id) const {
    for (const auto& [did, d] : dimensions) {
        if (d.none_concern == id || std::find(d.concerns.begin(), d.concerns.end(), id) != d.concerns.end()) {
            return did;
        }
    }
    return std::nullopt;
}

namespace {

// Concern ids of a dimension including its None concern.
std::vector<ConcernId> all_concerns(const Dimension& d) {
    std::vector<ConcernId> ids = d.concerns;
    if (d.none_concern) {
        ids.push_back(*d.none_concern);
    }
    return ids;
}

std::vector<Edge> plain_edges(const Concern& c) {
    std::vector<Edge> edges;
    edges.reserve(c.edges.size());
    for (const auto& [id, re] : c.edges) {
        edges.push_back(re.edge);
    }
    return edges;
}

} // namespace

// ---------------------------------------------------------------------------
// validate_model

WellFormednessReport validate_model(const AppModel& m) {
    WellFormednessReport report;
    auto add = [&](Violation code, std::string location, std::string detail) {
        report.push_back({code, std::move(location), std::move(detail)});
    };
    const ElementSet all = m.component_ids();

    // Concern membership across dimensions.
    std::map<ConcernId, std::vector<DimensionId>> owners;
    for (const auto& [did, d] : m.dimensions) {
        for (const auto& cid : all_concerns(d)) {
            owners[cid].push_back(did);
            if (!m.concerns.contains(cid)) {
                add(Violation::DanglingEdgeReference, "dimension " + did, "unknown concern " + cid);
            }
        }
    }
    for (const auto& [cid, c] : m.concerns) {
        auto it = owners.find(cid);
        if (it == owners.end()) {
            add(Violation::ConcernInMultipleDimensions, "concern " + cid, "listed in no dimension");
        } else if (it->second.size() > 1) {
            std::string dims;
            for (const auto& d : it->second) {
                dims += (dims.empty() ? "" : ",") + d;
            }
            add(Violation::ConcernInMultipleDimensions, "concern " + cid, "listed in " + dims);
        }
    }

    // References from concerns and edges; usable edges feed the independence
    // checks below.
    std::map<ConcernId, std::vector<Edge>> usable;
    std::map<EdgeId, ConcernId> edge_owner;
    for (const auto& [cid, c] : m.concerns) {
        for (const auto& x : c.components) {
            if (!all.contains(x)) {
                add(Violation::DanglingEdgeReference, "concern " + cid, "unknown component " + x);
            }
        }
        if (c.is_none && !c.edges.empty()) {
            add(Violation::DependentConcern, "concern " + cid, "None concern carries edges");
        }
        for (const auto& [eid, re] : c.edges) {
            const Edge& e = re.edge;
            bool ok = true;
            if (e.invertex.empty() && e.outvertex.empty()) {
                add(Violation::DanglingEdgeReference, "concern " + cid + " edge " + eid, "empty edge");
                ok = false;
            }
            if (auto [it, fresh] = edge_owner.emplace(eid, cid); !fresh) {
                add(Violation::DanglingEdgeReference, "concern " + cid + " edge " + eid,
                    "edge id also used by concern " + it->second);
                ok = false;
            }
            for (const auto* side : {&e.invertex, &e.outvertex}) {
                for (const auto& x : *side) {
                    if (!all.contains(x)) {
                        add(Violation::DanglingEdgeReference, "concern " + cid + " edge " + eid,
                            "unknown component " + x);
                        ok = false;
                    } else if (!c.components.contains(x)) {
                        add(Violation::DanglingEdgeReference, "concern " + cid + " edge " + eid,
                            "component " + x + " outside the concern");
                    }
                }
            }
            if (ok) {
                usable[cid].push_back(e);
            }
        }
    }

    for (const auto& [did, d] : m.dimensions) {
        const auto ids = all_concerns(d);
        std::map<ElementId, ConcernId> seen;
        std::vector<Edge> dimension_edges;
        for (const auto& cid : ids) {
            auto cit = m.concerns.find(cid);
            if (cit == m.concerns.end()) {
                continue;
            }
            for (const auto& x : cit->second.components) {
                auto [it, fresh] = seen.emplace(x, cid);
                if (!fresh && it->second != cid) {
                    add(Violation::OverlappingConcerns, "dimension " + did,
                        "component " + x + " in " + it->second + " and " + cid);
                }
            }
            const auto& edges = usable[cid];
            dimension_edges.insert(dimension_edges.end(), edges.begin(), edges.end());
        }
        for (const auto& x : all) {
            if (!seen.contains(x)) {
                add(Violation::UncoveredComponent, "dimension " + did, "component " + x);
            }
        }

        const Metagraph host(all, dimension_edges);
        for (const auto& cid : d.concerns) {
            auto cit = m.concerns.find(cid);
            if (cit == m.concerns.end()) {
                continue;
            }
            ElementSet elements;
            for (const auto& x : cit->second.components) {
                if (all.contains(x)) {
                    elements.insert(x);
                }
            }
            for (const auto& e : usable[cid]) {
                elements.insert(e.invertex.begin(), e.invertex.end());
                elements.insert(e.outvertex.begin(), e.outvertex.end());
            }
            const Metagraph sub(elements, usable[cid]);
            for (const auto& x : sub.elements()) {
                for (const auto& eid : host.producers(x)) {
                    if (!sub.has_edge(eid)) {
                        add(Violation::DependentConcern, "concern " + cid,
                            "component " + x + " produced by foreign edge " + eid);
                    }
                }
                for (const auto& eid : host.consumers(x)) {
                    if (!sub.has_edge(eid)) {
                        add(Violation::DependentConcern, "concern " + cid,
                            "component " + x + " used by foreign edge " + eid);
                    }
                }
            }
        }
    }

    std::sort(report.begin(), report.end());
    report.erase(std::unique(report.begin(), report.end()), report.end());
    return report;
}

// ---------------------------------------------------------------------------
// Derived views

AppModel derive_none_concerns(AppModel m) {
    const ElementSet all = m.component_ids();
    for (auto& [did, d] : m.dimensions) {
        if (d.none_concern) {
            continue;
        }
        ElementSet rest = all;
        for (const auto& cid : d.concerns) {
            auto it = m.concerns.find(cid);
            if (it == m.concerns.end()) {
                continue;
            }
            for (const auto& x : it->second.components) {
                rest.erase(x);
            }
        }
        Concern none;
        none.id = none_concern_id(did);
        none.name = "None";
        none.components = std::move(rest);
        none.is_none = true;
        d.none_concern = none.id;
        m.concerns[none.id] = std::move(none);
    }
    return m;
}

Metagraph concern_metagraph(const AppModel& m, const ConcernId& id) {
    const Concern& c = m.concern(id);
    return Metagraph(c.components, plain_edges(c));
}

Metagraph dimension_metagraph(const AppModel& m, const DimensionId& id) {
    const Dimension& d = m.dimension(id);
    std::vector<Edge> edges;
    for (const auto& cid : all_concerns(d)) {
        auto more = plain_edges(m.concern(cid));
        edges.insert(edges.end(), more.begin(), more.end());
    }
    return Metagraph(m.component_ids(), std::move(edges));
}

TripleMatrix dimension_adjacency(const AppModel& m, const DimensionId& id) {
    const Dimension& d = m.dimension(id);
    const ElementSet all = m.component_ids();
    TripleMatrix sum(all);
    for (const auto& cid : all_concerns(d)) {
        sum = sum_adjacency(sum, build_adjacency(Metagraph(all, plain_edges(m.concern(cid)))));
    }
    return sum;
}

Metagraph app_metagraph(const AppModel& m) {
    std::vector<Edge> edges;
    for (const auto& [did, d] : m.dimensions) {
        for (const auto& cid : all_concerns(d)) {
            auto more = plain_edges(m.concern(cid));
            edges.insert(edges.end(), more.begin(), more.end());
        }
    }
    return Metagraph(m.component_ids(), std::move(edges));
}

std::vector<GuidanceEntry> concern_guidance(const AppModel& m, const ConcernId& concern,
                                            const std::optional<ElementId>& target) {
    const Metagraph g = concern_metagraph(m, concern);
    if (target && !g.has_element(*target)) {
        throw Error(Errc::UnknownElement, "component '" + *target + "' is not in concern '" + concern + "'");
    }
    const TripleMatrix paths = closure(g).matrix;
    std::vector<GuidanceEntry> out;
    for (const auto& [key, triples] : paths.cells()) {
        if (target && key.second != *target) {
            continue;
        }
        for (const auto& t : triples) {
            out.push_back({key.first, key.second, t.coinput, t.cooutput, t.path});
        }
    }
    std::sort(out.begin(), out.end(), [](const GuidanceEntry& a, const GuidanceEntry& b) {
        return std::forward_as_tuple(a.path.size(), a.source, a.path, a.target) <
               std::forward_as_tuple(b.path.size(), b.source, b.path, b.target);
    });
    return out;
}

// ---------------------------------------------------------------------------
// TenantCustomization

ElementSet TenantCustomization::selected_components() const {
    ElementSet out;
    for (const auto& [cid, sel] : selections) {
        out.insert(sel.components.begin(), sel.components.end());
    }
    return out;
}

EdgeIdSet TenantCustomization::recorded_edges() const {
    EdgeIdSet out;
    for (const auto& [cid, sel] : selections) {
        out.insert(sel.edges.begin(), sel.edges.end());
    }
    return out;
}

std::map<PointId, ElementSet> TenantCustomization::by_point(const AppModel& m) const {
    std::map<PointId, ElementSet> out;
    for (const auto& x : selected_components()) {
        auto it = m.components.find(x);
        if (it != m.components.end()) {
            out[it->second.point].insert(x);
        }
    }
    return out;
}

TenantCustomization empty_customization(const AppModel& m, std::string tenant) {
    return TenantCustomization{std::move(tenant), m.id, m.revision, {}};
}

} // namespace mdcust
