#include "mdcust/engine.hpp"

#include "mdcust/error.hpp"

#include <algorithm>
#include <iterator>

namespace mdcust {

std::string_view to_string(OpKind kind) noexcept { return kind == OpKind::Add ? "add" : "delete"; }

std::string_view to_string(Verdict v) noexcept { return v == Verdict::Valid ? "valid" : "invalid"; }

std::string_view to_string(Reason r) noexcept {
    switch (r) {
    case Reason::RequirementSatisfied: return "RequirementSatisfied";
    case Reason::NoRequirements: return "NoRequirements";
    case Reason::AlreadyPresent: return "AlreadyPresent";
    case Reason::Deleted: return "Deleted";
    case Reason::RequirementsUnsatisfied: return "RequirementsUnsatisfied";
    case Reason::RequiredByOthers: return "RequiredByOthers";
    case Reason::ComponentNotPresent: return "ComponentNotPresent";
    case Reason::UnknownComponent: return "UnknownComponent";
    case Reason::UnknownConcern: return "UnknownConcern";
    case Reason::ComponentNotInConcern: return "ComponentNotInConcern";
    case Reason::MissingConcern: return "MissingConcern";
    case Reason::RevisionMismatch: return "RevisionMismatch";
    }
    return "Unknown";
}

namespace {

Decision rejected(Reason reason) {
    Decision d;
    d.verdict = Verdict::Invalid;
    d.reason = reason;
    return d;
}

Decision accepted(Reason reason) {
    Decision d;
    d.verdict = Verdict::Valid;
    d.reason = reason;
    return d;
}

bool revision_ok(const AppModel& m, const TenantCustomization& td, const std::optional<std::string>& revision) {
    return td.revision == m.revision && (!revision || *revision == m.revision);
}

ElementSet intersection(const ElementSet& a, const ElementSet& b) {
    ElementSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(out, out.end()));
    return out;
}

ElementSet without(ElementSet s, const ElementId& x) {
    s.erase(x);
    return s;
}

void drop_empty(TenantCustomization& td) {
    std::erase_if(td.selections, [](const auto& kv) { return kv.second.empty(); });
}

} // namespace

const RequirementEdge* find_edge(const AppModel& m, const EdgeId& id) {
    for (const auto& [cid, c] : m.concerns) {
        auto it = c.edges.find(id);
        if (it != c.edges.end()) {
            return &it->second;
        }
    }
    return nullptr;
}

SparseLine concern_column(const Concern& c, const ElementId& x) {
    SparseLine line;
    for (const auto& [id, re] : c.edges) {
        const Edge& e = re.edge;
        if (!e.outvertex.contains(x)) {
            continue;
        }
        for (const auto& src : e.invertex) {
            line[src].insert(Triple{without(e.invertex, src), without(e.outvertex, x), {id}});
        }
    }
    return line;
}

// ---------------------------------------------------------------------------
// Add

Decision add_component(const AppModel& m, TenantCustomization& td, const ConcernId& concern,
                       const ElementId& x, const std::optional<std::string>& revision) {
    if (!revision_ok(m, td, revision)) {
        return rejected(Reason::RevisionMismatch);
    }
    auto cit = m.concerns.find(concern);
    if (cit == m.concerns.end()) {
        return rejected(Reason::UnknownConcern);
    }
    if (!m.components.contains(x)) {
        return rejected(Reason::UnknownComponent);
    }
    const Concern& cn = cit->second;
    if (!cn.components.contains(x)) {
        return rejected(Reason::ComponentNotInConcern);
    }
    if (auto sit = td.selections.find(concern); sit != td.selections.end() && sit->second.components.contains(x)) {
        return accepted(Reason::AlreadyPresent);
    }

    // One requirement per incoming edge, however many sources it has.
    std::vector<EdgeId> and_edges;
    std::vector<EdgeId> or_edges;
    for (const auto& [source, triples] : concern_column(cn, x)) {
        for (const auto& t : triples) {
            const EdgeId& id = t.path.front();
            auto& bucket = cn.edges.at(id).mode == RequirementMode::And ? and_edges : or_edges;
            bucket.push_back(id);
        }
    }
    for (auto* bucket : {&and_edges, &or_edges}) {
        std::sort(bucket->begin(), bucket->end());
        bucket->erase(std::unique(bucket->begin(), bucket->end()), bucket->end());
    }

    const ElementSet selected = td.selected_components();
    auto record = [&](const EdgeId& id, ElementSet supports) {
        ConcernSelection& sel = td.selections[concern];
        sel.components.insert(x);
        sel.components.insert(supports.begin(), supports.end());
        sel.edges.insert(id);
        Decision d = accepted(Reason::RequirementSatisfied);
        d.satisfied_edge = id;
        d.recorded_supports = std::move(supports);
        return d;
    };

    for (const auto& id : and_edges) {
        const ElementSet& required = cn.edges.at(id).edge.invertex;
        if (std::includes(selected.begin(), selected.end(), required.begin(), required.end())) {
            return record(id, required);
        }
    }
    for (const auto& id : or_edges) {
        ElementSet present = intersection(cn.edges.at(id).edge.invertex, selected);
        if (!present.empty()) {
            return record(id, std::move(present));
        }
    }
    if (!and_edges.empty() || !or_edges.empty()) {
        return rejected(Reason::RequirementsUnsatisfied);
    }
    td.selections[concern].components.insert(x);
    return accepted(Reason::NoRequirements);
}

// ---------------------------------------------------------------------------
// Delete

namespace {

// Recorded edges cut down to the selected components.
std::vector<Edge> restricted_edges(const AppModel& m, const TenantCustomization& td, const ElementSet& selected) {
    std::vector<Edge> out;
    for (const auto& id : td.recorded_edges()) {
        const RequirementEdge* re = find_edge(m, id);
        if (re == nullptr) {
            continue;
        }
        Edge e{id, intersection(re->edge.invertex, selected), intersection(re->edge.outvertex, selected)};
        if (!e.invertex.empty() || !e.outvertex.empty()) {
            out.push_back(std::move(e));
        }
    }
    return out;
}

} // namespace

Metagraph tenant_metagraph(const AppModel& m, const TenantCustomization& td) {
    const ElementSet selected = td.selected_components();
    return Metagraph(selected, restricted_edges(m, td, selected));
}

SparseLine tenant_row(const AppModel& m, const TenantCustomization& td, const ElementId& x) {
    SparseLine line;
    const ElementSet selected = td.selected_components();
    if (!selected.contains(x)) {
        return line;
    }
    for (const auto& e : restricted_edges(m, td, selected)) {
        if (!e.invertex.contains(x)) {
            continue;
        }
        for (const auto& dst : e.outvertex) {
            line[dst].insert(Triple{without(e.invertex, x), without(e.outvertex, dst), {e.id}});
        }
    }
    return line;
}

SparseLine tenant_column(const AppModel& m, const TenantCustomization& td, const ElementId& x) {
    SparseLine line;
    const ElementSet selected = td.selected_components();
    if (!selected.contains(x)) {
        return line;
    }
    for (const auto& e : restricted_edges(m, td, selected)) {
        if (!e.outvertex.contains(x)) {
            continue;
        }
        for (const auto& src : e.invertex) {
            line[src].insert(Triple{without(e.invertex, src), without(e.outvertex, x), {e.id}});
        }
    }
    return line;
}

Decision delete_component(const AppModel& m, TenantCustomization& td, const ElementId& x,
                          const std::optional<std::string>& revision) {
    if (!revision_ok(m, td, revision)) {
        return rejected(Reason::RevisionMismatch);
    }
    if (!m.components.contains(x)) {
        return rejected(Reason::UnknownComponent);
    }
    if (!td.selected_components().contains(x)) {
        return rejected(Reason::ComponentNotPresent);
    }
    if (!tenant_row(m, td, x).empty()) {
        return rejected(Reason::RequiredByOthers);
    }

    Decision d = accepted(Reason::Deleted);
    for (const auto& [source, triples] : tenant_column(m, td, x)) {
        for (const auto& t : triples) {
            if (t.cooutput.empty()) {
                d.removed_edges.insert(t.path.front());
            }
        }
    }
    for (auto& [cid, sel] : td.selections) {
        for (const auto& id : d.removed_edges) {
            sel.edges.erase(id);
        }
        sel.components.erase(x);
    }
    drop_empty(td);
    return d;
}

Decision apply(const AppModel& m, TenantCustomization& td, const Operation& op) {
    if (op.kind == OpKind::Delete) {
        return delete_component(m, td, op.component, op.revision);
    }
    if (!op.concern) {
        return rejected(Reason::MissingConcern);
    }
    return add_component(m, td, *op.concern, op.component, op.revision);
}

// ---------------------------------------------------------------------------
// Session / replay

Session::Session(const AppModel& model, TenantCustomization initial) : model_(&model), td_(std::move(initial)) {}

Decision Session::apply(const Operation& op) {
    Decision d = mdcust::apply(*model_, td_, op);
    if (d.valid()) {
        ++version_;
    }
    d.state_version = version_;
    log_.emplace_back(op, d);
    return d;
}

ReplayResult replay(const AppModel& m, const std::vector<Operation>& ops, std::string tenant) {
    Session session(m, empty_customization(m, std::move(tenant)));
    ReplayResult result;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        Decision d = session.apply(ops[i]);
        if (!d.valid() && !result.first_invalid) {
            result.first_invalid = i;
        }
        result.decisions.push_back(std::move(d));
    }
    result.final_state = session.customization();
    return result;
}

// ---------------------------------------------------------------------------
// Oracle

OracleResult oracle_valid(const AppModel& m, const TenantCustomization& td) {
    OracleResult r;
    auto fail = [&](std::string clause, std::string detail) {
        r.valid = false;
        r.violations.push_back({std::move(clause), std::move(detail)});
    };

    ElementSet selected;
    for (const auto& [cid, sel] : td.selections) {
        selected.insert(sel.components.begin(), sel.components.end());
    }

    // (1) per-concern containment, hence a sub-metagraph of the application.
    for (const auto& [cid, sel] : td.selections) {
        auto cit = m.concerns.find(cid);
        if (cit == m.concerns.end()) {
            fail("containment", "unknown concern " + cid);
            continue;
        }
        for (const auto& x : sel.components) {
            if (!cit->second.components.contains(x)) {
                fail("containment", "component " + x + " not in concern " + cid);
            }
        }
        for (const auto& e : sel.edges) {
            if (!cit->second.edges.contains(e)) {
                fail("containment", "edge " + e + " not in concern " + cid);
            }
        }
    }

    // (2) every recorded edge is satisfied by the selected components.
    for (const auto& [cid, sel] : td.selections) {
        auto cit = m.concerns.find(cid);
        if (cit == m.concerns.end()) {
            continue;
        }
        for (const auto& eid : sel.edges) {
            auto eit = cit->second.edges.find(eid);
            if (eit == cit->second.edges.end()) {
                continue;
            }
            const auto& inv = eit->second.edge.invertex;
            std::size_t present = 0;
            for (const auto& v : inv) {
                present += selected.contains(v) ? 1 : 0;
            }
            const bool ok = eit->second.mode == RequirementMode::And ? present == inv.size() : present > 0;
            if (!ok) {
                fail("edge-unsatisfied", "edge " + eid + " in concern " + cid);
            }
        }
    }

    // (3) every selected component is justified by some concern selection
    // holding it: it has no incoming requirement there, or one of its incoming
    // edges there is recorded.
    for (const auto& x : selected) {
        bool justified = false;
        for (const auto& [cid, sel] : td.selections) {
            auto cit = m.concerns.find(cid);
            if (!sel.components.contains(x) || cit == m.concerns.end()) {
                continue;
            }
            bool has_incoming = false;
            for (const auto& [eid, re] : cit->second.edges) {
                if (re.edge.outvertex.contains(x) && !re.edge.invertex.empty()) {
                    has_incoming = true;
                    if (sel.edges.contains(eid)) {
                        justified = true;
                    }
                }
            }
            if (!has_incoming) {
                justified = true;
            }
            if (justified) {
                break;
            }
        }
        if (!justified) {
            fail("unjustified-component", "component " + x + " has no satisfied requirement");
        }
    }
    return r;
}

} // namespace mdcust
