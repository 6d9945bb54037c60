#pragma once

// Incremental validation of tenant customization operations. The engine is
// stateless: it transforms (model, customization) pairs. Session adds the
// op log and the state_version counter.

#include "mdcust/model.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mdcust {

enum class OpKind { Add, Delete };

std::string_view to_string(OpKind kind) noexcept;

struct Operation {
    OpKind kind = OpKind::Add;
    ElementId component;
    std::optional<ConcernId> concern;      // required for Add
    std::optional<std::string> revision;   // model revision the op targets

    bool operator==(const Operation&) const = default;
};

enum class Verdict { Valid, Invalid };

enum class Reason {
    // valid
    RequirementSatisfied,
    NoRequirements,
    AlreadyPresent,
    Deleted,
    // invalid
    RequirementsUnsatisfied,
    RequiredByOthers,
    ComponentNotPresent,
    UnknownComponent,
    UnknownConcern,
    ComponentNotInConcern,
    MissingConcern,
    RevisionMismatch,
};

std::string_view to_string(Verdict v) noexcept;
std::string_view to_string(Reason r) noexcept;

struct Decision {
    Verdict verdict = Verdict::Invalid;
    Reason reason = Reason::UnknownComponent;
    std::optional<EdgeId> satisfied_edge;
    ElementSet recorded_supports;
    EdgeIdSet removed_edges;
    std::uint64_t state_version = 0;

    bool valid() const noexcept { return verdict == Verdict::Valid; }
    bool operator==(const Decision&) const = default;
};

// Add x to the named concern's selection if one of its incoming requirement
// edges is already satisfied by the tenant's selected components. On an
// invalid verdict `td` is left untouched. state_version is left at 0.
Decision add_component(const AppModel& m, TenantCustomization& td, const ConcernId& concern,
                       const ElementId& x, const std::optional<std::string>& revision = std::nullopt);

// Delete x from every concern selection unless it supports a recorded edge.
Decision delete_component(const AppModel& m, TenantCustomization& td, const ElementId& x,
                          const std::optional<std::string>& revision = std::nullopt);

Decision apply(const AppModel& m, TenantCustomization& td, const Operation& op);

// Tenant metagraph <X_td, E_td>: recorded edges restricted to the selected
// components; edges left with no selected endpoint are dropped.
Metagraph tenant_metagraph(const AppModel& m, const TenantCustomization& td);

// Row/column of the tenant adjacency matrix, built from the recorded edges
// incident to x only.
SparseLine tenant_row(const AppModel& m, const TenantCustomization& td, const ElementId& x);
SparseLine tenant_column(const AppModel& m, const TenantCustomization& td, const ElementId& x);

// Column x of a concern's adjacency matrix, built from the concern's edges
// producing x.
SparseLine concern_column(const Concern& c, const ElementId& x);

// Requirement edge lookup across all concerns. nullptr when unknown.
const RequirementEdge* find_edge(const AppModel& m, const EdgeId& id);

class Session {
public:
    Session(const AppModel& model, TenantCustomization initial);

    const TenantCustomization& customization() const noexcept { return td_; }
    std::uint64_t state_version() const noexcept { return version_; }
    const std::vector<std::pair<Operation, Decision>>& log() const noexcept { return log_; }

    // Not thread-safe; callers serialize operations on one session.
    Decision apply(const Operation& op);

private:
    const AppModel* model_;
    TenantCustomization td_;
    std::uint64_t version_ = 0;
    std::vector<std::pair<Operation, Decision>> log_;
};

struct ReplayResult {
    TenantCustomization final_state;
    std::vector<Decision> decisions;
    std::optional<std::size_t> first_invalid;
};

ReplayResult replay(const AppModel& m, const std::vector<Operation>& ops, std::string tenant = "replay");

struct OracleViolation {
    std::string clause;  // "containment", "edge-unsatisfied", "unjustified-component"
    std::string detail;

    bool operator==(const OracleViolation&) const = default;
};

struct OracleResult {
    bool valid = true;
    std::vector<OracleViolation> violations;
};

// From-scratch validity check, independent of the incremental algorithms.
OracleResult oracle_valid(const AppModel& m, const TenantCustomization& td);

} // namespace mdcust
