#pragma once

// Multi-dimensional customization model: components offered at customization
// points, concerns (metagraphs of "required by" edges between components),
// dimensions of disjoint independent concerns, and per-tenant selections.

#include "mdcust/metagraph.hpp"

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace mdcust {

using ConcernId = std::string;
using DimensionId = std::string;
using PointId = std::string;

// Reserved invertex token of the literal AND-vertex encoding. Never a
// component id.
inline constexpr std::string_view kAndMarker = "and";

struct Component {
    ElementId id;
    PointId point;
    std::string label;
    std::optional<std::string> description;

    bool operator==(const Component&) const = default;
};

struct CustomizationPoint {
    PointId id;
    std::string name;
    ElementSet components;

    bool operator==(const CustomizationPoint&) const = default;
};

enum class RequirementMode { And, Or };

std::string_view to_string(RequirementMode mode) noexcept;

// Invertex components are required by the outvertex components.
struct RequirementEdge {
    Edge edge;
    RequirementMode mode = RequirementMode::Or;

    bool operator==(const RequirementEdge&) const = default;
};

struct Concern {
    ConcernId id;
    std::string name;
    ElementSet components;
    std::map<EdgeId, RequirementEdge> edges;
    bool is_none = false;

    bool operator==(const Concern&) const = default;
};

struct Dimension {
    DimensionId id;
    std::string name;
    std::vector<ConcernId> concerns;  // excludes the None concern
    std::optional<ConcernId> none_concern;

    bool operator==(const Dimension&) const = default;
};

// Plain value; validate_model reports whether the invariants hold. Models
// handed to the engine or the service come from load_model or
// generate_model and are always valid.
struct AppModel {
    std::string id;
    std::string revision;
    std::map<PointId, CustomizationPoint> customization_points;
    std::map<ElementId, Component> components;
    std::map<DimensionId, Dimension> dimensions;
    std::map<ConcernId, Concern> concerns;

    ElementSet component_ids() const;
    const Concern& concern(const ConcernId& id) const;        // Error{UnknownConcern}
    const Dimension& dimension(const DimensionId& id) const;  // Error{UnknownDimension}
    // The first dimension listing the concern, if any.
    std::optional<DimensionId> dimension_of(const ConcernId& id) const;

    bool operator==(const AppModel&) const = default;
};

ConcernId none_concern_id(const DimensionId& dimension);

// ---------------------------------------------------------------------------
// Well-formedness

enum class Violation {
    OverlappingConcerns,
    UncoveredComponent,
    DependentConcern,
    ConcernInMultipleDimensions,
    DanglingEdgeReference,
};

std::string_view to_string(Violation v) noexcept;

struct ViolationEntry {
    Violation code;
    std::string location;
    std::string detail;

    bool operator==(const ViolationEntry&) const = default;
    auto operator<=>(const ViolationEntry&) const = default;
};

using WellFormednessReport = std::vector<ViolationEntry>;

// Sorted, duplicate-free list of violations.
WellFormednessReport validate_model(const AppModel& m);

// Adds an edgeless None concern to every dimension that lacks one, holding
// the components no other concern of that dimension addresses.
AppModel derive_none_concerns(AppModel m);

Metagraph concern_metagraph(const AppModel& m, const ConcernId& id);
// <all components, union of the dimension's concern edges>
Metagraph dimension_metagraph(const AppModel& m, const DimensionId& id);
TripleMatrix dimension_adjacency(const AppModel& m, const DimensionId& id);
Metagraph app_metagraph(const AppModel& m);

struct GuidanceEntry {
    ElementId source;
    ElementId target;
    ElementSet coinput;
    ElementSet cooutput;
    EdgePath path;

    bool operator==(const GuidanceEntry&) const = default;
};

// Closure paths of a concern, optionally restricted to one target column,
// ordered by (path length, source, path). Throws Error{UnknownConcern |
// UnknownElement}.
std::vector<GuidanceEntry> concern_guidance(const AppModel& m, const ConcernId& concern,
                                            const std::optional<ElementId>& target = std::nullopt);

// ---------------------------------------------------------------------------
// Tenant customization

struct ConcernSelection {
    ElementSet components;
    EdgeIdSet edges;

    bool empty() const { return components.empty() && edges.empty(); }
    bool operator==(const ConcernSelection&) const = default;
};

struct TenantCustomization {
    std::string tenant;
    std::string model;
    std::string revision;
    // Empty selections are never stored.
    std::map<ConcernId, ConcernSelection> selections;

    ElementSet selected_components() const;  // X_td
    EdgeIdSet recorded_edges() const;         // E_td
    // TC_n: selected components grouped by customization point.
    std::map<PointId, ElementSet> by_point(const AppModel& m) const;

    bool operator==(const TenantCustomization&) const = default;
};

TenantCustomization empty_customization(const AppModel& m, std::string tenant);

} // namespace mdcust
