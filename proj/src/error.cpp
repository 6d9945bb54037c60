#include "mdcust/error.hpp"

namespace mdcust {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
    case Errc::EmptyEdge: return "EmptyEdge";
    case Errc::UnknownElement: return "UnknownElement";
    case Errc::DuplicateEdgeId: return "DuplicateEdgeId";
    case Errc::NotInVertex: return "NotInVertex";
    case Errc::UnknownEdge: return "UnknownEdge";
    case Errc::DomainMismatch: return "DomainMismatch";
    case Errc::UnknownDimension: return "UnknownDimension";
    case Errc::UnknownConcern: return "UnknownConcern";
    case Errc::UnknownComponent: return "UnknownComponent";
    case Errc::ParseError: return "ParseError";
    case Errc::SchemaError: return "SchemaError";
    case Errc::ModelInvalid: return "ModelInvalid";
    case Errc::CustomizationInvalid: return "CustomizationInvalid";
    case Errc::RevisionMismatch: return "RevisionMismatch";
    case Errc::InfeasibleParams: return "InfeasibleParams";
    }
    return "Unknown";
}

} // namespace mdcust
