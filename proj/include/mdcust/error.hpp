#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdcust {

enum class Errc {
    // metagraph construction and queries
    EmptyEdge,
    UnknownElement,
    DuplicateEdgeId,
    NotInVertex,
    UnknownEdge,
    DomainMismatch,
    // model lookups
    UnknownDimension,
    UnknownConcern,
    UnknownComponent,
    // documents
    ParseError,
    SchemaError,
    ModelInvalid,
    CustomizationInvalid,
    RevisionMismatch,
    InfeasibleParams,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

} // namespace mdcust
