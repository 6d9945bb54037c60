#pragma once

// JSON documents (format_version 1) for models, customizations, operations
// and decisions. Saved documents are canonical: sorted keys, id-sorted
// arrays, two-space indentation and a trailing newline.

#include "mdcust/engine.hpp"
#include "mdcust/error.hpp"
#include "mdcust/model.hpp"

#include <json.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace mdcust {

inline constexpr int kFormatVersion = 1;

// Thrown for ModelInvalid; carries the well-formedness report.
class ModelInvalidError : public Error {
public:
    explicit ModelInvalidError(WellFormednessReport report);
    const WellFormednessReport& report() const noexcept { return report_; }

private:
    WellFormednessReport report_;
};

// Thrown for CustomizationInvalid; carries the oracle violations.
class CustomizationInvalidError : public Error {
public:
    explicit CustomizationInvalidError(std::vector<OracleViolation> violations);
    const std::vector<OracleViolation>& violations() const noexcept { return violations_; }

private:
    std::vector<OracleViolation> violations_;
};

// Throws Error{ParseError | SchemaError} or ModelInvalidError. Literal "and"
// invertex markers become mode=and; None concerns are derived.
AppModel load_model(std::string_view bytes);
// Same as load_model minus the well-formedness gate; for `check`.
AppModel parse_model(std::string_view bytes);
std::string save_model(const AppModel& m);

// Throws Error{ParseError | SchemaError | RevisionMismatch} or
// CustomizationInvalidError.
TenantCustomization load_customization(std::string_view bytes, const AppModel& m);
std::string save_customization(const TenantCustomization& td);

// {"op": "add"|"delete", "component": str, "concern": str?, "revision": str?}
// Throws Error{SchemaError} on a malformed op.
Operation operation_from_json(const nlohmann::json& j);
nlohmann::json operation_to_json(const Operation& op);
std::vector<Operation> load_operations(std::string_view bytes);

nlohmann::json decision_to_json(const Decision& d);
// Compact single-line form; byte-identical for equal decisions.
std::string decision_line(const Decision& d);

nlohmann::json report_to_json(const WellFormednessReport& report);
nlohmann::json violations_to_json(const std::vector<OracleViolation>& violations);
nlohmann::json guidance_to_json(const std::vector<GuidanceEntry>& entries);

// Throws Error{ParseError} with position and message.
nlohmann::json parse_json(std::string_view bytes);

} // namespace mdcust
