#include "mdcust/model_io.hpp"

#include <algorithm>
#include <initializer_list>
#include <set>

namespace mdcust {

using nlohmann::json;

namespace {

std::string describe(const WellFormednessReport& report) {
    std::string msg = "model is not well-formed (" + std::to_string(report.size()) + " violation(s))";
    if (!report.empty()) {
        msg += ": " + std::string(to_string(report.front().code)) + " at " + report.front().location;
    }
    return msg;
}

[[noreturn]] void schema_error(const std::string& where, const std::string& what) {
    throw Error(Errc::SchemaError, where + ": " + what);
}

// Rejects unknown fields and missing required ones.
void expect_fields(const json& j, const std::string& where, std::initializer_list<const char*> required,
                   std::initializer_list<const char*> optional = {}) {
    if (!j.is_object()) {
        schema_error(where, "expected an object");
    }
    for (const char* key : required) {
        if (!j.contains(key)) {
            schema_error(where, std::string("missing required field '") + key + "'");
        }
    }
    for (const auto& [key, value] : j.items()) {
        const bool known = std::any_of(required.begin(), required.end(), [&](const char* k) { return key == k; }) ||
                           std::any_of(optional.begin(), optional.end(), [&](const char* k) { return key == k; });
        if (!known) {
            schema_error(where, "unknown field '" + key + "'");
        }
    }
}

std::string get_string(const json& j, const char* key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_string()) {
        schema_error(where, std::string("field '") + key + "' must be a string");
    }
    return v.get<std::string>();
}

const json& get_array(const json& j, const char* key, const std::string& where) {
    const json& v = j.at(key);
    if (!v.is_array()) {
        schema_error(where, std::string("field '") + key + "' must be an array");
    }
    return v;
}

std::vector<std::string> get_string_list(const json& j, const char* key, const std::string& where) {
    std::vector<std::string> out;
    for (const auto& v : get_array(j, key, where)) {
        if (!v.is_string()) {
            schema_error(where, std::string("field '") + key + "' must hold strings");
        }
        out.push_back(v.get<std::string>());
    }
    return out;
}

void check_format_version(const json& j, const std::string& where) {
    const json& v = j.at("format_version");
    if (!v.is_number_integer() || v.get<long long>() != kFormatVersion) {
        schema_error(where, "unsupported format_version (expected 1)");
    }
}

json sorted_ids(const std::set<std::string>& ids) {
    json arr = json::array();
    for (const auto& id : ids) {
        arr.push_back(id);
    }
    return arr;
}

std::string dump_canonical(const json& j) { return j.dump(2) + "\n"; }

} // namespace

ModelInvalidError::ModelInvalidError(WellFormednessReport report)
    : Error(Errc::ModelInvalid, describe(report)), report_(std::move(report)) {}

CustomizationInvalidError::CustomizationInvalidError(std::vector<OracleViolation> violations)
    : Error(Errc::CustomizationInvalid,
            "customization is not valid" +
                (violations.empty() ? std::string() : ": " + violations.front().clause + " (" + violations.front().detail + ")")),
      violations_(std::move(violations)) {}

json parse_json(std::string_view bytes) {
    try {
        return json::parse(bytes.begin(), bytes.end());
    } catch (const json::parse_error& e) {
        throw Error(Errc::ParseError, "byte " + std::to_string(e.byte) + ": " + e.what());
    }
}

// ---------------------------------------------------------------------------
// Model documents

AppModel parse_model(std::string_view bytes) {
    const json doc = parse_json(bytes);
    expect_fields(doc, "model", {"format_version", "id", "revision", "customization_points", "components", "dimensions"});
    check_format_version(doc, "model");

    AppModel m;
    m.id = get_string(doc, "id", "model");
    m.revision = get_string(doc, "revision", "model");
    if (m.id.empty()) {
        schema_error("model", "id must be non-empty");
    }

    for (const auto& jc : get_array(doc, "components", "model")) {
        expect_fields(jc, "component", {"id", "point", "label"}, {"description"});
        Component c;
        c.id = get_string(jc, "id", "component");
        const std::string where = "component '" + c.id + "'";
        c.point = get_string(jc, "point", where);
        c.label = get_string(jc, "label", where);
        if (jc.contains("description")) {
            c.description = get_string(jc, "description", where);
        }
        if (c.id.empty()) {
            schema_error("component", "id must be non-empty");
        }
        if (c.id == kAndMarker) {
            schema_error(where, "'and' is reserved and cannot be a component id");
        }
        if (m.components.contains(c.id)) {
            schema_error(where, "duplicate component id");
        }
        m.components.emplace(c.id, std::move(c));
    }

    for (const auto& jp : get_array(doc, "customization_points", "model")) {
        expect_fields(jp, "customization point", {"id", "name", "components"});
        CustomizationPoint p;
        p.id = get_string(jp, "id", "customization point");
        const std::string where = "customization point '" + p.id + "'";
        p.name = get_string(jp, "name", where);
        for (auto& x : get_string_list(jp, "components", where)) {
            auto it = m.components.find(x);
            if (it == m.components.end()) {
                schema_error(where, "unknown component '" + x + "'");
            }
            if (it->second.point != p.id) {
                schema_error(where, "component '" + x + "' declares point '" + it->second.point + "'");
            }
            p.components.insert(std::move(x));
        }
        if (p.id.empty() || m.customization_points.contains(p.id)) {
            schema_error(where, "missing or duplicate customization point id");
        }
        m.customization_points.emplace(p.id, std::move(p));
    }
    for (const auto& [id, c] : m.components) {
        auto it = m.customization_points.find(c.point);
        if (it == m.customization_points.end()) {
            schema_error("component '" + id + "'", "unknown customization point '" + c.point + "'");
        }
        if (!it->second.components.contains(id)) {
            schema_error("customization point '" + c.point + "'", "does not list component '" + id + "'");
        }
    }

    for (const auto& jd : get_array(doc, "dimensions", "model")) {
        expect_fields(jd, "dimension", {"id", "name", "concerns"});
        Dimension d;
        d.id = get_string(jd, "id", "dimension");
        const std::string dwhere = "dimension '" + d.id + "'";
        d.name = get_string(jd, "name", dwhere);
        if (d.id.empty() || m.dimensions.contains(d.id)) {
            schema_error(dwhere, "missing or duplicate dimension id");
        }
        for (const auto& jcn : get_array(jd, "concerns", dwhere)) {
            expect_fields(jcn, "concern", {"id", "name", "components", "edges"});
            Concern cn;
            cn.id = get_string(jcn, "id", "concern");
            const std::string cwhere = "concern '" + cn.id + "'";
            cn.name = get_string(jcn, "name", cwhere);
            if (cn.id.empty()) {
                schema_error(cwhere, "id must be non-empty");
            }
            if (std::find(d.concerns.begin(), d.concerns.end(), cn.id) != d.concerns.end()) {
                schema_error(cwhere, "listed twice in " + dwhere);
            }
            if (cn.id == none_concern_id(d.id)) {
                schema_error(cwhere, "id is reserved for the None concern");
            }
            for (auto& x : get_string_list(jcn, "components", cwhere)) {
                if (x == kAndMarker) {
                    continue;
                }
                if (!m.components.contains(x)) {
                    schema_error(cwhere, "unknown component '" + x + "'");
                }
                cn.components.insert(std::move(x));
            }
            for (const auto& je : get_array(jcn, "edges", cwhere)) {
                expect_fields(je, "edge", {"id", "invertex", "outvertex"}, {"mode"});
                RequirementEdge re;
                re.edge.id = get_string(je, "id", cwhere + " edge");
                const std::string ewhere = cwhere + " edge '" + re.edge.id + "'";
                if (re.edge.id.empty() || cn.edges.contains(re.edge.id)) {
                    schema_error(ewhere, "missing or duplicate edge id");
                }
                if (je.contains("mode")) {
                    const std::string mode = get_string(je, "mode", ewhere);
                    if (mode == "and") {
                        re.mode = RequirementMode::And;
                    } else if (mode != "or") {
                        schema_error(ewhere, "mode must be \"and\" or \"or\"");
                    }
                }
                for (auto& x : get_string_list(je, "invertex", ewhere)) {
                    if (x == kAndMarker) {
                        re.mode = RequirementMode::And;
                        continue;
                    }
                    if (!m.components.contains(x)) {
                        schema_error(ewhere, "unknown component '" + x + "'");
                    }
                    re.edge.invertex.insert(std::move(x));
                }
                for (auto& x : get_string_list(je, "outvertex", ewhere)) {
                    if (x == kAndMarker) {
                        schema_error(ewhere, "'and' marker is only allowed in an invertex");
                    }
                    if (!m.components.contains(x)) {
                        schema_error(ewhere, "unknown component '" + x + "'");
                    }
                    re.edge.outvertex.insert(std::move(x));
                }
                cn.edges.emplace(re.edge.id, std::move(re));
            }
            d.concerns.push_back(cn.id);
            // A concern id reused by a second dimension keeps its first body;
            // validate_model reports the double listing.
            m.concerns.emplace(cn.id, std::move(cn));
        }
        std::sort(d.concerns.begin(), d.concerns.end());
        m.dimensions.emplace(d.id, std::move(d));
    }
    return derive_none_concerns(std::move(m));
}

AppModel load_model(std::string_view bytes) {
    AppModel m = parse_model(bytes);
    if (auto report = validate_model(m); !report.empty()) {
        throw ModelInvalidError(std::move(report));
    }
    return m;
}

std::string save_model(const AppModel& m) {
    json doc;
    doc["format_version"] = kFormatVersion;
    doc["id"] = m.id;
    doc["revision"] = m.revision;

    json points = json::array();
    for (const auto& [id, p] : m.customization_points) {
        points.push_back({{"id", id}, {"name", p.name}, {"components", sorted_ids(p.components)}});
    }
    doc["customization_points"] = std::move(points);

    json components = json::array();
    for (const auto& [id, c] : m.components) {
        json jc = {{"id", id}, {"point", c.point}, {"label", c.label}};
        if (c.description) {
            jc["description"] = *c.description;
        }
        components.push_back(std::move(jc));
    }
    doc["components"] = std::move(components);

    json dimensions = json::array();
    for (const auto& [did, d] : m.dimensions) {
        std::vector<ConcernId> ids = d.concerns;
        std::sort(ids.begin(), ids.end());
        json concerns = json::array();
        for (const auto& cid : ids) {
            const Concern& cn = m.concern(cid);
            json edges = json::array();
            for (const auto& [eid, re] : cn.edges) {
                edges.push_back({{"id", eid},
                                 {"invertex", sorted_ids(re.edge.invertex)},
                                 {"outvertex", sorted_ids(re.edge.outvertex)},
                                 {"mode", std::string(to_string(re.mode))}});
            }
            concerns.push_back({{"id", cid},
                                {"name", cn.name},
                                {"components", sorted_ids(cn.components)},
                                {"edges", std::move(edges)}});
        }
        dimensions.push_back({{"id", did}, {"name", d.name}, {"concerns", std::move(concerns)}});
    }
    doc["dimensions"] = std::move(dimensions);
    return dump_canonical(doc);
}

// ---------------------------------------------------------------------------
// Customization documents

TenantCustomization load_customization(std::string_view bytes, const AppModel& m) {
    const json doc = parse_json(bytes);
    expect_fields(doc, "customization", {"format_version", "model", "revision", "tenant", "concerns"});
    check_format_version(doc, "customization");

    TenantCustomization td;
    td.model = get_string(doc, "model", "customization");
    td.revision = get_string(doc, "revision", "customization");
    td.tenant = get_string(doc, "tenant", "customization");
    if (td.model != m.id) {
        throw Error(Errc::RevisionMismatch, "customization targets model '" + td.model + "', not '" + m.id + "'");
    }
    if (td.revision != m.revision) {
        throw Error(Errc::RevisionMismatch,
                    "customization was built against revision '" + td.revision + "', model is at '" + m.revision + "'");
    }
    for (const auto& jc : get_array(doc, "concerns", "customization")) {
        expect_fields(jc, "customization concern", {"id", "components", "edges"});
        const std::string cid = get_string(jc, "id", "customization concern");
        const std::string where = "customization concern '" + cid + "'";
        if (td.selections.contains(cid)) {
            schema_error(where, "listed twice");
        }
        ConcernSelection sel;
        for (auto& x : get_string_list(jc, "components", where)) {
            sel.components.insert(std::move(x));
        }
        for (auto& e : get_string_list(jc, "edges", where)) {
            sel.edges.insert(std::move(e));
        }
        if (!sel.empty()) {
            td.selections.emplace(cid, std::move(sel));
        }
    }
    if (auto verdict = oracle_valid(m, td); !verdict.valid) {
        throw CustomizationInvalidError(std::move(verdict.violations));
    }
    return td;
}

std::string save_customization(const TenantCustomization& td) {
    json concerns = json::array();
    for (const auto& [cid, sel] : td.selections) {
        if (sel.empty()) {
            continue;
        }
        concerns.push_back({{"id", cid}, {"components", sorted_ids(sel.components)}, {"edges", sorted_ids(sel.edges)}});
    }
    json doc = {{"format_version", kFormatVersion},
                {"model", td.model},
                {"revision", td.revision},
                {"tenant", td.tenant},
                {"concerns", std::move(concerns)}};
    return dump_canonical(doc);
}

// ---------------------------------------------------------------------------
// Operations and decisions

Operation operation_from_json(const json& j) {
    expect_fields(j, "op", {"op", "component"}, {"concern", "revision"});
    Operation op;
    const std::string kind = get_string(j, "op", "op");
    if (kind == "add") {
        op.kind = OpKind::Add;
    } else if (kind == "delete") {
        op.kind = OpKind::Delete;
    } else {
        schema_error("op", "\"op\" must be \"add\" or \"delete\"");
    }
    op.component = get_string(j, "component", "op");
    if (j.contains("concern")) {
        op.concern = get_string(j, "concern", "op");
    }
    if (j.contains("revision")) {
        op.revision = get_string(j, "revision", "op");
    }
    if (op.kind == OpKind::Add && !op.concern) {
        schema_error("op", "add requires \"concern\"");
    }
    return op;
}

json operation_to_json(const Operation& op) {
    json j = {{"op", std::string(to_string(op.kind))}, {"component", op.component}};
    if (op.concern) {
        j["concern"] = *op.concern;
    }
    if (op.revision) {
        j["revision"] = *op.revision;
    }
    return j;
}

std::vector<Operation> load_operations(std::string_view bytes) {
    const json doc = parse_json(bytes);
    if (!doc.is_array()) {
        schema_error("ops", "expected a JSON array of operations");
    }
    std::vector<Operation> ops;
    ops.reserve(doc.size());
    for (const auto& j : doc) {
        ops.push_back(operation_from_json(j));
    }
    return ops;
}

json decision_to_json(const Decision& d) {
    return {{"verdict", std::string(to_string(d.verdict))},
            {"reason", std::string(to_string(d.reason))},
            {"satisfied_edge", d.satisfied_edge ? json(*d.satisfied_edge) : json(nullptr)},
            {"recorded_supports", sorted_ids(d.recorded_supports)},
            {"removed_edges", sorted_ids(d.removed_edges)},
            {"state_version", d.state_version}};
}

std::string decision_line(const Decision& d) { return decision_to_json(d).dump(); }

json report_to_json(const WellFormednessReport& report) {
    json arr = json::array();
    for (const auto& v : report) {
        arr.push_back({{"code", std::string(to_string(v.code))}, {"location", v.location}, {"detail", v.detail}});
    }
    return arr;
}

json violations_to_json(const std::vector<OracleViolation>& violations) {
    json arr = json::array();
    for (const auto& v : violations) {
        arr.push_back({{"clause", v.clause}, {"detail", v.detail}});
    }
    return arr;
}

json guidance_to_json(const std::vector<GuidanceEntry>& entries) {
    json arr = json::array();
    for (const auto& e : entries) {
        json path = json::array();
        for (const auto& id : e.path) {
            path.push_back(id);
        }
        arr.push_back({{"source", e.source},
                       {"target", e.target},
                       {"coinput", sorted_ids(e.coinput)},
                       {"cooutput", sorted_ids(e.cooutput)},
                       {"path", std::move(path)}});
    }
    return arr;
}

} // namespace mdcust
