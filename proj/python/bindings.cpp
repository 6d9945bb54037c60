// Python bindings. Documents cross the boundary as JSON strings in the same
// canonical format the CLI and the service use; matrices and decisions come
// back as plain dicts and lists.

#include "mdcust/engine.hpp"
#include "mdcust/error.hpp"
#include "mdcust/generator.hpp"
#include "mdcust/metagraph.hpp"
#include "mdcust/model.hpp"
#include "mdcust/model_io.hpp"

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace mdcust;

namespace {

py::list sorted_list(const ElementSet& s) {
    py::list out;
    for (const auto& x : s) out.append(x);
    return out;
}

py::list matrix_to_list(const TripleMatrix& m) {
    py::list out;
    for (const auto& [key, triples] : m.cells()) {
        for (const auto& t : triples) {
            py::dict d;
            d["source"] = key.first;
            d["target"] = key.second;
            d["coinput"] = sorted_list(t.coinput);
            d["cooutput"] = sorted_list(t.cooutput);
            d["path"] = t.path;
            out.append(std::move(d));
        }
    }
    return out;
}

py::object from_json(const nlohmann::json& j) { return py::module_::import("json").attr("loads")(j.dump()); }

// Sequences rather than sets so that plain Python lists are accepted.
using Ids = std::vector<std::string>;
using EdgeSpec = std::tuple<EdgeId, Ids, Ids>;

Metagraph metagraph_from(const Ids& elements, const std::vector<EdgeSpec>& edges) {
    std::vector<Edge> es;
    for (const auto& [id, in, out] : edges) {
        es.push_back(Edge{id, ElementSet(in.begin(), in.end()), ElementSet(out.begin(), out.end())});
    }
    return Metagraph(ElementSet(elements.begin(), elements.end()), es);
}

Operation op_from(const std::string& kind, const std::string& component, const std::optional<std::string>& concern) {
    nlohmann::json j = {{"op", kind}, {"component", component}};
    if (concern) j["concern"] = *concern;
    return operation_from_json(j);
}

class PySession {
public:
    PySession(const std::string& model_json, const std::string& tenant, const std::optional<std::string>& state)
        : model_(load_model(model_json)),
          session_(model_, state ? load_customization(*state, model_) : empty_customization(model_, tenant)) {}

    py::object add(const std::string& component, const std::string& concern) {
        return from_json(decision_to_json(session_.apply(op_from("add", component, concern))));
    }
    py::object remove(const std::string& component) {
        return from_json(decision_to_json(session_.apply(op_from("delete", component, std::nullopt))));
    }
    std::string state() const { return save_customization(session_.customization()); }
    std::uint64_t version() const { return session_.state_version(); }
    std::vector<std::string> selected() const {
        const ElementSet s = session_.customization().selected_components();
        return {s.begin(), s.end()};
    }

private:
    AppModel model_;
    Session session_;
};

} // namespace

PYBIND11_MODULE(_mdcust, m) {
    m.doc() = "Multi-dimensional customization engine";

    static py::exception<Error> error(m, "Error", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) std::rethrow_exception(p);
        } catch (const Error& e) {
            py::set_error(error, (std::string(to_string(e.code())) + ": " + e.what()).c_str());
        }
    });

    m.def(
        "adjacency",
        [](const Ids& elements, const std::vector<EdgeSpec>& edges) {
            return matrix_to_list(build_adjacency(metagraph_from(elements, edges)));
        },
        py::arg("elements"), py::arg("edges"),
        "Adjacency triples of a metagraph given as elements and (id, invertex, outvertex) edges.");

    m.def(
        "closure",
        [](const Ids& elements, const std::vector<EdgeSpec>& edges, std::optional<std::size_t> max_path_len) {
            const ClosureResult c = closure(metagraph_from(elements, edges), max_path_len);
            py::dict d;
            d["triples"] = matrix_to_list(c.matrix);
            d["truncated"] = c.truncated;
            return d;
        },
        py::arg("elements"), py::arg("edges"), py::arg("max_path_len") = py::none());

    m.def(
        "check_model",
        [](const std::string& model_json) { return from_json(report_to_json(validate_model(parse_model(model_json)))); },
        py::arg("model_json"), "Well-formedness report; an empty list means the model is valid.");

    m.def(
        "normalize_model", [](const std::string& model_json) { return save_model(load_model(model_json)); },
        py::arg("model_json"));

    m.def(
        "guidance",
        [](const std::string& model_json, const std::string& concern, const std::optional<std::string>& target) {
            return from_json(guidance_to_json(concern_guidance(load_model(model_json), concern, target)));
        },
        py::arg("model_json"), py::arg("concern"), py::arg("target") = py::none());

    m.def(
        "replay",
        [](const std::string& model_json, const std::string& ops_json, const std::string& tenant) {
            const AppModel model = load_model(model_json);
            const ReplayResult r = replay(model, load_operations(ops_json), tenant);
            py::list decisions;
            for (const auto& d : r.decisions) decisions.append(from_json(decision_to_json(d)));
            py::dict out;
            out["decisions"] = decisions;
            out["customization"] = save_customization(r.final_state);
            out["first_invalid"] = r.first_invalid ? py::cast(*r.first_invalid) : py::none();
            return out;
        },
        py::arg("model_json"), py::arg("ops_json"), py::arg("tenant") = "replay");

    m.def(
        "oracle_valid",
        [](const std::string& model_json, const std::string& customization_json) {
            const AppModel model = load_model(model_json);
            try {
                load_customization(customization_json, model);
            } catch (const CustomizationInvalidError& e) {
                return from_json(violations_to_json(e.violations()));
            }
            return from_json(nlohmann::json::array());
        },
        py::arg("model_json"), py::arg("customization_json"),
        "Violations of a customization document; an empty list means it is valid.");

    m.def(
        "generate_model",
        [](std::size_t components, std::size_t customization_points, std::size_t dimensions,
           std::size_t concerns_per_dimension, double edge_density, double and_ratio, std::size_t max_invertex,
           std::uint64_t seed) {
            return save_model(generate_model(GeneratorParams{components, customization_points, dimensions,
                                                             concerns_per_dimension, edge_density, and_ratio,
                                                             max_invertex, seed}));
        },
        py::arg("components") = 500, py::arg("customization_points") = 50, py::arg("dimensions") = 3,
        py::arg("concerns_per_dimension") = 5, py::arg("edge_density") = 0.5, py::arg("and_ratio") = 0.3,
        py::arg("max_invertex") = 3, py::arg("seed") = 1);

    py::class_<PySession>(m, "Session")
        .def(py::init<const std::string&, const std::string&, const std::optional<std::string>&>(),
             py::arg("model_json"), py::arg("tenant") = "local", py::arg("state") = py::none())
        .def("add", &PySession::add, py::arg("component"), py::arg("concern"))
        .def("delete", &PySession::remove, py::arg("component"))
        .def("state", &PySession::state, "Canonical customization document.")
        .def_property_readonly("state_version", &PySession::version)
        .def_property_readonly("selected", &PySession::selected);
}
