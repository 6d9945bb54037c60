#include "mdcust/service.hpp"

#include "mdcust/error.hpp"
#include "mdcust/model_io.hpp"

#include <httplib.h>

#include <fstream>
#include <random>

namespace mdcust {

using nlohmann::json;

namespace {

Reply json_reply(int status, const json& body) { return Reply{status, body.dump(), {}}; }

Reply error_reply(int status, std::string_view code, const std::string& message, json extra = json::object()) {
    json body = {{"error", std::string(code)}, {"message", message}};
    for (auto& [k, v] : extra.items()) {
        body[k] = v;
    }
    return json_reply(status, body);
}

std::string new_session_id() {
    static thread_local std::random_device device;
    static const char* hex = "0123456789abcdef";
    std::string id;
    for (int word = 0; word < 4; ++word) {
        std::uint32_t bits = device();
        for (int i = 0; i < 8; ++i) {
            id.push_back(hex[bits & 0xF]);
            bits >>= 4;
        }
    }
    return id;
}

} // namespace

ServiceState::SessionRecord::SessionRecord(std::string id_, std::shared_ptr<const AppModel> model_,
                                           TenantCustomization initial)
    : id(std::move(id_)),
      model(std::move(model_)),
      session(*model, std::move(initial)),
      created(std::chrono::system_clock::now()),
      updated(created) {}

ServiceState::ServiceState(ServiceOptions options) : options_(std::move(options)) {
    if (options_.snapshot_dir) {
        std::filesystem::create_directories(*options_.snapshot_dir);
    }
}

std::shared_ptr<const AppModel> ServiceState::find_model(const std::string& id) const {
    std::shared_lock lock(models_mutex_);
    auto it = models_.find(id);
    return it == models_.end() ? nullptr : it->second;
}

std::shared_ptr<ServiceState::SessionRecord> ServiceState::find_session(const std::string& id) const {
    std::shared_lock lock(sessions_mutex_);
    auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
}

std::size_t ServiceState::session_count() const {
    std::shared_lock lock(sessions_mutex_);
    return sessions_.size();
}

// ---------------------------------------------------------------------------
// Models

Reply ServiceState::load_model(const std::string& body) {
    std::shared_ptr<const AppModel> model;
    try {
        model = std::make_shared<const AppModel>(mdcust::load_model(body));
    } catch (const ModelInvalidError& e) {
        return error_reply(422, "ModelInvalid", e.what(), {{"report", report_to_json(e.report())}});
    } catch (const Error& e) {
        return error_reply(400, to_string(e.code()), e.what());
    }
    {
        std::unique_lock lock(models_mutex_);
        auto [it, fresh] = models_.emplace(model->id, model);
        if (!fresh && !(*it->second == *model)) {
            return error_reply(409, "ModelExists", "a different model with id '" + model->id + "' is loaded");
        }
    }
    std::size_t concerns = 0;
    for (const auto& [id, c] : model->concerns) {
        concerns += c.is_none ? 0 : 1;
    }
    return json_reply(201, {{"id", model->id},
                            {"revision", model->revision},
                            {"components", model->components.size()},
                            {"concerns", concerns}});
}

Reply ServiceState::get_model(const std::string& model_id) const {
    auto model = find_model(model_id);
    if (!model) {
        return error_reply(404, "UnknownModel", "unknown model '" + model_id + "'");
    }
    return Reply{200, save_model(*model), {}};
}

Reply ServiceState::guidance(const std::string& model_id, const std::string& concern_id,
                             const std::optional<std::string>& target) const {
    auto model = find_model(model_id);
    if (!model) {
        return error_reply(404, "UnknownModel", "unknown model '" + model_id + "'");
    }
    try {
        return json_reply(200, guidance_to_json(concern_guidance(*model, concern_id, target)));
    } catch (const Error& e) {
        return error_reply(404, to_string(e.code()), e.what());
    }
}

// ---------------------------------------------------------------------------
// Sessions

Reply ServiceState::create_session(const std::string& model_id, const std::string& body,
                                   const std::optional<std::string>& tenant) {
    auto model = find_model(model_id);
    if (!model) {
        return error_reply(404, "UnknownModel", "unknown model '" + model_id + "'");
    }
    const std::string id = new_session_id();
    TenantCustomization initial = empty_customization(*model, tenant.value_or(id));
    if (body.find_first_not_of(" \t\r\n") != std::string::npos) {
        try {
            initial = load_customization(body, *model);
        } catch (const CustomizationInvalidError& e) {
            return error_reply(422, "CustomizationInvalid", e.what(),
                               {{"violations", violations_to_json(e.violations())}});
        } catch (const Error& e) {
            return error_reply(e.code() == Errc::RevisionMismatch ? 409 : 400, to_string(e.code()), e.what());
        }
    }
    auto record = std::make_shared<SessionRecord>(id, model, std::move(initial));
    {
        std::unique_lock lock(sessions_mutex_);
        if (sessions_.size() >= options_.max_sessions) {
            return error_reply(429, "TooManySessions",
                               "session limit of " + std::to_string(options_.max_sessions) + " reached");
        }
        sessions_.emplace(id, record);
    }
    return json_reply(201, {{"session", id}, {"model", model->id}, {"state_version", 0}});
}

Reply ServiceState::get_state(const std::string& session_id) const {
    auto record = find_session(session_id);
    if (!record) {
        return error_reply(404, "UnknownSession", "unknown session '" + session_id + "'");
    }
    std::lock_guard lock(record->mutex);
    Reply r{200, save_customization(record->session.customization()), {}};
    r.headers["X-State-Version"] = std::to_string(record->session.state_version());
    return r;
}

Reply ServiceState::apply_op(const std::string& session_id, const std::string& body) {
    auto record = find_session(session_id);
    if (!record) {
        return error_reply(404, "UnknownSession", "unknown session '" + session_id + "'");
    }
    Operation op;
    try {
        op = operation_from_json(parse_json(body));
    } catch (const Error& e) {
        return error_reply(400, to_string(e.code()), e.what());
    }
    if (op.revision && *op.revision != record->model->revision) {
        return error_reply(409, "RevisionMismatch",
                           "op targets revision '" + *op.revision + "', session model is at '" +
                               record->model->revision + "'");
    }
    std::lock_guard lock(record->mutex);
    const Decision d = record->session.apply(op);
    record->updated = std::chrono::system_clock::now();
    if (options_.snapshot_dir) {
        append_snapshot(*record);
    }
    return Reply{200, decision_line(d), {}};
}

Reply ServiceState::delete_session(const std::string& session_id) {
    std::unique_lock lock(sessions_mutex_);
    if (sessions_.erase(session_id) == 0) {
        return error_reply(404, "UnknownSession", "unknown session '" + session_id + "'");
    }
    return Reply{204, "", {}};
}

// One line per applied op: the state version and the customization document.
void ServiceState::append_snapshot(const SessionRecord& record) const {
    const auto path = *options_.snapshot_dir / (record.id + ".jsonl");
    std::ofstream out(path, std::ios::app);
    out << json{{"state_version", record.session.state_version()},
                {"customization", json::parse(save_customization(record.session.customization()))}}
               .dump()
        << '\n';
}

// ---------------------------------------------------------------------------
// HTTP binding

namespace {

void send(httplib::Response& res, const Reply& r) {
    res.status = r.status;
    for (const auto& [k, v] : r.headers) {
        res.set_header(k, v);
    }
    if (!r.body.empty()) {
        res.set_content(r.body, "application/json");
    }
}

} // namespace

HttpServer::HttpServer(ServiceOptions options)
    : state_(std::move(options)), server_(std::make_unique<httplib::Server>()) {
    const int workers = state_.options().worker_threads > 0
                            ? state_.options().worker_threads
                            : static_cast<int>(std::max(4u, std::thread::hardware_concurrency()));
    server_->new_task_queue = [workers] { return new httplib::ThreadPool(static_cast<size_t>(workers)); };
    // httplib defaults to SO_REUSEPORT, which lets a second server share a
    // busy port. Plain SO_REUSEADDR keeps restarts quick and still fails then.
    server_->set_socket_options([](socket_t sock) {
        int yes = 1;
        setsockopt(sock, SOL_SOCKET, SO_REUSEADDR, reinterpret_cast<const void*>(&yes), sizeof(yes));
    });

    auto& s = *server_;
    s.Post("/v1/models", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, state_.load_model(req.body));
    });
    s.Get(R"(/v1/models/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, state_.get_model(req.matches[1]));
    });
    s.Get(R"(/v1/models/([^/]+)/concerns/([^/]+)/paths)", [this](const httplib::Request& req, httplib::Response& res) {
        std::optional<std::string> target;
        if (req.has_param("target")) {
            target = req.get_param_value("target");
        }
        send(res, state_.guidance(req.matches[1], req.matches[2], target));
    });
    s.Post(R"(/v1/models/([^/]+)/sessions)", [this](const httplib::Request& req, httplib::Response& res) {
        std::optional<std::string> tenant;
        if (req.has_param("tenant")) {
            tenant = req.get_param_value("tenant");
        }
        send(res, state_.create_session(req.matches[1], req.body, tenant));
    });
    s.Get(R"(/v1/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, state_.get_state(req.matches[1]));
    });
    s.Delete(R"(/v1/sessions/([^/]+))", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, state_.delete_session(req.matches[1]));
    });
    s.Post(R"(/v1/sessions/([^/]+)/ops)", [this](const httplib::Request& req, httplib::Response& res) {
        send(res, state_.apply_op(req.matches[1], req.body));
    });
}

HttpServer::~HttpServer() { stop(); }

bool HttpServer::bind() {
    const auto& o = state_.options();
    if (o.port == 0) {
        port_ = server_->bind_to_any_port(o.host);
    } else {
        port_ = server_->bind_to_port(o.host, o.port) ? o.port : -1;
    }
    return port_ > 0;
}

void HttpServer::serve() { server_->listen_after_bind(); }

void HttpServer::start() {
    thread_ = std::thread([this] { serve(); });
    server_->wait_until_ready();
}

void HttpServer::stop() {
    if (server_) {
        server_->stop();
    }
    if (thread_.joinable()) {
        thread_.join();
    }
}

} // namespace mdcust
