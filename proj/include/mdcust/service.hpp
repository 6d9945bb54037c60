#pragma once

// HTTP session service. ServiceState holds the in-memory model and session
// store and answers requests as (status, body) pairs; HttpServer binds it to
// cpp-httplib routes:
//
//   POST /v1/models                               load a model document
//   GET  /v1/models/{id}                          canonical model document
//   GET  /v1/models/{id}/concerns/{cid}/paths     guidance (?target=x)
//   POST /v1/models/{id}/sessions                 create a session
//   GET  /v1/sessions/{id}                        customization document
//   POST /v1/sessions/{id}/ops                    apply add/delete
//   DELETE /v1/sessions/{id}                      drop a session

#include "mdcust/engine.hpp"
#include "mdcust/model.hpp"

#include <chrono>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>
#include <thread>

namespace httplib {
class Server;
}

namespace mdcust {

struct ServiceOptions {
    std::string host = "127.0.0.1";
    int port = 8080;  // 0 picks a free port
    std::optional<std::filesystem::path> snapshot_dir;
    std::size_t max_sessions = 10000;
    int worker_threads = 0;  // 0 uses the hardware concurrency
};

struct Reply {
    int status = 200;
    std::string body;
    std::map<std::string, std::string> headers;
};

class ServiceState {
public:
    explicit ServiceState(ServiceOptions options = {});

    Reply load_model(const std::string& body);
    Reply get_model(const std::string& model_id) const;
    Reply guidance(const std::string& model_id, const std::string& concern_id,
                   const std::optional<std::string>& target) const;
    Reply create_session(const std::string& model_id, const std::string& body,
                         const std::optional<std::string>& tenant = std::nullopt);
    Reply get_state(const std::string& session_id) const;
    Reply apply_op(const std::string& session_id, const std::string& body);
    Reply delete_session(const std::string& session_id);

    std::size_t session_count() const;
    const ServiceOptions& options() const noexcept { return options_; }

private:
    struct SessionRecord {
        SessionRecord(std::string id, std::shared_ptr<const AppModel> model, TenantCustomization initial);

        const std::string id;
        const std::shared_ptr<const AppModel> model;
        mutable std::mutex mutex;  // serializes operations on this session
        Session session;
        std::chrono::system_clock::time_point created;
        std::chrono::system_clock::time_point updated;
    };

    std::shared_ptr<const AppModel> find_model(const std::string& id) const;
    std::shared_ptr<SessionRecord> find_session(const std::string& id) const;
    void append_snapshot(const SessionRecord& record) const;

    ServiceOptions options_;
    mutable std::shared_mutex models_mutex_;
    std::map<std::string, std::shared_ptr<const AppModel>> models_;
    mutable std::shared_mutex sessions_mutex_;
    std::map<std::string, std::shared_ptr<SessionRecord>> sessions_;
};

class HttpServer {
public:
    explicit HttpServer(ServiceOptions options = {});
    ~HttpServer();

    HttpServer(const HttpServer&) = delete;
    HttpServer& operator=(const HttpServer&) = delete;

    // Returns false when the address cannot be bound.
    bool bind();
    int port() const noexcept { return port_; }

    void serve();  // blocks until stop()
    void start();  // serve() on a background thread
    void stop();

    ServiceState& state() noexcept { return state_; }

private:
    ServiceState state_;
    std::unique_ptr<httplib::Server> server_;
    std::thread thread_;
    int port_ = -1;
};

} // namespace mdcust
