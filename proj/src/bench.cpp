#include "mdcust/bench.hpp"

#include "mdcust/model_io.hpp"
#include "mdcust/service.hpp"

#include <httplib.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <iterator>
#include <mutex>
#include <numeric>
#include <random>
#include <thread>

namespace mdcust {

namespace {

using Clock = std::chrono::steady_clock;

double micros_since(Clock::time_point start) {
    return std::chrono::duration<double, std::micro>(Clock::now() - start).count();
}

// Components that support a recorded edge cannot be deleted.
ElementSet supporting(const AppModel& m, const TenantCustomization& td, const ElementSet& selected) {
    ElementSet out;
    for (const auto& id : td.recorded_edges()) {
        const RequirementEdge* re = find_edge(m, id);
        if (re == nullptr) {
            continue;
        }
        const auto& w = re->edge.outvertex;
        const bool live = std::any_of(w.begin(), w.end(), [&](const ElementId& x) { return selected.contains(x); });
        if (!live) {
            continue;
        }
        for (const auto& v : re->edge.invertex) {
            if (selected.contains(v)) {
                out.insert(v);
            }
        }
    }
    return out;
}

bool satisfiable(const Concern& cn, const ElementId& x, const ElementSet& selected) {
    bool incoming = false;
    for (const auto& [id, re] : cn.edges) {
        const Edge& e = re.edge;
        if (!e.outvertex.contains(x) || e.invertex.empty()) {
            continue;
        }
        incoming = true;
        std::size_t present = 0;
        for (const auto& v : e.invertex) {
            present += selected.contains(v) ? 1 : 0;
        }
        if (re.mode == RequirementMode::And ? present == e.invertex.size() : present > 0) {
            return true;
        }
    }
    return !incoming;
}

} // namespace

std::vector<Operation> generate_workload(const AppModel& m, std::size_t ops, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto chance = [&](double p) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p; };
    auto index = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };

    std::vector<const Concern*> concerns;
    for (const auto& [id, c] : m.concerns) {
        if (!c.components.empty()) {
            concerns.push_back(&c);
        }
    }

    TenantCustomization td = empty_customization(m, "workload");
    std::vector<Operation> out;
    out.reserve(ops);
    while (out.size() < ops) {
        const ElementSet selected = td.selected_components();

        auto try_add = [&]() -> std::optional<Operation> {
            auto candidate = [&](const Concern& cn, const ElementId& x) {
                auto it = td.selections.find(cn.id);
                const bool present = it != td.selections.end() && it->second.components.contains(x);
                return !present && satisfiable(cn, x, selected);
            };
            for (int attempt = 0; attempt < 32 && !concerns.empty(); ++attempt) {
                const Concern& cn = *concerns[index(concerns.size())];
                auto it = cn.components.begin();
                std::advance(it, static_cast<std::ptrdiff_t>(index(cn.components.size())));
                if (candidate(cn, *it)) {
                    return Operation{OpKind::Add, *it, cn.id, std::nullopt};
                }
            }
            std::vector<Operation> all;
            for (const Concern* cn : concerns) {
                for (const auto& x : cn->components) {
                    if (candidate(*cn, x)) {
                        all.push_back(Operation{OpKind::Add, x, cn->id, std::nullopt});
                    }
                }
            }
            if (all.empty()) {
                return std::nullopt;
            }
            return all[index(all.size())];
        };
        auto try_delete = [&]() -> std::optional<Operation> {
            const ElementSet blocked = supporting(m, td, selected);
            std::vector<ElementId> free;
            std::set_difference(selected.begin(), selected.end(), blocked.begin(), blocked.end(),
                                std::back_inserter(free));
            if (free.empty()) {
                return std::nullopt;
            }
            return Operation{OpKind::Delete, free[index(free.size())], std::nullopt, std::nullopt};
        };

        const bool want_add = chance(0.8);
        std::optional<Operation> op = want_add ? try_add() : try_delete();
        if (!op) {
            op = want_add ? try_delete() : try_add();
        }
        if (!op) {
            // Saturated: re-add something already selected.
            const auto& [cid, sel] = *td.selections.begin();
            op = Operation{OpKind::Add, *sel.components.begin(), cid, std::nullopt};
        }
        apply(m, td, *op);
        out.push_back(std::move(*op));
    }
    return out;
}

GeneratorParams bench_params(std::size_t components, std::uint64_t seed) {
    GeneratorParams p;
    p.components = components;
    p.customization_points = std::max<std::size_t>(1, components / 10);
    p.dimensions = 3;
    p.concerns_per_dimension = 5;
    p.edge_density = 0.5;
    p.and_ratio = 0.3;
    p.max_invertex = 3;
    p.seed = seed;
    return p;
}

BenchSummary summarize(std::vector<double> latencies) {
    BenchSummary s;
    s.count = latencies.size();
    if (latencies.empty()) {
        return s;
    }
    std::sort(latencies.begin(), latencies.end());
    const std::size_t n = latencies.size();
    s.median_us = n % 2 == 1 ? latencies[n / 2] : (latencies[n / 2 - 1] + latencies[n / 2]) / 2.0;
    const auto rank = static_cast<std::size_t>(std::ceil(0.95 * static_cast<double>(n)));
    s.p95_us = latencies[std::max<std::size_t>(rank, 1) - 1];
    s.mean_us = std::accumulate(latencies.begin(), latencies.end(), 0.0) / static_cast<double>(n);
    return s;
}

namespace {

// Untimed per op: model generation plus the guidance closure of every concern.
std::pair<AppModel, double> prepare_model(std::size_t size, std::uint64_t seed) {
    const auto start = Clock::now();
    AppModel m = generate_model(bench_params(size, seed));
    for (const auto& [id, c] : m.concerns) {
        (void)closure(concern_metagraph(m, id));
    }
    return {std::move(m), micros_since(start) / 1000.0};
}

} // namespace

BenchReport bench_sizes(const std::vector<std::size_t>& sizes, std::size_t ops, std::uint64_t seed) {
    BenchReport report;
    for (std::size_t run = 0; run < sizes.size(); ++run) {
        const std::size_t size = sizes[run];
        auto [m, setup_ms] = prepare_model(size, seed + run);
        const auto stream = generate_workload(m, ops, seed * 1000003 + run);

        Session session(m, empty_customization(m, "bench"));
        std::vector<double> latencies;
        latencies.reserve(stream.size());
        for (const auto& op : stream) {
            const auto start = Clock::now();
            const Decision d = session.apply(op);
            const double us = micros_since(start);
            latencies.push_back(us);
            report.rows.push_back(BenchRow{run, size, op.kind, 1, us});
            if (!d.valid()) {
                ++report.failed;
                report.failures.push_back("size " + std::to_string(size) + ": " + std::string(to_string(op.kind)) +
                                          " " + op.component + " rejected with " + std::string(to_string(d.reason)));
            }
        }
        BenchSummary s = summarize(std::move(latencies));
        s.run = run;
        s.model_size = size;
        s.concurrency = 1;
        s.setup_ms = setup_ms;
        report.summaries.push_back(s);
    }
    return report;
}

BenchReport bench_concurrency(const std::vector<std::size_t>& levels, std::size_t ops, std::uint64_t seed,
                              std::size_t model_size) {
    BenchReport report;
    auto [model, setup_ms] = prepare_model(model_size, seed);

    ServiceOptions options;
    options.port = 0;
    std::size_t peak = 1;
    for (auto l : levels) {
        peak = std::max(peak, l);
    }
    options.worker_threads = static_cast<int>(std::max<std::size_t>(peak, 4));
    HttpServer server(options);
    if (!server.bind()) {
        report.failed = 1;
        report.failures.push_back("could not bind the in-process service");
        return report;
    }
    server.start();
    if (auto r = server.state().load_model(save_model(model)); r.status != 201) {
        report.failed = 1;
        report.failures.push_back("model upload failed: " + r.body);
        server.stop();
        return report;
    }

    std::mutex report_mutex;
    for (std::size_t run = 0; run < levels.size(); ++run) {
        const std::size_t clients = std::max<std::size_t>(levels[run], 1);
        std::vector<std::vector<Operation>> streams(clients);
        std::vector<std::vector<std::string>> expected(clients);
        for (std::size_t c = 0; c < clients; ++c) {
            const std::size_t share = ops / clients + (c < ops % clients ? 1 : 0);
            streams[c] = generate_workload(model, share, seed * 7919 + run * 131 + c);
            for (const auto& d : replay(model, streams[c]).decisions) {
                expected[c].push_back(decision_line(d));
            }
        }

        std::vector<double> latencies;
        std::vector<std::thread> threads;
        for (std::size_t c = 0; c < clients; ++c) {
            threads.emplace_back([&, c] {
                httplib::Client client("127.0.0.1", server.port());
                client.set_keep_alive(true);
                std::vector<BenchRow> rows;
                std::vector<std::string> failures;
                auto created = client.Post("/v1/models/" + model.id + "/sessions", "", "application/json");
                if (!created || created->status != 201) {
                    failures.push_back("session creation failed");
                } else {
                    const std::string sid = nlohmann::json::parse(created->body).at("session").get<std::string>();
                    for (std::size_t i = 0; i < streams[c].size(); ++i) {
                        const auto& op = streams[c][i];
                        const std::string body = operation_to_json(op).dump();
                        const auto start = Clock::now();
                        auto res = client.Post("/v1/sessions/" + sid + "/ops", body, "application/json");
                        const double us = micros_since(start);
                        rows.push_back(BenchRow{run, model_size, op.kind, clients, us});
                        if (!res || res->status != 200) {
                            failures.push_back("client " + std::to_string(c) + " op " + std::to_string(i) +
                                               ": transport failure");
                        } else if (res->body != expected[c][i]) {
                            failures.push_back("client " + std::to_string(c) + " op " + std::to_string(i) +
                                               ": response differs from serial replay");
                        }
                    }
                    client.Delete("/v1/sessions/" + sid);
                }
                std::lock_guard lock(report_mutex);
                for (const auto& r : rows) {
                    latencies.push_back(r.latency_us);
                }
                report.rows.insert(report.rows.end(), rows.begin(), rows.end());
                report.failed += failures.size();
                report.failures.insert(report.failures.end(), failures.begin(), failures.end());
            });
        }
        for (auto& t : threads) {
            t.join();
        }
        BenchSummary s = summarize(std::move(latencies));
        s.run = run;
        s.model_size = model_size;
        s.concurrency = clients;
        s.setup_ms = setup_ms;
        report.summaries.push_back(s);
    }
    server.stop();
    return report;
}

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows) {
    out << "run,model_size,op,concurrency,latency_us\n";
    out << std::fixed << std::setprecision(3);
    for (const auto& r : rows) {
        out << r.run << ',' << r.model_size << ',' << to_string(r.op) << ',' << r.concurrency << ',' << r.latency_us
            << '\n';
    }
}

void print_summary(std::ostream& out, const BenchReport& report) {
    out << std::left << std::setw(5) << "run" << std::setw(8) << "size" << std::setw(8) << "clients" << std::setw(8)
        << "ops" << std::setw(12) << "median_us" << std::setw(12) << "p95_us" << std::setw(12) << "mean_us"
        << "setup_ms\n";
    out << std::fixed << std::setprecision(2);
    for (const auto& s : report.summaries) {
        out << std::setw(5) << s.run << std::setw(8) << s.model_size << std::setw(8) << s.concurrency << std::setw(8)
            << s.count << std::setw(12) << s.median_us << std::setw(12) << s.p95_us << std::setw(12) << s.mean_us
            << s.setup_ms << '\n';
    }
    out << "failed: " << report.failed << '\n';
}

} // namespace mdcust
