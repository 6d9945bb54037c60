#include "mdcust/cli.hpp"

#include "mdcust/bench.hpp"
#include "mdcust/engine.hpp"
#include "mdcust/error.hpp"
#include "mdcust/generator.hpp"
#include "mdcust/model_io.hpp"
#include "mdcust/service.hpp"

#include <CLI11.hpp>

#include <csignal>
#include <fstream>
#include <iterator>
#include <sstream>

namespace mdcust {

namespace {

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kInputError = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(Errc::ParseError, "cannot read '" + path + "'");
    }
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_file(const std::string& path, const std::string& bytes) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw Error(Errc::ParseError, "cannot write '" + path + "'");
    }
    out << bytes;
}

std::string braces(const ElementSet& s) {
    std::string out = "{";
    for (const auto& x : s) {
        out += (out.size() > 1 ? ", " : "") + x;
    }
    return out + "}";
}

std::string angle(const EdgePath& p) {
    std::string out = "<";
    for (const auto& e : p) {
        out += (out.size() > 1 ? ", " : "") + e;
    }
    return out + ">";
}

void print_report(std::ostream& out, const WellFormednessReport& report) {
    for (const auto& v : report) {
        out << to_string(v.code) << " at " << v.location << ": " << v.detail << '\n';
    }
}

// Loads a model, mapping failures onto exit codes.
int load_for_command(const std::string& path, AppModel& m, std::ostream& err) {
    try {
        m = load_model(read_file(path));
        return kOk;
    } catch (const ModelInvalidError& e) {
        err << e.what() << '\n';
        print_report(err, e.report());
        return kDomainFailure;
    } catch (const Error& e) {
        err << to_string(e.code()) << ": " << e.what() << '\n';
        return kInputError;
    }
}

std::string describe(std::size_t index, const Operation& op, const Decision& d) {
    std::ostringstream line;
    line << index << ' ' << to_string(op.kind) << ' ' << op.component;
    if (op.concern) {
        line << " [" << *op.concern << ']';
    }
    line << " -> " << to_string(d.verdict) << ' ' << to_string(d.reason);
    if (d.satisfied_edge) {
        line << " edge=" << *d.satisfied_edge << " supports=" << braces(d.recorded_supports);
    }
    if (!d.removed_edges.empty()) {
        line << " removed=" << braces(ElementSet(d.removed_edges.begin(), d.removed_edges.end()));
    }
    line << " version=" << d.state_version;
    return line.str();
}

// ---------------------------------------------------------------------------
// Subcommands

int cmd_check(const std::string& path, std::ostream& out, std::ostream& err) {
    AppModel m;
    try {
        m = parse_model(read_file(path));
    } catch (const Error& e) {
        err << to_string(e.code()) << ": " << e.what() << '\n';
        return kInputError;
    }
    const auto report = validate_model(m);
    if (report.empty()) {
        std::size_t concerns = 0;
        for (const auto& [id, c] : m.concerns) {
            concerns += c.is_none ? 0 : 1;
        }
        out << "ok: " << m.components.size() << " components, " << m.dimensions.size() << " dimensions, "
            << concerns << " concerns\n";
        return kOk;
    }
    print_report(out, report);
    return kDomainFailure;
}

struct MatrixArgs {
    std::string model;
    std::string concern;
    bool closure = false;
    std::string target;
    std::size_t max_path_len = 0;
};

int cmd_matrix(const MatrixArgs& a, std::ostream& out, std::ostream& err) {
    AppModel m;
    if (int rc = load_for_command(a.model, m, err); rc != kOk) {
        return rc;
    }
    std::string concern = a.concern;
    if (concern.empty()) {
        std::vector<ConcernId> named;
        for (const auto& [id, c] : m.concerns) {
            if (!c.is_none) {
                named.push_back(id);
            }
        }
        if (named.size() != 1) {
            err << "--concern is required when the model has " << named.size() << " concerns\n";
            return kDomainFailure;
        }
        concern = named.front();
    }
    try {
        const Metagraph g = concern_metagraph(m, concern);
        if (!a.target.empty() && !g.has_element(a.target)) {
            throw Error(Errc::UnknownElement, "component '" + a.target + "' is not in concern '" + concern + "'");
        }
        if (!a.closure) {
            out << format_matrix(build_adjacency(g), a.target);
            return kOk;
        }
        std::optional<std::size_t> cap;
        if (a.max_path_len > 0) {
            cap = a.max_path_len;
        }
        const ClosureResult c = closure(g, cap);
        out << format_matrix(c.matrix, a.target);
        if (c.truncated) {
            out << "# truncated at path length " << *cap << '\n';
        }
        return kOk;
    } catch (const Error& e) {
        err << to_string(e.code()) << ": " << e.what() << '\n';
        return kDomainFailure;
    }
}

struct ReplayArgs {
    std::string model;
    std::string ops;
    bool strict = false;
    bool json = false;
    std::string out;
    std::string tenant = "replay";
};

int cmd_replay(const ReplayArgs& a, std::ostream& out, std::ostream& err) {
    AppModel m;
    if (int rc = load_for_command(a.model, m, err); rc != kOk) {
        return rc;
    }
    std::vector<Operation> ops;
    try {
        ops = load_operations(read_file(a.ops));
    } catch (const Error& e) {
        err << to_string(e.code()) << ": " << e.what() << '\n';
        return kInputError;
    }
    Session session(m, empty_customization(m, a.tenant));
    int rc = kOk;
    for (std::size_t i = 0; i < ops.size(); ++i) {
        const Decision d = session.apply(ops[i]);
        out << (a.json ? decision_line(d) : describe(i, ops[i], d)) << '\n';
        if (a.strict && !d.valid()) {
            rc = kDomainFailure;
            break;
        }
    }
    if (!a.out.empty()) {
        try {
            write_file(a.out, save_customization(session.customization()));
        } catch (const Error& e) {
            err << e.what() << '\n';
            return kInputError;
        }
    }
    return rc;
}

int cmd_generate(const GeneratorParams& p, const std::string& path, std::ostream& out, std::ostream& err) {
    AppModel m;
    try {
        m = generate_model(p);
    } catch (const Error& e) {
        err << to_string(e.code()) << ": " << e.what() << '\n';
        return kDomainFailure;
    }
    const std::string bytes = save_model(m);
    if (path.empty()) {
        out << bytes;
        return kOk;
    }
    try {
        write_file(path, bytes);
    } catch (const Error& e) {
        err << e.what() << '\n';
        return kInputError;
    }
    std::size_t concerns = 0;
    std::size_t edges = 0;
    for (const auto& [id, c] : m.concerns) {
        concerns += c.is_none ? 0 : 1;
        edges += c.edges.size();
    }
    out << "generated " << m.id << ": " << m.components.size() << " components, " << m.customization_points.size()
        << " customization points, " << m.dimensions.size() << " dimensions, " << concerns << " concerns, " << edges
        << " edges\n";
    return kOk;
}

struct BenchArgs {
    std::vector<std::size_t> sizes;
    std::vector<std::size_t> concurrency;
    std::size_t ops = 1000;
    std::uint64_t seed = 1;
    std::size_t model_size = 500;
    std::string csv;
};

int cmd_bench(const BenchArgs& a, std::ostream& out, std::ostream& err) {
    if (a.sizes.empty() == a.concurrency.empty()) {
        err << "exactly one of --sizes or --concurrency is required\n";
        return kInputError;
    }
    BenchReport report = a.sizes.empty() ? bench_concurrency(a.concurrency, a.ops, a.seed, a.model_size)
                                         : bench_sizes(a.sizes, a.ops, a.seed);
    if (!a.csv.empty()) {
        std::ofstream csv(a.csv, std::ios::trunc);
        if (!csv) {
            err << "cannot write '" << a.csv << "'\n";
            return kInputError;
        }
        write_csv(csv, report.rows);
    }
    print_summary(out, report);
    for (std::size_t i = 0; i < report.failures.size() && i < 10; ++i) {
        err << report.failures[i] << '\n';
    }
    return report.failed == 0 ? kOk : kDomainFailure;
}

struct ServeArgs {
    std::string listen = "127.0.0.1:8080";
    std::string snapshot_dir;
    std::size_t max_sessions = 10000;
};

int cmd_serve(const ServeArgs& a, std::ostream& out, std::ostream& err) {
    ServiceOptions options;
    const auto colon = a.listen.rfind(':');
    try {
        if (colon == std::string::npos) {
            throw std::invalid_argument("missing port");
        }
        options.host = a.listen.substr(0, colon);
        options.port = std::stoi(a.listen.substr(colon + 1));
    } catch (const std::exception&) {
        err << "--listen expects host:port, got '" << a.listen << "'\n";
        return kInputError;
    }
    if (!a.snapshot_dir.empty()) {
        options.snapshot_dir = a.snapshot_dir;
    }
    options.max_sessions = a.max_sessions;

    // Signals are taken synchronously by this thread; workers inherit the mask.
    sigset_t signals;
    sigemptyset(&signals);
    sigaddset(&signals, SIGINT);
    sigaddset(&signals, SIGTERM);
    sigset_t previous;
    pthread_sigmask(SIG_BLOCK, &signals, &previous);

    HttpServer server(options);
    if (!server.bind()) {
        pthread_sigmask(SIG_SETMASK, &previous, nullptr);
        err << "cannot listen on " << a.listen << '\n';
        return kDomainFailure;
    }
    server.start();
    out << "listening on " << options.host << ':' << server.port() << std::endl;
    int sig = 0;
    sigwait(&signals, &sig);
    server.stop();
    pthread_sigmask(SIG_SETMASK, &previous, nullptr);
    out << "stopped\n";
    return kOk;
}

} // namespace

std::string format_matrix(const TripleMatrix& m, const std::string& target_filter) {
    std::string out;
    for (const auto& [key, triples] : m.cells()) {
        if (!target_filter.empty() && key.second != target_filter) {
            continue;
        }
        for (const auto& t : triples) {
            out += key.first + " -> " + key.second + " : <" + braces(t.coinput) + ", " + braces(t.cooutput) + ", " +
                   angle(t.path) + ">\n";
        }
    }
    return out;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Multi-dimensional customization engine", "mdcust"};
    app.require_subcommand(1);

    std::string check_model;
    auto* check = app.add_subcommand("check", "Validate a model document");
    check->add_option("model", check_model, "Model file")->required();

    MatrixArgs matrix_args;
    auto* matrix = app.add_subcommand("matrix", "Print a concern's adjacency or closure matrix");
    matrix->add_option("model", matrix_args.model, "Model file")->required();
    matrix->add_option("--concern", matrix_args.concern, "Concern id (optional for single-concern models)");
    matrix->add_flag("--closure", matrix_args.closure, "Print the closure instead of the adjacency matrix");
    matrix->add_option("--target", matrix_args.target, "Only the column of this component");
    matrix->add_option("--max-path-len", matrix_args.max_path_len, "Closure path length cap (default |E|)");

    ReplayArgs replay_args;
    auto* replay_cmd = app.add_subcommand("replay", "Apply an op log to an empty customization");
    replay_cmd->add_option("model", replay_args.model, "Model file")->required();
    replay_cmd->add_option("ops", replay_args.ops, "JSON array of ops")->required();
    replay_cmd->add_flag("--strict", replay_args.strict, "Exit 1 at the first invalid op");
    replay_cmd->add_flag("--json", replay_args.json, "Print decisions as JSON lines");
    replay_cmd->add_option("--out", replay_args.out, "Write the final customization document");
    replay_cmd->add_option("--tenant", replay_args.tenant, "Tenant id recorded in the customization");

    GeneratorParams gen;
    std::string gen_out;
    auto* generate = app.add_subcommand("generate", "Generate a random benchmark model");
    generate->add_option("--components", gen.components)->capture_default_str();
    generate->add_option("--customization-points", gen.customization_points)->capture_default_str();
    generate->add_option("--dimensions", gen.dimensions)->capture_default_str();
    generate->add_option("--concerns-per-dimension", gen.concerns_per_dimension)->capture_default_str();
    generate->add_option("--edge-density", gen.edge_density)->capture_default_str();
    generate->add_option("--and-ratio", gen.and_ratio)->capture_default_str();
    generate->add_option("--max-invertex", gen.max_invertex)->capture_default_str();
    generate->add_option("--seed", gen.seed)->capture_default_str();
    generate->add_option("--out", gen_out, "Output file (stdout when omitted)");

    BenchArgs bench_args;
    auto* bench = app.add_subcommand("bench", "Response-time experiments");
    bench->add_option("--sizes", bench_args.sizes, "Model sizes, e.g. 100,200,500")->delimiter(',');
    bench->add_option("--concurrency", bench_args.concurrency, "Client counts, e.g. 1,2,4,8")->delimiter(',');
    bench->add_option("--ops", bench_args.ops, "Operations per run")->capture_default_str();
    bench->add_option("--seed", bench_args.seed)->capture_default_str();
    bench->add_option("--model-size", bench_args.model_size, "Model size in concurrency mode")->capture_default_str();
    bench->add_option("--csv", bench_args.csv, "Write per-op latencies as CSV");

    ServeArgs serve_args;
    auto* serve = app.add_subcommand("serve", "Run the HTTP session service");
    serve->add_option("--listen", serve_args.listen, "host:port")->capture_default_str();
    serve->add_option("--snapshot-dir", serve_args.snapshot_dir, "Append per-session snapshots here");
    serve->add_option("--max-sessions", serve_args.max_sessions)->capture_default_str();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kInputError;
    }

    if (check->parsed()) {
        return cmd_check(check_model, out, err);
    }
    if (matrix->parsed()) {
        return cmd_matrix(matrix_args, out, err);
    }
    if (replay_cmd->parsed()) {
        return cmd_replay(replay_args, out, err);
    }
    if (generate->parsed()) {
        return cmd_generate(gen, gen_out, out, err);
    }
    if (bench->parsed()) {
        return cmd_bench(bench_args, out, err);
    }
    return cmd_serve(serve_args, out, err);
}

} // namespace mdcust
