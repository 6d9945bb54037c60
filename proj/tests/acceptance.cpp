// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any
// failure.

#include "fixtures.hpp"

#include "mdcust/bench.hpp"
#include "mdcust/generator.hpp"
#include "mdcust/model_io.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>

using namespace mdcust;
using namespace fixtures;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

struct Outcome {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        if (pass) detail = why;
        pass = false;
    }
};

Outcome adjacency_table() {
    Outcome o;
    const Metagraph s = example();
    std::vector<double> times;
    TripleMatrix a(s.elements());
    for (int i = 0; i < 101; ++i) {
        const auto t = Clock::now();
        a = build_adjacency(s);
        times.push_back(seconds_since(t) * 1000.0);
    }
    std::sort(times.begin(), times.end());
    const double ms = times[times.size() / 2];
    if (cells_of(a) != example_adjacency_cells()) o.fail("cell sets differ");
    if (a.cells().size() != 7 || a.triple_count() != 7) o.fail("expected 7 non-empty cells");
    if (ms >= 1.0) o.fail("median runtime " + std::to_string(ms) + " ms");
    std::ostringstream d;
    d << a.cells().size() << " cells, median " << ms << " ms";
    if (o.pass) o.detail = d.str();
    return o;
}

Outcome closure_table() {
    Outcome o;
    const ClosureResult c = closure(example());
    if (c.truncated) o.fail("closure truncated");
    if (cells_of(c.matrix) != example_closure_cells()) o.fail("cell sets differ");
    const TripleSet& x2x6 = c.matrix.cell("x2", "x6");
    std::set<ElementSet> coinputs;
    for (const auto& t : x2x6) coinputs.insert(t.coinput);
    if (coinputs != std::set<ElementSet>{{"x1", "x5"}, {"x4"}}) o.fail("cell (x2,x6) coinputs differ");
    if (o.pass) o.detail = std::to_string(c.matrix.triple_count()) + " triples in " +
                           std::to_string(c.matrix.cells().size()) + " cells";
    return o;
}

Outcome worked_examples() {
    Outcome o;
    const Metagraph s = example();
    const PathCheck p = is_simple_path(s, {"e1", "e3"}, "x2", "x6");
    if (!p.holds) o.fail("<e1,e3> is not a simple path from x2 to x6");
    if (p.coinput != ElementSet{"x1", "x5"}) o.fail("coinput differs");
    if (p.cooutput != ElementSet{"x3", "x4"}) o.fail("cooutput differs");
    if (!is_metapath(s, {"e1", "e2", "e3"}, {"x1", "x2"}, {"x6"})) o.fail("{e1,e2,e3} is not a metapath");
    if (o.pass) o.detail = "simple path and metapath hold";
    return o;
}

Outcome closure_oracle() {
    Outcome o;
    const auto t = Clock::now();
    std::mt19937_64 rng(20240601);
    std::size_t triples = 0;
    for (int i = 0; i < 200; ++i) {
        const Metagraph s = random_metagraph(rng, 8, 6);
        const TripleMatrix c = closure(s).matrix;
        if (cells_of(c) != brute_force_closure(s)) o.fail("metagraph " + std::to_string(i) + " differs");
        triples += c.triple_count();
    }
    const double secs = seconds_since(t);
    if (secs >= 10.0) o.fail("took " + std::to_string(secs) + " s");
    if (o.pass) o.detail = "200 metagraphs, " + std::to_string(triples) + " triples, " + std::to_string(secs) + " s";
    return o;
}

AppModel random_model(std::mt19937_64& rng) {
    auto in = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };
    GeneratorParams p;
    p.components = in(9, 50);
    p.customization_points = in(1, 5);
    p.dimensions = in(1, 3);
    p.concerns_per_dimension = in(1, 3);
    p.edge_density = std::uniform_real_distribution<double>(0.2, 0.9)(rng);
    p.and_ratio = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
    p.max_invertex = in(1, 3);
    p.seed = rng();
    return generate_model(p);
}

bool add_possible(const Concern& c, const ElementId& x, const ElementSet& selected) {
    bool incoming = false;
    for (const auto& [id, re] : c.edges) {
        if (!re.edge.outvertex.contains(x) || re.edge.invertex.empty()) continue;
        incoming = true;
        std::size_t hit = 0;
        for (const auto& v : re.edge.invertex) hit += selected.contains(v);
        if (re.mode == RequirementMode::And ? hit == re.edge.invertex.size() : hit > 0) return true;
    }
    return !incoming;
}

Outcome soundness() {
    Outcome o;
    const auto t = Clock::now();
    std::mt19937_64 rng(1000);
    std::size_t accepted = 0, rejected_add = 0, rejected_delete = 0;
    for (int i = 0; i < 1000 && o.pass; ++i) {
        const AppModel m = random_model(rng);
        const auto ops = random_ops(rng, m, 1 + rng() % 200);
        TenantCustomization td = empty_customization(m, "t");
        for (std::size_t k = 0; k < ops.size(); ++k) {
            const Operation& op = ops[k];
            const ElementSet selected = td.selected_components();
            const TenantCustomization before = td;
            const Decision d = apply(m, td, op);
            const std::string where = "pair " + std::to_string(i) + " op " + std::to_string(k);
            if (d.valid()) {
                ++accepted;
                const auto r = oracle_valid(m, td);
                if (!r.valid) o.fail(where + ": " + r.violations[0].clause + " " + r.violations[0].detail);
            } else if (td != before) {
                o.fail(where + ": rejected op changed the customization");
            }
            if (d.reason == Reason::RequirementsUnsatisfied) {
                ++rejected_add;
                if (add_possible(m.concern(*op.concern), op.component, selected))
                    o.fail(where + ": rejected add had a satisfiable edge");
            }
            if (d.reason == Reason::RequiredByOthers) {
                ++rejected_delete;
                if (tenant_row(m, td, op.component).empty()) o.fail(where + ": rejected delete has an empty row");
            }
            if (op.kind == OpKind::Delete && d.reason == Reason::Deleted && !tenant_row(m, before, op.component).empty())
                o.fail(where + ": delete accepted with a non-empty row");
        }
    }
    const double secs = seconds_since(t);
    if (secs >= 60.0) o.fail("took " + std::to_string(secs) + " s");
    if (o.pass) {
        o.detail = std::to_string(accepted) + " accepted, " + std::to_string(rejected_add) + " rejected adds, " +
                   std::to_string(rejected_delete) + " rejected deletes, " + std::to_string(secs) + " s";
    }
    return o;
}

Outcome determinism() {
    Outcome o;
    std::mt19937_64 rng(17);
    std::vector<std::pair<AppModel, std::vector<Operation>>> cases;
    cases.emplace_back(load_model(read_golden("sec_model.json")), load_operations(read_golden("sec_ops.json")));
    for (int i = 0; i < 50; ++i) {
        AppModel m = random_model(rng);
        auto ops = random_ops(rng, m, 200);
        cases.emplace_back(std::move(m), std::move(ops));
    }
    const AppModel big = generate_model(bench_params(500, 3));
    cases.emplace_back(big, generate_workload(big, 1000, 3));
    for (const auto& [m, ops] : cases) {
        auto render = [&] {
            const ReplayResult r = replay(m, ops);
            std::string bytes;
            for (const auto& d : r.decisions) bytes += decision_line(d) + "\n";
            return bytes + save_customization(r.final_state);
        };
        if (render() != render()) o.fail("replay of model " + m.id + " differs between runs");
    }
    if (o.pass) o.detail = std::to_string(cases.size()) + " op logs replayed twice, byte-identical";
    return o;
}

Outcome benchmark() {
    Outcome o;
    const auto t = Clock::now();
    std::vector<std::size_t> sizes;
    for (std::size_t s = 100; s <= 1000; s += 100) sizes.push_back(s);
    const BenchReport by_size = bench_sizes(sizes, 1000, 1);
    const BenchReport by_clients = bench_concurrency({1, 2, 4, 8, 16}, 1000, 1, 500);
    const double secs = seconds_since(t);

    print_summary(std::cout, by_size);
    print_summary(std::cout, by_clients);
    if (by_size.failed != 0) o.fail(std::to_string(by_size.failed) + " failed decisions: " + by_size.failures[0]);
    if (by_clients.failed != 0) o.fail(std::to_string(by_clients.failed) + " mismatches: " + by_clients.failures[0]);
    if (by_size.summaries.size() != sizes.size() || by_clients.summaries.size() != 5) o.fail("missing runs");
    for (const auto& s : by_size.summaries) {
        if (s.count != 1000) o.fail("size " + std::to_string(s.model_size) + " ran " + std::to_string(s.count));
    }
    if (secs >= 300.0) o.fail("took " + std::to_string(secs) + " s");
    if (o.pass) o.detail = "10 sizes x 1000 ops, 5 concurrency levels, " + std::to_string(secs) + " s";
    return o;
}

Outcome round_trip() {
    Outcome o;
    for (const char* name : {"example_model.json", "sec_model.json"}) {
        const std::string d = read_golden(name);
        if (save_model(load_model(d)) != d) o.fail(std::string(name) + " does not round-trip");
    }
    const AppModel sec = load_model(read_golden("sec_model.json"));
    for (const char* name : {"sec_customization.json", "sec_empty_customization.json"}) {
        const std::string d = read_golden(name);
        if (save_customization(load_customization(d, sec)) != d) o.fail(std::string(name) + " does not round-trip");
    }
    const std::string generated = save_model(generate_model(bench_params(200, 5)));
    if (save_model(load_model(generated)) != generated) o.fail("generated model does not round-trip");
    if (o.pass) o.detail = "5 documents";
    return o;
}

} // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"adjacency of the example metagraph", adjacency_table},
        {"closure of the example metagraph", closure_table},
        {"simple path and metapath worked examples", worked_examples},
        {"closure equals brute-force enumeration", closure_oracle},
        {"add/delete soundness on random models", soundness},
        {"replay determinism", determinism},
        {"response-time benchmark", benchmark},
        {"canonical document round-trip", round_trip},
    };
    int failed = 0;
    for (const auto& [name, check] : criteria) {
        Outcome o;
        try {
            o = check();
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail << std::endl;
        failed += o.pass ? 0 : 1;
    }
    std::cout << (criteria.size() - static_cast<std::size_t>(failed)) << "/" << criteria.size() << " passed"
              << std::endl;
    return failed == 0 ? 0 : 1;
}
