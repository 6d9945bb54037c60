#pragma once

// Response-time experiments: latency per operation against model size
// (in-process) and against the number of concurrent clients (over HTTP).

#include "mdcust/engine.hpp"
#include "mdcust/generator.hpp"
#include "mdcust/model.hpp"

#include <cstddef>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

namespace mdcust {

// Valid-biased random op stream: ~80% adds whose requirements are already
// satisfiable, ~20% deletes of components supporting nothing. When neither
// kind is possible a selected component is re-added (a valid no-op), so every
// generated op is accepted. Deterministic for a fixed seed.
std::vector<Operation> generate_workload(const AppModel& m, std::size_t ops, std::uint64_t seed);

struct BenchRow {
    std::size_t run = 0;
    std::size_t model_size = 0;
    OpKind op = OpKind::Add;
    std::size_t concurrency = 1;
    double latency_us = 0.0;
};

struct BenchSummary {
    std::size_t run = 0;
    std::size_t model_size = 0;
    std::size_t concurrency = 1;
    std::size_t count = 0;
    double median_us = 0.0;
    double p95_us = 0.0;
    double mean_us = 0.0;
    double setup_ms = 0.0;  // model generation and closure precomputation, untimed per op
};

struct BenchReport {
    std::vector<BenchRow> rows;
    std::vector<BenchSummary> summaries;
    std::size_t failed = 0;  // rejected ops or transport failures
    std::vector<std::string> failures;
};

// Generator settings shared by both modes; `components` and `seed` are
// overridden per run.
GeneratorParams bench_params(std::size_t components, std::uint64_t seed);

BenchReport bench_sizes(const std::vector<std::size_t>& sizes, std::size_t ops, std::uint64_t seed);

// Starts the service in-process on a free port. Per level, `ops` operations
// are split over `level` clients, each driving its own session. Responses
// must equal a serial in-process replay of each client's stream.
BenchReport bench_concurrency(const std::vector<std::size_t>& levels, std::size_t ops, std::uint64_t seed,
                              std::size_t model_size = 500);

void write_csv(std::ostream& out, const std::vector<BenchRow>& rows);
void print_summary(std::ostream& out, const BenchReport& report);

// Median, p95 (nearest rank) and mean of a sample.
BenchSummary summarize(std::vector<double> latencies);

} // namespace mdcust
