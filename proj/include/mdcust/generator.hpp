#pragma once

#include "mdcust/model.hpp"

#include <cstddef>
#include <cstdint>

namespace mdcust {

struct GeneratorParams {
    std::size_t components = 500;
    std::size_t customization_points = 50;
    std::size_t dimensions = 3;
    std::size_t concerns_per_dimension = 5;
    double edge_density = 0.5;  // chance that a component gets an incoming edge
    double and_ratio = 0.3;
    std::size_t max_invertex = 3;
    std::uint64_t seed = 1;
};

// Deterministic for a fixed seed. Components are dealt round-robin over the
// customization points; each dimension partitions them randomly over its
// concerns (remainder to None); edges inside a concern follow a random
// topological order, so every concern metagraph is acyclic.
// Throws Error{InfeasibleParams}.
AppModel generate_model(const GeneratorParams& p);

} // namespace mdcust
