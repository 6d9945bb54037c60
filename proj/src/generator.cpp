#include "mdcust/generator.hpp"

#include "mdcust/error.hpp"

#include <algorithm>
#include <random>
#include <string>
#include <vector>

namespace mdcust {

namespace {

std::string padded(const std::string& prefix, std::size_t n, std::size_t total) {
    std::string digits = std::to_string(n);
    const std::size_t width = std::to_string(total).size();
    return prefix + std::string(width - std::min(width, digits.size()), '0') + digits;
}

void check(bool ok, const std::string& what) {
    if (!ok) {
        throw Error(Errc::InfeasibleParams, what);
    }
}

} // namespace

AppModel generate_model(const GeneratorParams& p) {
    check(p.components >= 1 && p.customization_points >= 1 && p.dimensions >= 1 && p.concerns_per_dimension >= 1,
          "all counts must be at least 1");
    check(p.components >= p.dimensions * p.concerns_per_dimension,
          "components must be at least dimensions x concerns-per-dimension");
    check(p.components >= p.customization_points, "every customization point needs a component");
    check(p.edge_density >= 0.0 && p.edge_density <= 1.0, "edge density must lie in [0, 1]");
    check(p.and_ratio >= 0.0 && p.and_ratio <= 1.0, "and ratio must lie in [0, 1]");
    check(p.max_invertex >= 1, "max invertex must be at least 1");

    std::mt19937_64 rng(p.seed);
    auto chance = [&](double prob) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < prob; };
    auto pick = [&](std::size_t lo, std::size_t hi) { return std::uniform_int_distribution<std::size_t>(lo, hi)(rng); };

    AppModel m;
    m.id = "generated-" + std::to_string(p.seed);
    m.revision = "r1";

    std::vector<ElementId> ids;
    ids.reserve(p.components);
    for (std::size_t i = 0; i < p.components; ++i) {
        ids.push_back(padded("c", i, p.components - 1));
    }
    for (std::size_t i = 0; i < p.customization_points; ++i) {
        const PointId pid = padded("cp", i, p.customization_points - 1);
        m.customization_points[pid] = CustomizationPoint{pid, "point " + std::to_string(i), {}};
    }
    for (std::size_t i = 0; i < p.components; ++i) {
        const PointId pid = padded("cp", i % p.customization_points, p.customization_points - 1);
        m.customization_points[pid].components.insert(ids[i]);
        m.components[ids[i]] = Component{ids[i], pid, "component " + std::to_string(i), std::nullopt};
    }

    for (std::size_t d = 0; d < p.dimensions; ++d) {
        const DimensionId did = padded("d", d, p.dimensions - 1);
        Dimension dim{did, "dimension " + std::to_string(d), {}, std::nullopt};

        std::vector<ElementId> order = ids;
        std::shuffle(order.begin(), order.end(), rng);

        // Each concern keeps its members in shuffled order: the topological
        // order its edges respect.
        std::vector<std::vector<ElementId>> members(p.concerns_per_dimension);
        for (std::size_t i = 0; i < order.size(); ++i) {
            if (i < p.concerns_per_dimension) {
                members[i].push_back(order[i]);
                continue;
            }
            const std::size_t slot = pick(0, p.concerns_per_dimension);  // last slot is None
            if (slot < p.concerns_per_dimension) {
                members[slot].push_back(order[i]);
            }
        }

        for (std::size_t k = 0; k < p.concerns_per_dimension; ++k) {
            Concern cn;
            cn.id = did + "." + padded("k", k, p.concerns_per_dimension - 1);
            cn.name = "concern " + std::to_string(k) + " of " + did;
            const auto& order_k = members[k];
            cn.components.insert(order_k.begin(), order_k.end());
            std::size_t edge_no = 0;
            for (std::size_t i = 1; i < order_k.size(); ++i) {
                if (!chance(p.edge_density)) {
                    continue;
                }
                const std::size_t width = pick(1, std::min(p.max_invertex, i));
                std::vector<std::size_t> earlier(i);
                for (std::size_t j = 0; j < i; ++j) {
                    earlier[j] = j;
                }
                std::shuffle(earlier.begin(), earlier.end(), rng);
                RequirementEdge re;
                re.edge.id = cn.id + ".e" + std::to_string(edge_no++);
                for (std::size_t j = 0; j < width; ++j) {
                    re.edge.invertex.insert(order_k[earlier[j]]);
                }
                re.edge.outvertex.insert(order_k[i]);
                re.mode = chance(p.and_ratio) ? RequirementMode::And : RequirementMode::Or;
                cn.edges.emplace(re.edge.id, std::move(re));
            }
            dim.concerns.push_back(cn.id);
            m.concerns.emplace(cn.id, std::move(cn));
        }
        std::sort(dim.concerns.begin(), dim.concerns.end());
        m.dimensions.emplace(did, std::move(dim));
    }
    return derive_none_concerns(std::move(m));
}

} // namespace mdcust
