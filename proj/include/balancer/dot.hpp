#pragma once

#include <optional>
#include <string>
#include <vector>

#include "balancer/coalition.hpp"
#include "balancer/graph.hpp"

namespace balancer {

/// Undirected DOT graph of a partitioned signed network. Set-1 and set-2
/// nodes get distinct fill colours and shapes; positive edges are blue,
/// negative red; edges inside a set are solid and edges across sets dashed.
/// With `subset`, only the listed nations and their mutual edges are emitted
/// (unknown names throw ValidationError).
std::string format_dot(const SignedGraph &g, const Partition &partition,
                       const std::optional<std::vector<std::string>> &subset = std::nullopt);

}  // namespace balancer
