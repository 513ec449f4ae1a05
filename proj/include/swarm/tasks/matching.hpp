#pragma once

#include <vector>

namespace swarm::tasks {

// Maximum bipartite matching on an adjacency matrix adj[left][right].
// Returns the matched right index per left vertex, or -1.
std::vector<int> max_bipartite_matching(const std::vector<std::vector<bool>>& adj);

// Minimum-cost perfect assignment on a square cost matrix. Returns the
// column assigned to each row.
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost);

}  // namespace swarm::tasks
