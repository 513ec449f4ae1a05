#include "swarm/tasks/matching.hpp"

#include <limits>

#include "swarm/error.hpp"

namespace swarm::tasks {

namespace {

bool augment(const std::vector<std::vector<bool>>& adj, int u, std::vector<int>& match_right,
             std::vector<char>& seen) {
  for (std::size_t v = 0; v < match_right.size(); ++v) {
    if (!adj[u][v] || seen[v]) continue;
    seen[v] = 1;
    if (match_right[v] < 0 || augment(adj, match_right[v], match_right, seen)) {
      match_right[v] = u;
      return true;
    }
  }
  return false;
}

}  // namespace

std::vector<int> max_bipartite_matching(const std::vector<std::vector<bool>>& adj) {
  const std::size_t left = adj.size();
  const std::size_t right = left == 0 ? 0 : adj[0].size();
  std::vector<int> match_right(right, -1);
  for (std::size_t u = 0; u < left; ++u) {
    std::vector<char> seen(right, 0);
    augment(adj, static_cast<int>(u), match_right, seen);
  }
  std::vector<int> match_left(left, -1);
  for (std::size_t v = 0; v < right; ++v) {
    if (match_right[v] >= 0) match_left[match_right[v]] = static_cast<int>(v);
  }
  return match_left;
}

// O(n^3) Hungarian method with potentials (rows and columns 1-based inside).
std::vector<int> min_cost_assignment(const std::vector<std::vector<double>>& cost) {
  const int n = static_cast<int>(cost.size());
  for (const auto& row : cost) {
    if (static_cast<int>(row.size()) != n) throw ConfigError("assignment needs a square matrix");
  }
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int> p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char> used(n + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0);
  }
  std::vector<int> row_to_col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) row_to_col[p[j] - 1] = j - 1;
  }
  return row_to_col;
}

}  // namespace swarm::tasks
