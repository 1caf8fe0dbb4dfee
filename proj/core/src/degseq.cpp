#include "dcflowgen/degseq.hpp"

#include <algorithm>
#include <numeric>

#include "dcflowgen/error.hpp"

namespace dcflowgen {
namespace {

using Edge = std::pair<NodeId, NodeId>;

Edge ordered(NodeId a, NodeId b) { return a < b ? Edge{a, b} : Edge{b, a}; }

// Adjacency lists for incremental construction.
class Builder {
 public:
  explicit Builder(std::uint32_t n) : adj_(n) {}

  bool has(NodeId a, NodeId b) const {
    const auto& l = adj_[a].size() <= adj_[b].size() ? adj_[a] : adj_[b];
    const NodeId other = adj_[a].size() <= adj_[b].size() ? b : a;
    return std::find(l.begin(), l.end(), other) != l.end();
  }
  void add(NodeId a, NodeId b) {
    adj_[a].push_back(b);
    adj_[b].push_back(a);
  }
  void remove(NodeId a, NodeId b) {
    auto drop = [](std::vector<NodeId>& l, NodeId v) {
      auto it = std::find(l.begin(), l.end(), v);
      *it = l.back();
      l.pop_back();
    };
    drop(adj_[a], b);
    drop(adj_[b], a);
  }
  std::uint32_t degree(NodeId a) const {
    return static_cast<std::uint32_t>(adj_[a].size());
  }
  const std::vector<NodeId>& neighbors(NodeId a) const { return adj_[a]; }

  std::vector<Edge> edge_list() const {
    std::vector<Edge> out;
    for (NodeId a = 0; a < adj_.size(); ++a) {
      for (NodeId b : adj_[a]) {
        if (a < b) out.emplace_back(a, b);
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }
  AdjacencyGraph graph() const {
    return AdjacencyGraph(static_cast<std::uint32_t>(adj_.size()),
                          edge_list());
  }

 private:
  std::vector<std::vector<NodeId>> adj_;
};

// Index of the node with the largest positive residual, lowest index on
// ties; n when all residuals are zero.
std::size_t argmax_residual(const std::vector<std::int64_t>& r) {
  std::size_t best = r.size();
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r[i] > 0 && (best == r.size() || r[i] > r[best])) best = i;
  }
  return best;
}

AdjacencyGraph inter_greedy(const DegreeSequence& d, const RackLayout& layout) {
  const std::uint32_t n = layout.node_count();
  std::vector<std::int64_t> r(d.degrees.begin(), d.degrees.end());
  Builder b(n);
  std::vector<NodeId> cand;
  cand.reserve(n);

  while (true) {
    const std::size_t ui = argmax_residual(r);
    if (ui == r.size()) break;
    const auto u = static_cast<NodeId>(ui);
    cand.clear();
    for (NodeId v = 0; v < n; ++v) {
      if (r[v] > 0 && !layout.same_rack(u, v) && !b.has(u, v)) {
        cand.push_back(v);
      }
    }
    const auto take = std::min<std::size_t>(cand.size(),
                                            static_cast<std::size_t>(r[u]));
    std::partial_sort(cand.begin(), cand.begin() + static_cast<long>(take),
                      cand.end(), [&](NodeId a, NodeId c) {
                        return r[a] != r[c] ? r[a] > r[c] : a < c;
                      });
    for (std::size_t k = 0; k < take; ++k) {
      b.add(u, cand[k]);
      --r[cand[k]];
    }
    // Whatever u could not place stays as shortfall.
    r[u] = 0;
  }

  // Augment: deficits are recomputed from the demands since the greedy
  // zeroed the residual of every processed node.
  std::vector<std::int64_t> deficit(n);
  auto refresh = [&] {
    std::vector<NodeId> out;
    for (NodeId v = 0; v < n; ++v) {
      deficit[v] = static_cast<std::int64_t>(d.degrees[v]) - b.degree(v);
      if (deficit[v] > 0) out.push_back(v);
    }
    return out;
  };

  bool improved = true;
  while (improved) {
    improved = false;
    const auto short_nodes = refresh();
    // Direct edges between two deficient nodes.
    for (std::size_t i = 0; i < short_nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < short_nodes.size(); ++j) {
        const NodeId u = short_nodes[i];
        const NodeId v = short_nodes[j];
        if (deficit[u] > 0 && deficit[v] > 0 && !layout.same_rack(u, v) &&
            !b.has(u, v)) {
          b.add(u, v);
          --deficit[u];
          --deficit[v];
          improved = true;
        }
      }
    }
    if (improved) continue;
    // Swap: drop (x, y), add (u, x) and (v, y). u == v needs deficit >= 2.
    const auto edges = b.edge_list();
    for (std::size_t i = 0; i < short_nodes.size() && !improved; ++i) {
      for (std::size_t j = i; j < short_nodes.size() && !improved; ++j) {
        const NodeId u = short_nodes[i];
        const NodeId v = short_nodes[j];
        if (u == v && deficit[u] < 2) continue;
        for (const auto& [p, q] : edges) {
          for (int flip = 0; flip < 2 && !improved; ++flip) {
            const NodeId x = flip ? q : p;
            const NodeId y = flip ? p : q;
            if (x == u || x == v || y == u || y == v) continue;
            if (layout.same_rack(u, x) || layout.same_rack(v, y)) continue;
            if (b.has(u, x) || b.has(v, y)) continue;
            if (u == v && x == y) continue;
            b.remove(x, y);
            b.add(u, x);
            b.add(v, y);
            improved = true;
          }
          if (improved) break;
        }
      }
    }
  }
  return b.graph();
}

class InterBranchAndBound {
 public:
  InterBranchAndBound(const DegreeSequence& d, const RackLayout& layout)
      : n_(layout.node_count()),
        residual_(d.degrees.begin(), d.degrees.end()),
        avail_(n_, 0) {
    for (NodeId a = 0; a < n_; ++a) {
      for (NodeId c = a + 1; c < n_; ++c) {
        if (!layout.same_rack(a, c) && d.degrees[a] > 0 && d.degrees[c] > 0) {
          pairs_.emplace_back(a, c);
          ++avail_[a];
          ++avail_[c];
        }
      }
    }
  }

  AdjacencyGraph solve() {
    search(0);
    return AdjacencyGraph(n_, best_);
  }

 private:
  std::size_t bound() const {
    std::size_t half = 0;
    for (NodeId v = 0; v < n_; ++v) {
      half += std::min<std::size_t>(residual_[v], avail_[v]);
    }
    return chosen_.size() + half / 2;
  }

  void search(std::size_t idx) {
    if (chosen_.size() > best_.size()) best_ = chosen_;
    if (idx == pairs_.size() || bound() <= best_.size()) return;
    const auto [a, c] = pairs_[idx];
    --avail_[a];
    --avail_[c];
    if (residual_[a] > 0 && residual_[c] > 0) {
      --residual_[a];
      --residual_[c];
      chosen_.push_back(pairs_[idx]);
      search(idx + 1);
      chosen_.pop_back();
      ++residual_[a];
      ++residual_[c];
    }
    search(idx + 1);
    ++avail_[a];
    ++avail_[c];
  }

  std::uint32_t n_;
  std::vector<std::uint32_t> residual_;
  std::vector<std::uint32_t> avail_;
  std::vector<Edge> pairs_;
  std::vector<Edge> chosen_;
  std::vector<Edge> best_;
};

}  // namespace

std::uint64_t DegreeSequence::sum() const {
  return std::accumulate(degrees.begin(), degrees.end(), std::uint64_t{0});
}

AdjacencyGraph::AdjacencyGraph(std::uint32_t n, std::vector<Edge> edges)
    : n_(n), edges_(std::move(edges)) {
  for (auto& e : edges_) {
    if (e.first == e.second) throw Error("graph", "self-loop");
    if (e.first >= n || e.second >= n) throw Error("graph", "node out of range");
    e = ordered(e.first, e.second);
  }
  std::sort(edges_.begin(), edges_.end());
  if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
    throw Error("graph", "duplicate edge");
  }
}

bool AdjacencyGraph::has_edge(NodeId a, NodeId b) const {
  return std::binary_search(edges_.begin(), edges_.end(), ordered(a, b));
}

std::vector<std::uint32_t> AdjacencyGraph::degrees() const {
  std::vector<std::uint32_t> deg(n_, 0);
  for (const auto& [a, b] : edges_) {
    ++deg[a];
    ++deg[b];
  }
  return deg;
}

bool erdos_gallai_check(std::span<const std::uint32_t> degrees) {
  std::vector<std::uint64_t> d(degrees.begin(), degrees.end());
  std::sort(d.begin(), d.end(), std::greater<>());
  const std::uint64_t total = std::accumulate(d.begin(), d.end(),
                                              std::uint64_t{0});
  if (total % 2 != 0) return false;
  const std::size_t n = d.size();
  std::uint64_t lhs = 0;
  for (std::size_t k = 1; k <= n; ++k) {
    lhs += d[k - 1];
    std::uint64_t rhs = static_cast<std::uint64_t>(k) * (k - 1);
    for (std::size_t i = k; i < n; ++i) rhs += std::min<std::uint64_t>(d[i], k);
    if (lhs > rhs) return false;
  }
  return true;
}

std::optional<AdjacencyGraph> havel_hakimi(const DegreeSequence& d) {
  const auto n = static_cast<std::uint32_t>(d.size());
  std::vector<std::int64_t> r(d.degrees.begin(), d.degrees.end());
  Builder b(n);
  std::vector<NodeId> order(n);
  while (true) {
    const std::size_t ui = argmax_residual(r);
    if (ui == r.size()) break;
    const auto u = static_cast<NodeId>(ui);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId c) {
      return r[a] > r[c];
    });
    std::int64_t need = r[u];
    r[u] = 0;
    for (NodeId v : order) {
      if (need == 0) break;
      if (v == u) continue;
      if (r[v] <= 0) return std::nullopt;
      b.add(u, v);
      --r[v];
      --need;
    }
    if (need > 0) return std::nullopt;
  }
  return b.graph();
}

std::optional<AdjacencyGraph> brute_force_realize(const DegreeSequence& d,
                                                  std::uint32_t max_n) {
  const auto n = static_cast<std::uint32_t>(d.size());
  if (n > max_n) {
    throw Error("brute force", "n = " + std::to_string(n) +
                                   " exceeds max_n = " + std::to_string(max_n));
  }
  for (auto v : d.degrees) {
    if (v >= std::max<std::uint32_t>(n, 1)) return std::nullopt;
  }
  // Depth-first over the pairs (0,1), (0,2), ..., (n-2,n-1), deciding each
  // edge in or out. Once every pair touching node a has been decided its
  // degree is final and must match.
  std::vector<Edge> pairs;
  for (NodeId a = 0; a < n; ++a) {
    for (NodeId c = a + 1; c < n; ++c) pairs.emplace_back(a, c);
  }
  std::vector<std::uint32_t> deg(n, 0);
  std::vector<std::uint32_t> left(n, n == 0 ? 0 : n - 1);
  std::vector<Edge> chosen;
  std::optional<AdjacencyGraph> found;

  auto feasible = [&](NodeId v) {
    return deg[v] <= d.degrees[v] && deg[v] + left[v] >= d.degrees[v];
  };
  auto rec = [&](auto&& self, std::size_t idx) -> bool {
    if (idx == pairs.size()) {
      for (NodeId v = 0; v < n; ++v) {
        if (deg[v] != d.degrees[v]) return false;
      }
      found = AdjacencyGraph(n, chosen);
      return true;
    }
    const auto [a, c] = pairs[idx];
    --left[a];
    --left[c];
    bool done = false;
    ++deg[a];
    ++deg[c];
    chosen.push_back(pairs[idx]);
    if (feasible(a) && feasible(c)) done = self(self, idx + 1);
    chosen.pop_back();
    --deg[a];
    --deg[c];
    if (!done && feasible(a) && feasible(c)) done = self(self, idx + 1);
    ++left[a];
    ++left[c];
    return done;
  };
  if (n == 0 || rec(rec, 0)) {
    if (!found) found = AdjacencyGraph(n);
  }
  return found;
}

AdjacencyGraph solve_inter_rack(const DegreeSequence& d,
                                const RackLayout& layout,
                                InterRackBackend backend,
                                std::uint32_t exact_limit) {
  if (d.size() != layout.node_count()) {
    throw Error("inter-rack graph", "degree sequence length differs from n");
  }
  if (backend == InterRackBackend::kExact) {
    if (layout.node_count() > exact_limit) {
      throw Error("inter-rack graph", "exact backend limited to " +
                                          std::to_string(exact_limit) +
                                          " nodes");
    }
    return InterBranchAndBound(d, layout).solve();
  }
  return inter_greedy(d, layout);
}

std::uint64_t degree_shortfall(const DegreeSequence& d,
                               const AdjacencyGraph& g) {
  const auto deg = g.degrees();
  std::uint64_t s = 0;
  for (std::size_t i = 0; i < deg.size() && i < d.size(); ++i) {
    if (d.degrees[i] > deg[i]) s += d.degrees[i] - deg[i];
  }
  return s;
}

}  // namespace dcflowgen
