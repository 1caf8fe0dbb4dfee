#include <algorithm>
#include <cmath>
#include <limits>

#include "dcflowgen/degseq.hpp"
#include "dcflowgen/error.hpp"

namespace dcflowgen {
namespace {

constexpr std::uint32_t kExactRackLimit = 8;

struct Problem {
  std::vector<std::uint32_t> demand;
  std::vector<double> weight;  // per node
  std::uint32_t m = 0;

  double cost(std::uint32_t node, std::int64_t deg) const {
    return weight[node] *
           static_cast<double>(std::llabs(deg - static_cast<std::int64_t>(
                                                    demand[node])));
  }
};

double objective_of(const Problem& p, const std::vector<std::uint32_t>& deg) {
  double obj = 0.0;
  for (std::uint32_t i = 0; i < p.m; ++i) obj += p.cost(i, deg[i]);
  return obj;
}

// Dense adjacency for one rack.
class RackGraph {
 public:
  explicit RackGraph(std::uint32_t m) : m_(m), adj_(m * m, 0), deg_(m, 0) {}

  bool has(std::uint32_t a, std::uint32_t b) const { return adj_[a * m_ + b]; }
  void set(std::uint32_t a, std::uint32_t b, bool on) {
    if (has(a, b) == on) return;
    adj_[a * m_ + b] = adj_[b * m_ + a] = on;
    if (on) {
      ++deg_[a];
      ++deg_[b];
    } else {
      --deg_[a];
      --deg_[b];
    }
  }
  std::uint32_t degree(std::uint32_t a) const { return deg_[a]; }
  const std::vector<std::uint32_t>& degrees() const { return deg_; }

  AdjacencyGraph graph() const {
    std::vector<std::pair<NodeId, NodeId>> e;
    for (std::uint32_t a = 0; a < m_; ++a) {
      for (std::uint32_t b = a + 1; b < m_; ++b) {
        if (has(a, b)) e.emplace_back(a, b);
      }
    }
    return AdjacencyGraph(m_, std::move(e));
  }

 private:
  std::uint32_t m_;
  std::vector<char> adj_;
  std::vector<std::uint32_t> deg_;
};

// Havel-Hakimi toward the demands; nodes whose demand cannot be placed keep
// a deficit.
RackGraph greedy_start(const Problem& p) {
  RackGraph g(p.m);
  std::vector<std::int64_t> r(p.demand.begin(), p.demand.end());
  std::vector<std::uint32_t> cand;
  while (true) {
    std::uint32_t u = p.m;
    for (std::uint32_t i = 0; i < p.m; ++i) {
      if (r[i] > 0 && (u == p.m || r[i] > r[u])) u = i;
    }
    if (u == p.m) break;
    cand.clear();
    for (std::uint32_t v = 0; v < p.m; ++v) {
      if (v != u && r[v] > 0 && !g.has(u, v)) cand.push_back(v);
    }
    std::stable_sort(cand.begin(), cand.end(),
                     [&](std::uint32_t a, std::uint32_t b) {
                       return r[a] > r[b];
                     });
    const auto take = std::min<std::size_t>(cand.size(),
                                            static_cast<std::size_t>(r[u]));
    for (std::size_t k = 0; k < take; ++k) {
      g.set(u, cand[k], true);
      --r[cand[k]];
    }
    r[u] = 0;
  }
  return g;
}

// Change of a node's cost when its degree moves by step.
double delta(const Problem& p, const RackGraph& g, std::uint32_t v,
             std::int64_t step) {
  const std::int64_t d = g.degree(v);
  return p.cost(v, d + step) - p.cost(v, d);
}

// First-improvement local search over single edge toggles and the two
// degree-shifting swaps (drop xy, add ux and vy; or the reverse).
void local_search(const Problem& p, RackGraph& g) {
  constexpr double kEps = 1e-12;
  const std::uint32_t m = p.m;
  bool improved = true;
  while (improved) {
    improved = false;
    for (std::uint32_t a = 0; a < m && !improved; ++a) {
      for (std::uint32_t b = a + 1; b < m && !improved; ++b) {
        const std::int64_t step = g.has(a, b) ? -1 : 1;
        if (delta(p, g, a, step) + delta(p, g, b, step) < -kEps) {
          g.set(a, b, step > 0);
          improved = true;
        }
      }
    }
    if (improved) continue;
    for (std::uint32_t u = 0; u < m && !improved; ++u) {
      for (std::uint32_t v = u; v < m && !improved; ++v) {
        const double up = u == v ? p.cost(u, g.degree(u) + 2) -
                                       p.cost(u, g.degree(u))
                                 : delta(p, g, u, 1) + delta(p, g, v, 1);
        const double down = u == v ? p.cost(u, static_cast<std::int64_t>(
                                                   g.degree(u)) - 2) -
                                         p.cost(u, g.degree(u))
                                   : delta(p, g, u, -1) + delta(p, g, v, -1);
        for (std::uint32_t x = 0; x < m && !improved; ++x) {
          for (std::uint32_t y = 0; y < m && !improved; ++y) {
            if (x == y || x == u || x == v || y == u || y == v) continue;
            if (up < -kEps && g.has(x, y) && !g.has(u, x) && !g.has(v, y)) {
              g.set(x, y, false);
              g.set(u, x, true);
              g.set(v, y, true);
              improved = true;
            } else if (down < -kEps && !g.has(x, y) && g.has(u, x) &&
                       g.has(v, y)) {
              g.set(u, x, false);
              g.set(v, y, false);
              g.set(x, y, true);
              improved = true;
            }
          }
        }
      }
    }
  }
}

// Minimum-cost graphical degree vector by depth-first search with the
// candidates of each node ordered by cost; branches whose partial cost
// reaches the incumbent are cut.
class DegreeVectorSearch {
 public:
  DegreeVectorSearch(const Problem& p, double incumbent,
                     std::vector<std::uint32_t> incumbent_degrees)
      : p_(p), best_(incumbent), best_deg_(std::move(incumbent_degrees)),
        cur_(p.m, 0) {
    for (std::uint32_t i = 0; i < p.m; ++i) {
      std::vector<std::uint32_t> c(p.m);
      for (std::uint32_t v = 0; v < p.m; ++v) c[v] = v;
      std::stable_sort(c.begin(), c.end(), [&](std::uint32_t a,
                                               std::uint32_t b) {
        return p.cost(i, a) < p.cost(i, b);
      });
      order_.push_back(std::move(c));
    }
  }

  std::vector<std::uint32_t> run() {
    search(0, 0.0);
    return best_deg_;
  }

 private:
  void search(std::uint32_t i, double cost) {
    if (i == p_.m) {
      if (cost < best_ && erdos_gallai_check(cur_)) {
        best_ = cost;
        best_deg_ = cur_;
      }
      return;
    }
    for (std::uint32_t v : order_[i]) {
      const double c = cost + p_.cost(i, v);
      if (c >= best_) break;
      cur_[i] = v;
      search(i + 1, c);
    }
  }

  const Problem& p_;
  double best_;
  std::vector<std::uint32_t> best_deg_;
  std::vector<std::uint32_t> cur_;
  std::vector<std::vector<std::uint32_t>> order_;
};

IntraSolveReport make_report(const Problem& p, const AdjacencyGraph& g) {
  IntraSolveReport rep;
  rep.graph = g;
  const auto deg = g.degrees();
  rep.penalties.resize(p.m);
  for (std::uint32_t i = 0; i < p.m; ++i) {
    rep.penalties[i] = static_cast<std::uint32_t>(
        std::llabs(static_cast<std::int64_t>(deg[i]) - p.demand[i]));
  }
  rep.objective = objective_of(p, deg);
  return rep;
}

}  // namespace

std::vector<double> penalty_weights(const StepDistribution& prior,
                                    std::uint32_t max_degree) {
  std::vector<double> prob(max_degree + 1);
  double smallest = std::numeric_limits<double>::infinity();
  for (std::uint32_t k = 0; k <= max_degree; ++k) {
    prob[k] = prior.probability_at(static_cast<double>(k));
    if (prob[k] > 0.0) smallest = std::min(smallest, prob[k]);
  }
  if (!std::isfinite(smallest)) {
    throw Error("intra-rack graph",
                "degree prior has no mass on 0.." + std::to_string(max_degree));
  }
  std::vector<double> w(max_degree + 1);
  for (std::uint32_t k = 0; k <= max_degree; ++k) {
    w[k] = 1.0 / (prob[k] > 0.0 ? prob[k] : smallest);
  }
  return w;
}

IntraSolveReport solve_intra_rack(const DegreeSequence& d,
                                  const StepDistribution& degree_prior,
                                  IntraRackBackend backend) {
  std::uint32_t top = 0;
  for (auto v : d.degrees) top = std::max(top, v);
  const auto w = penalty_weights(degree_prior, top);
  return solve_intra_rack(d, w, backend);
}

IntraSolveReport solve_intra_rack(const DegreeSequence& d,
                                  std::span<const double> weights,
                                  IntraRackBackend backend) {
  Problem p;
  p.m = static_cast<std::uint32_t>(d.size());
  p.demand = d.degrees;
  for (auto v : d.degrees) {
    if (v >= weights.size()) {
      throw Error("intra-rack graph",
                  "no weight for demanded degree " + std::to_string(v));
    }
    if (!(weights[v] > 0.0)) {
      throw Error("intra-rack graph", "weights must be positive");
    }
    p.weight.push_back(weights[v]);
  }
  if (p.m == 0) return IntraSolveReport{AdjacencyGraph(0), {}, 0.0};

  if (backend == IntraRackBackend::kExact && p.m > 12) {
    throw Error("intra-rack graph", "exact backend limited to 12 nodes");
  }
  const bool exact = backend == IntraRackBackend::kExact ||
                     (backend == IntraRackBackend::kAuto &&
                      p.m <= kExactRackLimit);

  // Demands clipped to the rack: a degree of m or more cannot be met, the
  // clipped vector is still costed against the original demand.
  std::vector<std::uint32_t> target(p.demand);
  for (auto& t : target) t = std::min(t, p.m - 1);
  if (target == p.demand && erdos_gallai_check(target)) {
    auto g = havel_hakimi(DegreeSequence{target, DegreeKind::kIntra});
    return make_report(p, *g);
  }

  RackGraph g = greedy_start(p);
  local_search(p, g);
  if (!exact) return make_report(p, g.graph());

  const auto degs = DegreeVectorSearch(p, objective_of(p, g.degrees()),
                                       g.degrees())
                        .run();
  auto realized = havel_hakimi(DegreeSequence{degs, DegreeKind::kIntra});
  return make_report(p, *realized);
}

}  // namespace dcflowgen
