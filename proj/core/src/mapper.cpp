#include "dcflowgen/mapper.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>

#include "dcflowgen/compare.hpp"
#include "dcflowgen/error.hpp"

namespace dcflowgen {
namespace {

// Flows tried by direct stepping before the closed-form lap jump.
constexpr std::size_t kDirectSteps = 4096;

class Fenwick {
 public:
  explicit Fenwick(std::span<const std::uint64_t> w)
      : tree_(w.size() + 1, 0), values_(w.begin(), w.end()) {
    for (std::size_t i = 0; i < w.size(); ++i) add(i, w[i]);
  }
  std::uint64_t total() const { return total_; }
  std::uint64_t value(std::size_t i) const { return values_[i]; }
  void set(std::size_t i, std::uint64_t v) {
    if (v >= values_[i]) {
      add(i, v - values_[i]);
    } else {
      sub(i, values_[i] - v);
    }
    values_[i] = v;
  }
  // Smallest index whose prefix sum exceeds target (target < total()).
  std::size_t find(std::uint64_t target) const {
    std::size_t pos = 0;
    std::size_t step = 1;
    while (step * 2 < tree_.size()) step *= 2;
    for (; step > 0; step /= 2) {
      if (pos + step < tree_.size() && tree_[pos + step] <= target) {
        pos += step;
        target -= tree_[pos];
      }
    }
    return pos;
  }

 private:
  void add(std::size_t i, std::uint64_t d) {
    total_ += d;
    for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] += d;
  }
  void sub(std::size_t i, std::uint64_t d) {
    total_ -= d;
    for (++i; i < tree_.size(); i += i & (~i + 1)) tree_[i] -= d;
  }

  std::vector<std::uint64_t> tree_;
  std::vector<std::uint64_t> values_;
  std::uint64_t total_ = 0;
};

void check_inputs(const TrafficMatrix& tm) {
  if (tm.empty()) throw Error("mapper", "traffic matrix has no entries");
}

// Credits and residuals are whole bytes so that stepping and lap jumps
// produce identical states.
struct DrrState {
  std::vector<std::uint64_t> original;
  std::vector<std::uint64_t> residual;
  std::vector<std::uint64_t> credit;
  // Lazy max-heap of (residual, index); stale tops are dropped on read.
  std::vector<std::pair<std::uint64_t, std::size_t>> heap;
  std::size_t cursor = 0;
  double alpha;
  std::uint64_t omega;

  // Residuals start at the entries rescaled to the flow total, so the
  // volume imbalance is spread over all pairs in proportion to their entries
  // instead of landing on whichever pairs come last.
  DrrState(const TrafficMatrix& tm, std::span<const UnmappedFlow> flows,
           const DrrParams& p)
      : credit(tm.nonzero_count(), 0), alpha(p.alpha) {
    if (!(p.alpha > 0.0) || !(p.omega > 0.0)) {
      throw Error("mapper", "alpha and omega must be positive");
    }
    omega = static_cast<std::uint64_t>(std::ceil(p.omega));
    double s_f = 0.0;
    for (const auto& f : flows) s_f += static_cast<double>(f.size);
    const double ratio = s_f / static_cast<double>(tm.total_bytes());
    for (const auto& e : tm.entries()) {
      original.push_back(static_cast<std::uint64_t>(
          std::llround(static_cast<double>(e.bytes) * ratio)));
    }
    residual = original;
    rebuild_heap();
  }

  void rebuild_heap() {
    heap.clear();
    for (std::size_t q = 0; q < residual.size(); ++q) {
      heap.emplace_back(residual[q], q);
    }
    std::make_heap(heap.begin(), heap.end());
  }

  std::uint64_t max_residual() {
    while (heap.front().first != residual[heap.front().second]) {
      std::pop_heap(heap.begin(), heap.end());
      heap.back().first = residual[heap.back().second];
      std::push_heap(heap.begin(), heap.end());
    }
    return heap.front().first;
  }

  // A flow larger than every cap could never be placed. Each refill adds the
  // original entries back onto the residuals, like map_random's reset.
  void ensure_placeable(std::uint64_t s) {
    while (s > max_residual()) {
      for (std::size_t q = 0; q < residual.size(); ++q) {
        residual[q] += original[q];
      }
      rebuild_heap();
    }
  }

  std::uint64_t increment(std::size_t q) const {
    const auto a = static_cast<std::uint64_t>(
        std::floor(alpha * static_cast<double>(residual[q])));
    return std::max(a, omega);
  }

  std::uint64_t cap(std::size_t q) const { return residual[q]; }

  // Credit after `visits` unsuccessful inspections.
  std::uint64_t grown(std::size_t q, std::uint64_t visits) const {
    const std::uint64_t c = cap(q);
    if (credit[q] >= c) return credit[q];
    return (c - credit[q]) / increment(q) < visits
               ? c
               : std::min(c, credit[q] + visits * increment(q));
  }

  void raise(std::size_t q) { credit[q] = grown(q, 1); }

  void assign(std::size_t q, std::uint64_t s) {
    credit[q] -= s;
    residual[q] = residual[q] > s ? residual[q] - s : 0;
  }

  // One inspection of the pair at the cursor: place the flow if the credit
  // covers it, then raise the credit and move on either way.
  bool step(std::uint64_t s) {
    const std::size_t q = cursor;
    const bool placed = credit[q] >= s;
    if (placed) assign(q, s);
    raise(q);
    cursor = (cursor + 1) % credit.size();
    return placed;
  }

  // Equivalent to calling step() until it succeeds, in O(P) time. Requires
  // ensure_placeable(s).
  std::size_t jump(std::uint64_t s) {
    const std::size_t p = credit.size();
    std::uint64_t best_t = UINT64_MAX;
    for (std::size_t o = 0; o < p; ++o) {
      const std::size_t q = (cursor + o) % p;
      std::uint64_t j = 0;
      if (credit[q] < s) {
        if (cap(q) < s) continue;
        const std::uint64_t inc = increment(q);
        j = (s - credit[q] + inc - 1) / inc;
      }
      const std::uint64_t t = j * p + o;
      if (t < best_t) best_t = t;
    }
    for (std::size_t o = 0; o < p; ++o) {
      const std::size_t q = (cursor + o) % p;
      const std::uint64_t visits = o < best_t ? (best_t - o - 1) / p + 1 : 0;
      credit[q] = grown(q, visits);
    }
    const std::size_t q = static_cast<std::size_t>((cursor + best_t) % p);
    assign(q, s);
    raise(q);
    cursor = (q + 1) % p;
    return q;
  }
};

std::vector<std::size_t> random_order(std::size_t n, Rng& rng) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  rng.shuffle(order);
  return order;
}

MappedFlow to_mapped(const UnmappedFlow& f, const TmEntry& e) {
  return MappedFlow{f.start_time, e.src, e.dst, f.size};
}

}  // namespace

std::vector<MappedFlow> map_random(std::span<const UnmappedFlow> flows,
                                   const TrafficMatrix& tm, Rng& rng) {
  check_inputs(tm);
  const auto entries = tm.entries();
  std::vector<std::uint64_t> original;
  original.reserve(entries.size());
  for (const auto& e : entries) original.push_back(e.bytes);
  Fenwick weights(original);

  std::vector<MappedFlow> out;
  out.reserve(flows.size());
  for (const auto& f : flows) {
    if (weights.total() == 0) weights = Fenwick(original);
    const std::size_t q = weights.find(rng.below(weights.total()));
    const std::uint64_t w = weights.value(q);
    weights.set(q, w > f.size ? w - f.size : 0);
    out.push_back(to_mapped(f, entries[q]));
  }
  return out;
}

std::vector<MappedFlow> map_drr(std::span<const UnmappedFlow> flows,
                                const TrafficMatrix& tm, Rng& rng,
                                const DrrParams& params) {
  check_inputs(tm);
  DrrState st(tm, flows, params);
  const auto entries = tm.entries();
  std::vector<MappedFlow> out(flows.size());
  for (std::size_t i : random_order(flows.size(), rng)) {
    const std::uint64_t s = flows[i].size;
    st.ensure_placeable(s);
    bool placed = false;
    std::size_t q = 0;
    for (std::size_t k = 0; k < kDirectSteps && !placed; ++k) {
      q = st.cursor;
      placed = st.step(s);
    }
    if (!placed) q = st.jump(s);
    out[i] = to_mapped(flows[i], entries[q]);
  }
  return out;
}

std::vector<MappedFlow> map_drr_stepwise(std::span<const UnmappedFlow> flows,
                                         const TrafficMatrix& tm, Rng& rng,
                                         const DrrParams& params) {
  check_inputs(tm);
  DrrState st(tm, flows, params);
  const auto entries = tm.entries();
  std::vector<MappedFlow> out(flows.size());
  for (std::size_t i : random_order(flows.size(), rng)) {
    st.ensure_placeable(flows[i].size);
    std::size_t q = st.cursor;
    while (!st.step(flows[i].size)) q = st.cursor;
    out[i] = to_mapped(flows[i], entries[q]);
  }
  return out;
}

std::vector<MappedFlow> map_flows(std::span<const UnmappedFlow> flows,
                                  const TrafficMatrix& tm, Rng& rng,
                                  MapperStrategy strategy,
                                  const DrrParams& params) {
  return strategy == MapperStrategy::kDrr ? map_drr(flows, tm, rng, params)
                                          : map_random(flows, tm, rng);
}

TrafficMatrix realized_matrix(const TrafficMatrix& tm,
                              std::span<const MappedFlow> mapped) {
  std::vector<TmEntry> entries;
  entries.reserve(mapped.size());
  for (const auto& f : mapped) entries.push_back({f.src, f.dst, f.size});
  return TrafficMatrix::from_entries(tm.layout(), std::move(entries),
                                     tm.epoch_length());
}

double mapping_quality(const TrafficMatrix& tm,
                       std::span<const MappedFlow> mapped) {
  return topsoe_distance(tm, realized_matrix(tm, mapped));
}

}  // namespace dcflowgen
