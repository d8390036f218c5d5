#include "htloc/metrics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "htloc/parallel.hpp"

namespace htloc {

namespace {

// Sources per block. Fixed so that the reduction order, and therefore every
// floating-point sum, is independent of the thread count.
constexpr std::size_t kSourceBlock = 32;

std::size_t block_count(std::size_t n) { return (n + kSourceBlock - 1) / kSourceBlock; }

// Sums per-block partial vectors in block order.
std::vector<double> reduce_blocks(const std::vector<std::vector<double>>& partials, std::size_t n) {
  std::vector<double> total(n, 0.0);
  for (const auto& p : partials) {
    for (std::size_t i = 0; i < n; ++i) total[i] += p[i];
  }
  return total;
}

struct BfsScratch {
  std::vector<std::size_t> order;
  std::vector<std::int64_t> dist;
  std::vector<double> sigma;
  std::vector<double> delta;

  explicit BfsScratch(std::size_t n) : dist(n, -1), sigma(n, 0.0), delta(n, 0.0) { order.reserve(n); }

  void run(const AdjacencyList& succ, std::size_t source) {
    for (const auto v : order) {
      dist[v] = -1;
      sigma[v] = 0.0;
      delta[v] = 0.0;
    }
    order.clear();
    dist[source] = 0;
    sigma[source] = 1.0;
    order.push_back(source);
    for (std::size_t head = 0; head < order.size(); ++head) {
      const auto v = order[head];
      for (const auto w : succ[v]) {
        if (dist[w] < 0) {
          dist[w] = dist[v] + 1;
          order.push_back(w);
        }
        if (dist[w] == dist[v] + 1) sigma[w] += sigma[v];
      }
    }
  }
};

void accumulate_fractional(const LineGraph& g, std::size_t source, BfsScratch& s, std::vector<double>& out) {
  s.run(g.successors(), source);
  for (auto it = s.order.rbegin(); it != s.order.rend(); ++it) {
    const auto w = *it;
    for (const auto v : g.predecessors()[w]) {
      if (s.dist[v] >= 0 && s.dist[v] + 1 == s.dist[w]) s.delta[v] += s.sigma[v] / s.sigma[w] * (1.0 + s.delta[w]);
    }
    if (w != source) out[w] += s.delta[w];
  }
}

// For every node i, counts targets t such that i lies on some shortest
// source -> t path (i != source, i != t), using descendant bitsets over the
// shortest-path DAG.
void accumulate_indicator(const LineGraph& g, std::size_t source, BfsScratch& s,
                          std::vector<std::uint64_t>& bits, std::vector<double>& out) {
  s.run(g.successors(), source);
  const auto n = g.size();
  const auto words = (n + 63) / 64;
  for (const auto v : s.order) std::fill_n(bits.begin() + static_cast<std::ptrdiff_t>(v * words), words, 0);
  for (auto it = s.order.rbegin(); it != s.order.rend(); ++it) {
    const auto w = *it;
    const auto* wb = bits.data() + w * words;
    for (const auto v : g.predecessors()[w]) {
      if (s.dist[v] >= 0 && s.dist[v] + 1 == s.dist[w]) {
        auto* vb = bits.data() + v * words;
        for (std::size_t k = 0; k < words; ++k) vb[k] |= wb[k];
        vb[w / 64] |= std::uint64_t{1} << (w % 64);
      }
    }
    if (w != source) {
      std::size_t count = 0;
      for (std::size_t k = 0; k < words; ++k) count += static_cast<std::size_t>(std::popcount(wb[k]));
      out[w] += static_cast<double>(count);
    }
  }
}

}  // namespace

PageRankError::PageRankError(std::size_t iterations, double residual)
    : Error("pagerank did not converge in " + std::to_string(iterations) +
            " iterations (residual " + std::to_string(residual) + ")"),
      residual_(residual) {}

std::vector<double> degree_centrality(const LineGraph& g, DegreeMode mode) {
  const auto n = g.size();
  std::vector<double> c(n, 0.0);
  if (mode == DegreeMode::RowSumOverArcs) {
    if (g.arc_count() == 0) return c;
    for (std::size_t i = 0; i < n; ++i) {
      c[i] = static_cast<double>(g.out_degree(i)) / static_cast<double>(g.arc_count());
    }
    return c;
  }
  if (n <= 1) return c;
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = static_cast<double>(g.in_degree(i) + g.out_degree(i)) / static_cast<double>(n - 1);
  }
  return c;
}

std::vector<double> closeness_centrality(const LineGraph& g) {
  const auto n = g.size();
  std::vector<double> cc(n, 0.0);
  if (n <= 1) return cc;
  parallel_for_blocks(block_count(n), [&](std::size_t block) {
    std::vector<std::int64_t> dist(n, -1);
    std::vector<std::size_t> queue;
    queue.reserve(n);
    const auto end = std::min(n, (block + 1) * kSourceBlock);
    for (auto target = block * kSourceBlock; target < end; ++target) {
      for (const auto v : queue) dist[v] = -1;
      queue.assign(1, target);
      dist[target] = 0;
      std::int64_t total = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        const auto v = queue[head];
        total += dist[v];
        for (const auto u : g.predecessors()[v]) {
          if (dist[u] < 0) {
            dist[u] = dist[v] + 1;
            queue.push_back(u);
          }
        }
      }
      const auto reach = static_cast<double>(queue.size() - 1);
      if (total > 0) cc[target] = (reach / static_cast<double>(n - 1)) * (reach / static_cast<double>(total));
    }
  });
  return cc;
}

std::vector<double> betweenness_centrality(const LineGraph& g, BetweennessMode mode) {
  const auto n = g.size();
  if (n < 2) return std::vector<double>(n, 0.0);
  const auto blocks = block_count(n);
  std::vector<std::vector<double>> partials(blocks);
  parallel_for_blocks(blocks, [&](std::size_t block) {
    auto& out = partials[block];
    out.assign(n, 0.0);
    BfsScratch scratch(n);
    std::vector<std::uint64_t> bits;
    if (mode == BetweennessMode::Indicator) bits.assign(n * ((n + 63) / 64), 0);
    const auto end = std::min(n, (block + 1) * kSourceBlock);
    for (auto source = block * kSourceBlock; source < end; ++source) {
      if (mode == BetweennessMode::Fractional) {
        accumulate_fractional(g, source, scratch, out);
      } else {
        accumulate_indicator(g, source, scratch, bits, out);
      }
    }
  });
  auto bc = reduce_blocks(partials, n);
  const auto norm = 1.0 / (static_cast<double>(n) * static_cast<double>(n - 1));
  for (auto& v : bc) v *= norm;
  return bc;
}

EigenvectorResult eigenvector_centrality(const LineGraph& g, double epsilon) {
  const auto n = g.size();
  EigenvectorResult result;
  result.values.assign(n, 0.0);
  if (n == 0 || is_acyclic(g.successors())) return result;

  // Power iteration on (A^T + I): same eigenvectors, and the shift removes
  // the periodicity of cycles.
  std::vector<double> x(n, 1.0 / std::sqrt(static_cast<double>(n)));
  std::vector<double> next(n);
  constexpr std::size_t kMaxIterations = 100000;
  constexpr double kTolerance = 1e-13;
  for (std::size_t iter = 0; iter < kMaxIterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) {
      double acc = x[i];
      for (const auto j : g.predecessors()[i]) acc += x[j];
      next[i] = acc;
    }
    double norm = 0.0;
    for (const auto v : next) norm += v * v;
    norm = std::sqrt(norm);
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] /= norm;
      change += std::abs(next[i] - x[i]);
    }
    x.swap(next);
    if (change < kTolerance) break;
  }
  // Rayleigh quotient of A^T at the converged vector (x has unit norm).
  double lambda = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (const auto j : g.predecessors()[i]) acc += x[j];
    lambda += x[i] * acc;
  }
  result.eigenvalue = lambda;
  result.degenerate = lambda < epsilon;
  result.values = std::move(x);
  return result;
}

std::vector<double> pagerank(const LineGraph& g, const PageRankOptions& options) {
  const auto n = g.size();
  if (n == 0) return {};
  if (!(options.damping > 0.0 && options.damping < 1.0)) throw Error("pagerank damping must lie in (0, 1)");
  const auto nd = static_cast<double>(n);
  const auto d = options.damping;
  std::vector<double> x(n, 1.0 / nd);
  std::vector<double> next(n);
  double residual = 0.0;
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    double dangling = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (g.out_degree(j) == 0) dangling += x[j];
    }
    const auto base = (1.0 - d) / nd + d * dangling / nd;
    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (const auto j : g.predecessors()[i]) acc += x[j] / static_cast<double>(g.out_degree(j));
      next[i] = base + d * acc;
    }
    residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) residual += std::abs(next[i] - x[i]);
    x.swap(next);
    if (residual < options.tolerance) return x;
  }
  throw PageRankError(options.max_iterations, residual);
}

std::vector<std::size_t> k_core(const LineGraph& g, std::size_t k) {
  const auto n = g.size();
  std::vector<std::size_t> degree(n);
  for (std::size_t i = 0; i < n; ++i) degree[i] = g.in_degree(i) + g.out_degree(i);
  std::vector<char> removed(n, 0);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < n; ++i) {
    if (degree[i] < k) {
      removed[i] = 1;
      stack.push_back(i);
    }
  }
  auto drop = [&](std::size_t j) {
    if (!removed[j] && --degree[j] < k) {
      removed[j] = 1;
      stack.push_back(j);
    }
  };
  while (!stack.empty()) {
    const auto v = stack.back();
    stack.pop_back();
    for (const auto w : g.successors()[v]) drop(w);
    for (const auto w : g.predecessors()[v]) drop(w);
  }
  std::vector<std::size_t> core;
  for (std::size_t i = 0; i < n; ++i) {
    if (!removed[i]) core.push_back(i);
  }
  return core;
}

double density(const LineGraph& g) {
  const auto n = static_cast<double>(g.size());
  if (g.size() <= 1) return 0.0;
  return static_cast<double>(g.arc_count()) / (n * (n - 1.0));
}

double density(const LineGraph& g, const std::vector<std::size_t>& nodes) { return density(g.induced(nodes)); }

std::vector<Subnetwork> rank_subnetworks(const LineGraph& g) {
  const auto core = k_core(g, 1);
  std::vector<std::size_t> parent(g.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  };
  std::vector<char> in_core(g.size(), 0);
  for (const auto v : core) in_core[v] = 1;
  for (const auto& [from, to] : g.arcs()) {
    if (in_core[from] && in_core[to]) {
      const auto a = find(from);
      const auto b = find(to);
      if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
  }
  std::vector<Subnetwork> out;
  std::vector<std::size_t> slot(g.size(), static_cast<std::size_t>(-1));
  for (const auto v : core) {
    const auto root = find(v);
    if (slot[root] == static_cast<std::size_t>(-1)) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].nodes.push_back(v);
  }
  for (auto& s : out) s.density = density(g, s.nodes);
  auto smallest_label = [&](const Subnetwork& s) {
    std::uint32_t m = UINT32_MAX;
    for (const auto v : s.nodes) m = std::min(m, g.node(v).label);
    return m;
  };
  std::stable_sort(out.begin(), out.end(), [&](const Subnetwork& a, const Subnetwork& b) {
    if (a.density != b.density) return a.density < b.density;
    return smallest_label(a) < smallest_label(b);
  });
  return out;
}

NodeMetrics compute_metrics(const LineGraph& g, const MetricOptions& options) {
  NodeMetrics m;
  m.degree = degree_centrality(g, options.degree);
  m.closeness = closeness_centrality(g);
  m.betweenness = betweenness_centrality(g, options.betweenness);
  auto evc = eigenvector_centrality(g, options.eigenvector_epsilon);
  m.eigenvector = std::move(evc.values);
  m.eigenvalue = evc.eigenvalue;
  m.eigenvector_degenerate = evc.degenerate;
  m.pagerank = pagerank(g, options.pagerank);
  return m;
}

}  // namespace htloc
