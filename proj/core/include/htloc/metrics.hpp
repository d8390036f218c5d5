#pragma once

// Socio-network measures over a line graph. Every vector returned here is
// indexed by line-graph node.

#include <cstddef>
#include <vector>

#include "htloc/error.hpp"
#include "htloc/graph.hpp"

namespace htloc {

enum class DegreeMode {
  // (in + out) / (N - 1)
  NeighbourFraction,
  // out-degree / total arc count, the row-sum-over-|A| form
  RowSumOverArcs,
};

enum class BetweennessMode {
  // sigma_jk(i) / sigma_jk
  Fractional,
  // 1 if any shortest j->k path passes through i
  Indicator,
};

struct PageRankOptions {
  double damping = 0.85;
  double tolerance = 1e-10;  // on the L1 change between iterates
  std::size_t max_iterations = 1000;
};

class PageRankError : public Error {
 public:
  PageRankError(std::size_t iterations, double residual);
  [[nodiscard]] double residual() const noexcept { return residual_; }

 private:
  double residual_;
};

struct EigenvectorResult {
  std::vector<double> values;  // L2-normalised, non-negative
  double eigenvalue = 0.0;     // spectral radius
  // Spectral radius below epsilon; values carry no ranking information.
  // Always true for acyclic graphs (nilpotent adjacency).
  bool degenerate = true;
};

struct MetricOptions {
  DegreeMode degree = DegreeMode::NeighbourFraction;
  BetweennessMode betweenness = BetweennessMode::Fractional;
  PageRankOptions pagerank;
  double eigenvector_epsilon = 1e-8;
};

struct NodeMetrics {
  std::vector<double> degree;       // C
  std::vector<double> closeness;    // CC
  std::vector<double> betweenness;  // BC
  std::vector<double> eigenvector;  // EVC
  std::vector<double> pagerank;     // PR
  double eigenvalue = 0.0;
  bool eigenvector_degenerate = true;

  [[nodiscard]] std::size_t size() const noexcept { return degree.size(); }
};

[[nodiscard]] std::vector<double> degree_centrality(const LineGraph& g,
                                                    DegreeMode mode = DegreeMode::NeighbourFraction);

// Wasserman-Faust closeness on incoming distances: with r nodes reaching i at
// total distance s, CC_i = (r / (N - 1)) * (r / s); 0 when r = 0.
[[nodiscard]] std::vector<double> closeness_centrality(const LineGraph& g);

// Normalised by N(N - 1). Brandes accumulation, parallel over sources.
[[nodiscard]] std::vector<double> betweenness_centrality(const LineGraph& g,
                                                         BetweennessMode mode = BetweennessMode::Fractional);

// Perron vector of the in-edge adjacency (x_i proportional to the sum of x_j
// over arcs j -> i).
[[nodiscard]] EigenvectorResult eigenvector_centrality(const LineGraph& g, double epsilon = 1e-8);

// Uniform teleport; dangling mass spread uniformly. Throws PageRankError if
// the L1 residual is still >= tolerance after max_iterations.
[[nodiscard]] std::vector<double> pagerank(const LineGraph& g, const PageRankOptions& options = {});

// Maximal induced subgraph whose total (in + out) degrees are all >= k.
// Sorted node indices.
[[nodiscard]] std::vector<std::size_t> k_core(const LineGraph& g, std::size_t k);

// |arcs| / (N (N - 1)); 0 for N <= 1.
[[nodiscard]] double density(const LineGraph& g);
[[nodiscard]] double density(const LineGraph& g, const std::vector<std::size_t>& nodes);

struct Subnetwork {
  std::vector<std::size_t> nodes;  // sorted
  double density = 0.0;
};

// Weakly connected components of the 1-core, least dense first; ties go to
// the component holding the smallest edge label.
[[nodiscard]] std::vector<Subnetwork> rank_subnetworks(const LineGraph& g);

[[nodiscard]] NodeMetrics compute_metrics(const LineGraph& g, const MetricOptions& options = {});

}  // namespace htloc
