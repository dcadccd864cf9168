#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "hofent/scalar.hpp"

namespace hofent {

/// Finite oriented graph with dense vertex ids, optional names and tags.
/// Edges are unique.
class OrientedGraph {
 public:
  explicit OrientedGraph(std::size_t n = 0);

  int add_vertex(std::string name = {}, std::vector<std::string> tags = {});
  /// Returns false if the edge was already present.
  bool add_edge(int from, int to);

  std::size_t size() const { return succ_.size(); }
  std::size_t edge_count() const { return edges_; }
  const std::vector<int>& successors(int v) const { return succ_.at(v); }
  bool has_edge(int from, int to) const;

  const std::string& name(int v) const { return names_.at(v); }
  void set_name(int v, std::string name) { names_.at(v) = std::move(name); }
  const std::vector<std::string>& tags(int v) const { return tags_.at(v); }
  void add_tag(int v, std::string tag);
  bool has_tag(int v, const std::string& tag) const;
  std::vector<int> tagged(const std::string& tag) const;
  /// Vertex with the given name, or its decimal id.
  int find(const std::string& name_or_id) const;

  /// Subgraph induced on `keep` (renumbered in the given order).
  OrientedGraph induced(const std::vector<int>& keep) const;

 private:
  std::vector<std::vector<int>> succ_;
  std::vector<std::string> names_;
  std::vector<std::vector<std::string>> tags_;
  std::size_t edges_ = 0;
};

/// Vertex sequence u_1..u_{p+1} with u_1 = u_{p+1}.
struct ClosedPath {
  std::vector<int> vertices;
  std::size_t length() const { return vertices.empty() ? 0 : vertices.size() - 1; }
  bool operator==(const ClosedPath&) const = default;
  auto operator<=>(const ClosedPath&) const = default;
};

/// Tarjan components in reverse topological order.
std::vector<std::vector<int>> strongly_connected_components(const OrientedGraph& g);
/// True when the component carries a closed path.
bool has_cycle(const OrientedGraph& g, const std::vector<int>& component);
bool is_strongly_connected(const OrientedGraph& g);

/// gcd of closed-path lengths; nullopt when the graph (component) is acyclic.
std::optional<long> period(const OrientedGraph& g);
std::optional<long> component_period(const OrientedGraph& g, const std::vector<int>& component);

/// #closed paths of length p at u.
BigInt count_closed(const OrientedGraph& g, int u, int p);
/// Entries for p = 1..p_max.
std::vector<BigInt> closed_counts(const OrientedGraph& g, int u, int p_max);
/// First returns at u by length 1..max_length.
std::vector<BigInt> first_return_counts(const OrientedGraph& g, int u, int max_length);
/// Closed paths at u all of whose first returns have length <= M.
BigInt count_closed_bounded(const OrientedGraph& g, int u, int p, int M);
std::vector<BigInt> closed_bounded_counts(const OrientedGraph& g, int u, int p_max, int M);

struct PhiDecomposition {
  ClosedPath short_returns;          // concatenation of first returns of length <= M
  ClosedPath long_returns;           // concatenation of the others
  std::vector<std::size_t> long_starts;  // 1-based positions where long returns start
  bool operator==(const PhiDecomposition&) const = default;
  auto operator<=>(const PhiDecomposition&) const = default;
};

PhiDecomposition phi_decompose(const ClosedPath& path, int u, int M);

struct GurevicEstimate {
  double estimate = 0.0;     // Aitken-accelerated ratio sequence
  double last_value = 0.0;   // last (1/p) log #closed paths
  long period = 1;
  std::vector<int> lengths;
  std::vector<BigInt> counts;
  std::vector<double> raw;     // (1/p) log count
  std::vector<double> ratios;  // log(count_p / count_{p-d}) / d
  bool lower_bound = false;    // graph not strongly connected
};

GurevicEstimate gurevic_entropy(const OrientedGraph& g, int u, int p_max);

/// log of the spectral radius, maximised over strongly connected components;
/// 0 for acyclic graphs (check `period` to distinguish).
double spectral_entropy(const OrientedGraph& g);
/// Spectral radius of one strongly connected component.
double component_spectral_radius(const OrientedGraph& g, const std::vector<int>& component);

struct ParryMeasure {
  double eigenvalue = 1.0;
  double entropy = 0.0;
  std::vector<double> vertex_prob;
  /// transition[v][j] is the probability of the edge v -> successors(v)[j].
  std::vector<std::vector<double>> transition;
};

inline constexpr double kEigenTol = 1e-12;

ParryMeasure parry_measure(const OrientedGraph& g);
/// Entropy rate of the Markov chain carried by the measure.
double markov_entropy(const OrientedGraph& g, const ParryMeasure& m);
double mass_on(const ParryMeasure& m, const std::vector<int>& vertices);

/// Average visit frequency of each vertex over all closed paths of length p.
std::vector<double> bowen_empirical(const OrientedGraph& g, int p);

struct ConvergenceViolation {
  std::size_t graph_index = 0;
  int vertex = -1;   // in the sequence graph
  int matched = -1;  // in the limit graph
  int p = 0;
  BigInt bounded_count, limit_count;
};

struct ConvergenceReport {
  bool success = true;
  std::optional<ConvergenceViolation> violation;
  std::vector<std::size_t> tagged_counts;
  std::size_t uniformity_bound = 0;
};

/// For every vertex tagged `tag` in each graph of the sequence, checks
/// #bounded closed paths (returns <= M) <= #closed paths at the matched
/// limit vertex for p <= p_max. `matching[n][v]` names the limit vertex of v
/// in graph n; without a matching every limit vertex is tried and the most
/// durable candidate is used. The reported violation is the one at the
/// smallest p.
ConvergenceReport check_convergence(const std::vector<OrientedGraph>& sequence,
                                    const OrientedGraph& limit, const std::string& tag, int M,
                                    int p_max,
                                    const std::vector<std::vector<int>>* matching = nullptr);

}  // namespace hofent
