#include "hofent/graphs.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <numeric>

#include "hofent/error.hpp"

namespace hofent {

// ---------------------------------------------------------------- graph

OrientedGraph::OrientedGraph(std::size_t n) : succ_(n), names_(n), tags_(n) {}

int OrientedGraph::add_vertex(std::string name, std::vector<std::string> tags) {
  succ_.emplace_back();
  names_.push_back(std::move(name));
  tags_.push_back(std::move(tags));
  return static_cast<int>(succ_.size() - 1);
}

bool OrientedGraph::add_edge(int from, int to) {
  if (from < 0 || to < 0 || std::size_t(from) >= size() || std::size_t(to) >= size())
    throw InvalidArgument("edge endpoint does not exist");
  auto& out = succ_[from];
  if (std::find(out.begin(), out.end(), to) != out.end()) return false;
  out.push_back(to);
  ++edges_;
  return true;
}

bool OrientedGraph::has_edge(int from, int to) const {
  const auto& out = succ_.at(from);
  return std::find(out.begin(), out.end(), to) != out.end();
}

void OrientedGraph::add_tag(int v, std::string tag) {
  if (!has_tag(v, tag)) tags_.at(v).push_back(std::move(tag));
}

bool OrientedGraph::has_tag(int v, const std::string& tag) const {
  const auto& t = tags_.at(v);
  return std::find(t.begin(), t.end(), tag) != t.end();
}

std::vector<int> OrientedGraph::tagged(const std::string& tag) const {
  std::vector<int> out;
  for (std::size_t v = 0; v < size(); ++v)
    if (has_tag(int(v), tag)) out.push_back(int(v));
  return out;
}

int OrientedGraph::find(const std::string& key) const {
  for (std::size_t v = 0; v < size(); ++v)
    if (names_[v] == key) return int(v);
  if (!key.empty() && std::all_of(key.begin(), key.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    unsigned long id = std::stoul(key);
    if (id < size()) return int(id);
  }
  throw InvalidArgument("unknown vertex '" + key + "'");
}

OrientedGraph OrientedGraph::induced(const std::vector<int>& keep) const {
  OrientedGraph sub;
  std::vector<int> local(size(), -1);
  for (int v : keep) local.at(v) = sub.add_vertex(names_.at(v), tags_.at(v));
  for (int v : keep)
    for (int w : succ_[v])
      if (local[w] >= 0) sub.add_edge(local[v], local[w]);
  return sub;
}

// ---------------------------------------------------------------- structure

std::vector<std::vector<int>> strongly_connected_components(const OrientedGraph& g) {
  const int n = int(g.size());
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<char> on_stack(n, 0);
  std::vector<std::vector<int>> comps;
  int counter = 0;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (int w : g.successors(v)) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<int> comp;
      int w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  };
  for (int v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);
  return comps;
}

bool has_cycle(const OrientedGraph& g, const std::vector<int>& component) {
  if (component.size() > 1) return true;
  return !component.empty() && g.has_edge(component[0], component[0]);
}

bool is_strongly_connected(const OrientedGraph& g) {
  return g.size() > 0 && strongly_connected_components(g).size() == 1;
}

std::optional<long> component_period(const OrientedGraph& g, const std::vector<int>& component) {
  if (!has_cycle(g, component)) return std::nullopt;
  std::vector<long> level(g.size(), -1);
  std::vector<char> inside(g.size(), 0);
  for (int v : component) inside[v] = 1;
  std::vector<int> queue{component[0]};
  level[component[0]] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    int v = queue[head];
    for (int w : g.successors(v))
      if (inside[w] && level[w] < 0) {
        level[w] = level[v] + 1;
        queue.push_back(w);
      }
  }
  long d = 0;
  for (int v : component)
    for (int w : g.successors(v))
      if (inside[w]) d = std::gcd(d, std::labs(level[v] + 1 - level[w]));
  return d;
}

std::optional<long> period(const OrientedGraph& g) {
  long d = 0;
  for (const auto& comp : strongly_connected_components(g))
    if (auto p = component_period(g, comp)) d = std::gcd(d, *p);
  if (d == 0) return std::nullopt;
  return d;
}

// ---------------------------------------------------------------- counting

namespace {

void check_vertex(const OrientedGraph& g, int u) {
  if (u < 0 || std::size_t(u) >= g.size()) throw InvalidArgument("vertex out of range");
}

std::vector<BigInt> step(const OrientedGraph& g, const std::vector<BigInt>& cur) {
  std::vector<BigInt> next(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) {
    if (sgn(cur[v]) == 0) continue;
    for (int w : g.successors(int(v))) next[w] += cur[v];
  }
  return next;
}

}  // namespace

std::vector<BigInt> closed_counts(const OrientedGraph& g, int u, int p_max) {
  check_vertex(g, u);
  std::vector<BigInt> out;
  std::vector<BigInt> cur(g.size());
  cur[u] = 1;
  for (int p = 1; p <= p_max; ++p) {
    cur = step(g, cur);
    out.push_back(cur[u]);
  }
  return out;
}

BigInt count_closed(const OrientedGraph& g, int u, int p) {
  if (p < 1) throw InvalidArgument("path length must be >= 1");
  return closed_counts(g, u, p).back();
}

std::vector<BigInt> first_return_counts(const OrientedGraph& g, int u, int max_length) {
  check_vertex(g, u);
  if (max_length < 1) throw InvalidArgument("max_length must be >= 1");
  std::vector<BigInt> out(max_length);
  std::vector<BigInt> cur(g.size());
  cur[u] = 1;
  for (int len = 1; len <= max_length; ++len) {
    std::vector<BigInt> next = step(g, cur);
    out[len - 1] = next[u];
    next[u] = 0;
    cur = std::move(next);
  }
  return out;
}

std::vector<BigInt> closed_bounded_counts(const OrientedGraph& g, int u, int p_max, int M) {
  if (M < 1) throw InvalidArgument("return bound M must be >= 1");
  if (p_max < 1) return {};
  auto f = first_return_counts(g, u, std::min(p_max, M));
  std::vector<BigInt> c(p_max + 1);
  c[0] = 1;
  for (int p = 1; p <= p_max; ++p)
    for (int q = 1; q <= std::min(p, M); ++q) c[p] += f[q - 1] * c[p - q];
  return {c.begin() + 1, c.end()};
}

BigInt count_closed_bounded(const OrientedGraph& g, int u, int p, int M) {
  if (p < 1) throw InvalidArgument("path length must be >= 1");
  return closed_bounded_counts(g, u, p, M).back();
}

PhiDecomposition phi_decompose(const ClosedPath& path, int u, int M) {
  const auto& v = path.vertices;
  if (v.empty() || v.front() != u || v.back() != u)
    throw InvalidArgument("path is not closed at the given vertex");
  PhiDecomposition out;
  out.short_returns.vertices = {u};
  out.long_returns.vertices = {u};
  std::size_t start = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (v[i] != u) continue;
    const std::size_t len = i - start;
    auto& target = len <= std::size_t(M) ? out.short_returns : out.long_returns;
    target.vertices.insert(target.vertices.end(), v.begin() + long(start) + 1, v.begin() + long(i) + 1);
    if (len > std::size_t(M)) out.long_starts.push_back(start + 1);
    start = i;
  }
  return out;
}

// ---------------------------------------------------------------- entropy

GurevicEstimate gurevic_entropy(const OrientedGraph& g, int u, int p_max) {
  check_vertex(g, u);
  const std::vector<int>* home = nullptr;
  auto comps = strongly_connected_components(g);
  for (const auto& c : comps)
    if (std::binary_search(c.begin(), c.end(), u)) home = &c;
  auto d = component_period(g, *home);
  if (!d) throw NoCycleError("vertex lies on no closed path");

  GurevicEstimate est;
  est.period = *d;
  est.lower_bound = comps.size() > 1;
  auto counts = closed_counts(g, u, p_max);
  for (int p = int(*d); p <= p_max; p += int(*d)) {
    est.lengths.push_back(p);
    est.counts.push_back(counts[p - 1]);
    est.raw.push_back(log_bigint(counts[p - 1]) / p);
  }
  if (est.raw.empty()) throw InvalidArgument("p_max is shorter than the period");
  est.last_value = est.raw.back();
  for (std::size_t j = 1; j < est.counts.size(); ++j)
    est.ratios.push_back((log_bigint(est.counts[j]) - log_bigint(est.counts[j - 1])) / double(*d));
  const auto& x = est.ratios;
  if (x.size() >= 3) {
    double a = x[x.size() - 3], b = x[x.size() - 2], c = x[x.size() - 1];
    double denom = c - 2 * b + a;
    est.estimate = std::abs(denom) > 1e-14 ? c - (c - b) * (c - b) / denom : c;
  } else {
    est.estimate = x.empty() ? est.last_value : x.back();
  }
  return est;
}

namespace {

struct Perron {
  double eigenvalue = 0.0;
  std::vector<double> vector;
};

// Perron root and positive eigenvector of an irreducible 0/1 matrix given by
// adjacency lists: the left vector (x -> xA) or, with `transpose`, the right
// one. Power iteration runs on A + I, which is primitive.
Perron perron(const std::vector<std::vector<int>>& adj, bool transpose) {
  const std::size_t n = adj.size();
  std::vector<double> x(n, 1.0 / double(n)), y(n);
  double lambda = 0.0;
  bool converged = false;
  for (int it = 0; it < 50000; ++it) {
    y = x;
    for (std::size_t v = 0; v < n; ++v)
      for (int w : adj[v]) {
        if (transpose) y[v] += x[w];
        else y[w] += x[v];
      }
    double total = std::accumulate(y.begin(), y.end(), 0.0);
    double diff = 0.0, peak = 0.0;
    for (std::size_t v = 0; v < n; ++v) {
      y[v] /= total;
      diff = std::max(diff, std::abs(y[v] - x[v]));
      peak = std::max(peak, y[v]);
    }
    x.swap(y);
    double next = total - 1.0;
    if (diff <= 1e-14 * peak && std::abs(next - lambda) <= 1e-13 * std::max(1.0, next)) {
      lambda = next;
      converged = true;
      break;
    }
    lambda = next;
  }
  if (converged) return {lambda, x};

  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(long(n), long(n));
  for (std::size_t v = 0; v < n; ++v)
    for (int w : adj[v]) {
      if (transpose) A(long(w), long(v)) = 1.0;
      else A(long(v), long(w)) = 1.0;
    }
  Eigen::EigenSolver<Eigen::MatrixXd> solver(A.transpose());
  long best = 0;
  for (long i = 1; i < long(n); ++i)
    if (solver.eigenvalues()[i].real() > solver.eigenvalues()[best].real()) best = i;
  Eigen::VectorXd vec = solver.eigenvectors().col(best).real().cwiseAbs();
  vec /= vec.sum();
  return {solver.eigenvalues()[best].real(), {vec.data(), vec.data() + n}};
}

std::vector<std::vector<int>> local_adjacency(const OrientedGraph& g, const std::vector<int>& comp) {
  std::vector<int> local(g.size(), -1);
  for (std::size_t i = 0; i < comp.size(); ++i) local[comp[i]] = int(i);
  std::vector<std::vector<int>> adj(comp.size());
  for (std::size_t i = 0; i < comp.size(); ++i)
    for (int w : g.successors(comp[i]))
      if (local[w] >= 0) adj[i].push_back(local[w]);
  return adj;
}

}  // namespace

double component_spectral_radius(const OrientedGraph& g, const std::vector<int>& component) {
  if (!has_cycle(g, component)) return 0.0;
  return perron(local_adjacency(g, component), false).eigenvalue;
}

double spectral_entropy(const OrientedGraph& g) {
  double best = 0.0;
  for (const auto& comp : strongly_connected_components(g))
    if (has_cycle(g, comp)) best = std::max(best, std::log(component_spectral_radius(g, comp)));
  return best;
}

ParryMeasure parry_measure(const OrientedGraph& g) {
  auto comps = strongly_connected_components(g);
  if (comps.size() != 1) throw ConnectivityError("graph is not strongly connected");
  if (!has_cycle(g, comps[0])) throw NoCycleError("graph has no closed path");
  std::vector<std::vector<int>> adj(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) adj[v] = g.successors(int(v));
  Perron left = perron(adj, false);
  Perron right = perron(adj, true);
  const auto& l = left.vector;
  const auto& r = right.vector;

  ParryMeasure m;
  m.eigenvalue = left.eigenvalue;
  m.entropy = std::log(m.eigenvalue);
  double total = 0.0;
  m.vertex_prob.resize(g.size());
  for (std::size_t v = 0; v < g.size(); ++v) total += m.vertex_prob[v] = l[v] * r[v];
  for (double& p : m.vertex_prob) p /= total;
  m.transition.resize(g.size());
  for (std::size_t v = 0; v < g.size(); ++v)
    for (int w : g.successors(int(v))) m.transition[v].push_back(r[w] / (m.eigenvalue * r[v]));
  return m;
}

double markov_entropy(const OrientedGraph& g, const ParryMeasure& m) {
  double h = 0.0;
  for (std::size_t v = 0; v < g.size(); ++v)
    for (double p : m.transition[v])
      if (p > 0.0) h -= m.vertex_prob[v] * p * std::log(p);
  return h;
}

double mass_on(const ParryMeasure& m, const std::vector<int>& vertices) {
  double total = 0.0;
  for (int v : vertices) total += m.vertex_prob.at(v);
  return total;
}

std::vector<double> bowen_empirical(const OrientedGraph& g, int p) {
  if (p < 1) throw InvalidArgument("path length must be >= 1");
  std::vector<BigInt> diag(g.size());
  BigInt trace = 0;
  for (std::size_t v = 0; v < g.size(); ++v) {
    diag[v] = count_closed(g, int(v), p);
    trace += diag[v];
  }
  if (sgn(trace) == 0) throw NoCycleError("no closed path of length " + std::to_string(p));
  std::vector<double> out;
  for (const auto& c : diag) out.push_back(Rational(c, trace).get_d());
  return out;
}

// ---------------------------------------------------------------- convergence

ConvergenceReport check_convergence(const std::vector<OrientedGraph>& sequence,
                                    const OrientedGraph& limit, const std::string& tag, int M,
                                    int p_max, const std::vector<std::vector<int>>* matching) {
  if (p_max < 1) throw InvalidArgument("p_max must be >= 1");
  if (matching && matching->size() != sequence.size())
    throw InvalidArgument("matching must cover every graph of the sequence");
  ConvergenceReport report;
  std::map<int, std::vector<BigInt>> limit_counts;
  auto limit_of = [&](int u) -> const std::vector<BigInt>& {
    auto it = limit_counts.find(u);
    if (it == limit_counts.end()) it = limit_counts.emplace(u, closed_counts(limit, u, p_max)).first;
    return it->second;
  };

  for (std::size_t n = 0; n < sequence.size(); ++n) {
    const auto& gn = sequence[n];
    auto tagged = gn.tagged(tag);
    if (tagged.empty()) throw InvalidArgument("graph " + std::to_string(n) + " has no vertex tagged '" + tag + "'");
    report.tagged_counts.push_back(tagged.size());
    report.uniformity_bound = std::max(report.uniformity_bound, tagged.size());

    for (int v : tagged) {
      auto bounded = closed_bounded_counts(gn, v, p_max, M);
      std::vector<int> candidates;
      if (matching) {
        int u = (*matching)[n].at(v);
        if (u < 0 || std::size_t(u) >= limit.size())
          throw InvalidArgument("tagged vertex without a matched limit vertex");
        candidates.push_back(u);
      } else {
        for (std::size_t u = 0; u < limit.size(); ++u) candidates.push_back(int(u));
      }
      std::optional<ConvergenceViolation> most_durable;
      bool satisfied = false;
      for (int u : candidates) {
        const auto& lim = limit_of(u);
        int bad = 0;
        for (int p = 1; p <= p_max && !bad; ++p)
          if (bounded[p - 1] > lim[p - 1]) bad = p;
        if (!bad) {
          satisfied = true;
          break;
        }
        if (!most_durable || bad > most_durable->p)
          most_durable = ConvergenceViolation{n, v, u, bad, bounded[bad - 1], lim[bad - 1]};
      }
      // Keep the violation at the shortest length over the whole sequence.
      if (!satisfied && (report.success || most_durable->p < report.violation->p)) {
        report.success = false;
        report.violation = most_durable;
      }
    }
  }
  return report;
}

}  // namespace hofent
