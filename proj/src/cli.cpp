#include "hofent/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "hofent/analysis.hpp"
#include "hofent/builtins.hpp"
#include "hofent/error.hpp"
#include "hofent/graphs.hpp"
#include "hofent/hofbauer.hpp"
#include "hofent/io.hpp"
#include "hofent/maps.hpp"
#include "hofent/perturb.hpp"

namespace hofent::cli {
namespace {

namespace fs = std::filesystem;

// Raised for argument combinations CLI11 cannot validate on its own.
struct UsageError : Error {
  using Error::Error;
};

std::string default_out_dir() {
  const char* env = std::getenv("HOFENT_OUT_DIR");
  return env && *env ? env : ".";
}

std::string in_dir(const std::string& dir, const std::string& file) {
  return (fs::path(dir) / file).string();
}

void ensure_parent(const std::string& path) {
  auto parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

void write_output(const std::string& path, const std::string& content) {
  ensure_parent(path);
  write_atomic(path, content);
}

std::string join_numbers(const std::vector<BigInt>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ',';
    s += values[i].get_str();
  }
  return s;
}

struct EntropyArgs {
  std::string map;
  std::string method = "all";
  int depth = 12;
  int lap_depth = 20;
  int derivative_depth = 12;
  int period_search = 6;
  double r = 1.0;
  int p_max = 40;
  std::string out;
};

int cmd_entropy(const EntropyArgs& a, std::ostream& out, std::ostream& err) {
  IntervalMap map = load_map(a.map);
  BoundsParams params;
  params.lap_depth = a.lap_depth;
  params.diagram_depth = a.depth;
  params.p_max = a.p_max;
  params.derivative_depth = a.derivative_depth;
  params.period_search = a.period_search;
  params.use_lap = a.method != "hofbauer";
  params.use_hofbauer = a.method != "lap";
  BoundsReport rep = bounds_report(map, a.r, params);

  std::string dir = a.out.empty() ? default_out_dir() : a.out;
  write_output(in_dir(dir, "bounds.csv"), bounds_csv({rep}));
  if (params.use_lap)
    write_output(in_dir(dir, "lap_sequence.csv"), sequence_csv("n", "h_n", rep.lap_sequence));
  if (params.use_hofbauer)
    write_output(in_dir(dir, "hofbauer_sequence.csv"),
                 sequence_csv("N", "h_DN", rep.hofbauer_sequence));
  write_output(in_dir(dir, "R_sequence.csv"), sequence_csv("n", "R_n", rep.R_sequence));

  out << "h=" << format_number(rep.h) << " R=" << format_number(rep.R)
      << " bound=" << format_number(rep.main_bound) << "\n";
  for (const auto& note : rep.notes) err << "warning: " << note << "\n";
  return rep.notes.empty() ? kOk : kComputationFailed;
}

struct DiagramArgs {
  std::string map;
  int N = 0;
  int K = 0;
  std::string mode = "auto";
  bool stats = false;
  std::string out;
};

template <typename Scalar>
int diagram_impl(const IntervalMap& map, const DiagramArgs& a, std::ostream& out) {
  auto d = build_diagram<Scalar>(map, natural_partition<Scalar>(map), a.N);
  std::string path = a.out.empty() ? in_dir(default_out_dir(), "diagram.json") : a.out;
  write_output(path, diagram_json(d, a.K));
  if (a.stats) {
    out << "vertices=" << d.vertices.size() << " edges=" << d.edges.size() << "\n";
    // E_{N,K} membership histogram by depth; without K every vertex counts.
    std::vector<std::size_t> in_e(a.N + 1, 0), total(a.N + 1, 0);
    for (const auto& v : d.vertices) {
      ++total[v.depth];
      if (a.K <= 0 || in_E_NK(v, a.N, a.K)) ++in_e[v.depth];
    }
    out << "depth,vertices,in_E\n";
    for (int n = 1; n <= a.N; ++n) out << n << "," << total[n] << "," << in_e[n] << "\n";
  }
  return kOk;
}

int cmd_diagram(const DiagramArgs& a, std::ostream& out) {
  IntervalMap map = load_map(a.map);
  bool exact = a.mode == "exact" || (a.mode == "auto" && map.exact());
  if (exact && !map.exact()) throw UsageError("exact mode needs a piecewise-linear rational map");
  return exact ? diagram_impl<Rational>(map, a, out) : diagram_impl<double>(map, a, out);
}

struct MarkovArgs {
  std::string graph;
  std::string vertex;
  int p_max = 20;
  int p = 24;
  int M = 0;
  std::string limit;
  std::vector<std::string> sequence;
  std::string tag = "E";
  std::string out;
};

int resolve_vertex(const OrientedGraph& g, const std::string& name) {
  if (name.empty()) return 0;
  try {
    return g.find(name);
  } catch (const Error&) {
    throw UsageError("unknown vertex: " + name);
  }
}

std::string markov_out(const MarkovArgs& a, const std::string& file) {
  return a.out.empty() ? in_dir(default_out_dir(), file) : a.out;
}

int cmd_markov_entropy(const MarkovArgs& a, std::ostream& out) {
  OrientedGraph g = load_graph(a.graph);
  int u = resolve_vertex(g, a.vertex);
  GurevicEstimate est = gurevic_entropy(g, u, a.p_max);
  write_output(markov_out(a, "gurevic.csv"), counts_csv(est.lengths, est.counts));
  out << "gurevic=" << format_number(est.estimate) << " spectral="
      << format_number(spectral_entropy(g)) << " period=" << est.period
      << (est.lower_bound ? " lower_bound" : "") << "\n";
  return kOk;
}

int cmd_markov_parry(const MarkovArgs& a, std::ostream& out) {
  OrientedGraph g = load_graph(a.graph);
  ParryMeasure m = parry_measure(g);
  std::ostringstream csv;
  csv << "vertex,name,probability\n";
  for (std::size_t v = 0; v < g.size(); ++v)
    csv << v << "," << g.name(static_cast<int>(v)) << "," << format_number(m.vertex_prob[v])
        << "\n";
  write_output(markov_out(a, "parry.csv"), csv.str());
  out << "entropy=" << format_number(m.entropy) << " eigenvalue=" << format_number(m.eigenvalue)
      << "\n";
  return kOk;
}

int cmd_markov_bowen(const MarkovArgs& a, std::ostream& out) {
  OrientedGraph g = load_graph(a.graph);
  std::vector<double> freq = bowen_empirical(g, a.p);
  std::ostringstream csv;
  csv << "vertex,name,frequency\n";
  for (std::size_t v = 0; v < g.size(); ++v)
    csv << v << "," << g.name(static_cast<int>(v)) << "," << format_number(freq[v]) << "\n";
  write_output(markov_out(a, "bowen.csv"), csv.str());
  out << "p=" << a.p << "\n";
  return kOk;
}

int cmd_markov_counts(const MarkovArgs& a, std::ostream& out) {
  OrientedGraph g = load_graph(a.graph);
  int u = resolve_vertex(g, a.vertex);
  auto counts = a.M > 0 ? closed_bounded_counts(g, u, a.p_max, a.M) : closed_counts(g, u, a.p_max);
  std::vector<int> lengths(counts.size());
  for (std::size_t i = 0; i < lengths.size(); ++i) lengths[i] = static_cast<int>(i) + 1;
  write_output(markov_out(a, "counts.csv"), counts_csv(lengths, counts));
  out << join_numbers(counts) << "\n";
  return kOk;
}

int cmd_markov_convergence(const MarkovArgs& a, std::ostream& out) {
  if (a.sequence.empty()) throw UsageError("--sequence needs at least one graph file");
  if (a.M < 1) throw UsageError("--M must be >= 1");
  OrientedGraph limit = load_graph(a.limit);
  std::vector<OrientedGraph> seq;
  for (const auto& path : a.sequence) seq.push_back(load_graph(path));
  ConvergenceReport rep = check_convergence(seq, limit, a.tag, a.M, a.p_max);

  std::ostringstream csv;
  csv << "graph,tagged_vertices\n";
  for (std::size_t i = 0; i < rep.tagged_counts.size(); ++i)
    csv << i << "," << rep.tagged_counts[i] << "\n";
  write_output(markov_out(a, "convergence.csv"), csv.str());

  if (rep.success) {
    out << "convergence=ok uniformity_bound=" << rep.uniformity_bound << "\n";
  } else {
    const auto& v = *rep.violation;
    out << "convergence=violated graph=" << v.graph_index << " vertex="
        << seq[v.graph_index].name(v.vertex) << " matched="
        << (v.matched >= 0 ? limit.name(v.matched) : std::string("none")) << " p=" << v.p
        << " bounded=" << v.bounded_count.get_str() << " limit=" << v.limit_count.get_str()
        << "\n";
  }
  return kOk;
}

struct PerturbArgs {
  std::string map = "builtin:tangency";
  double r = 3.0;
  double delta = TangencyGeometry::default_delta;
  double C = TangencyGeometry::default_amplitude;
  std::vector<int> l_list;
  std::string out;
};

int cmd_perturb(const PerturbArgs& a, std::ostream& out, std::ostream& err) {
  if (a.l_list.empty()) throw UsageError("--l needs at least one value");
  IntervalMap map = load_map(a.map);
  auto t = find_tangency(map);
  if (!t) {
    err << "error: no homoclinic tangency found for " << map.name() << "\n";
    return kComputationFailed;
  }
  auto rows = jump_experiment(map, *t, a.r, a.l_list, a.delta, a.C);
  write_output(a.out.empty() ? in_dir(default_out_dir(), "jump.csv") : a.out, jump_csv(rows));

  bool ok = true;
  for (const auto& row : rows) {
    if (!row.warning.empty()) err << "warning: l=" << row.l << ": " << row.warning << "\n";
    if (!row.error.empty()) {
      err << (row.skipped ? "note" : "error") << ": l=" << row.l << ": " << row.error << "\n";
      ok = ok && row.skipped;
    }
  }
  out << "rows=" << rows.size() << "\n";
  return ok ? kOk : kComputationFailed;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Topological entropy of interval maps via Hofbauer diagrams"};
  app.name("hofent");
  app.require_subcommand(1, 1);
  app.set_config("--config", "", "read options from a TOML/INI file");
  app.allow_config_extras(CLI::config_extras_mode::error);
  app.fallthrough();

  EntropyArgs ea;
  auto* entropy = app.add_subcommand("entropy", "entropy estimates and the bound report");
  entropy->add_option("--map", ea.map, "builtin:<family>[:<param>] or a map file")->required();
  entropy->add_option("--method", ea.method)->check(CLI::IsMember({"lap", "hofbauer", "all"}));
  entropy->add_option("--depth", ea.depth, "diagram depth N")->check(CLI::Range(1, 64));
  entropy->add_option("--lap-depth", ea.lap_depth)->check(CLI::Range(5, 200));
  entropy->add_option("--derivative-depth", ea.derivative_depth)->check(CLI::Range(1, 200));
  entropy->add_option("--period-search", ea.period_search)->check(CLI::Range(1, 12));
  entropy->add_option("--r", ea.r, "smoothness used in the bound")->check(CLI::Range(1.0, 1e9));
  entropy->add_option("--pmax", ea.p_max)->check(CLI::Range(2, 400));
  entropy->add_option("--out", ea.out, "output directory");

  DiagramArgs da;
  auto* diagram = app.add_subcommand("diagram", "build the truncated Hofbauer diagram");
  diagram->add_option("--map", da.map)->required();
  diagram->add_option("--N", da.N, "depth")->required()->check(CLI::Range(1, 64));
  diagram->add_option("--K", da.K, "tag vertices with image length >= 1/K")
      ->check(CLI::Range(0, 1 << 20));
  diagram->add_option("--mode", da.mode)->check(CLI::IsMember({"auto", "exact", "float"}));
  diagram->add_flag("--stats", da.stats);
  diagram->add_option("--out", da.out, "output file");

  MarkovArgs ma;
  auto* markov = app.add_subcommand("markov", "path counting on graph files");
  markov->require_subcommand(1, 1);
  auto graph_opts = [&](CLI::App* sub, bool vertex) {
    sub->add_option("--graph", ma.graph)->required();
    if (vertex) sub->add_option("--vertex", ma.vertex, "name or id; default the first vertex");
    sub->add_option("--out", ma.out, "output file");
  };
  auto* m_entropy = markov->add_subcommand("entropy", "Gurevic entropy at a vertex");
  graph_opts(m_entropy, true);
  m_entropy->add_option("--pmax", ma.p_max)->check(CLI::Range(2, 2000));
  auto* m_parry = markov->add_subcommand("parry", "Parry measure");
  graph_opts(m_parry, false);
  auto* m_bowen = markov->add_subcommand("bowen", "equidistributed closed-path frequencies");
  graph_opts(m_bowen, false);
  m_bowen->add_option("--p", ma.p)->check(CLI::Range(1, 2000));
  auto* m_counts = markov->add_subcommand("counts", "closed paths at a vertex");
  graph_opts(m_counts, true);
  m_counts->add_option("--pmax", ma.p_max)->check(CLI::Range(1, 2000));
  m_counts->add_option("--M", ma.M, "count only paths with returns of length <= M")
      ->check(CLI::Range(0, 1 << 20));
  auto* m_conv = markov->add_subcommand("convergence", "uniform bounded-path domination");
  m_conv->add_option("--limit", ma.limit)->required();
  m_conv->add_option("--sequence", ma.sequence)->required();
  m_conv->add_option("--tag", ma.tag);
  m_conv->add_option("--M", ma.M)->required();
  m_conv->add_option("--pmax", ma.p_max)->check(CLI::Range(1, 400));
  m_conv->add_option("--out", ma.out, "output file");

  PerturbArgs pa;
  auto* perturb = app.add_subcommand("perturb", "entropy-jump table at a flat tangency");
  perturb->add_option("--map", pa.map);
  perturb->add_option("--r", pa.r)->check(CLI::Range(1.0, TangencyGeometry::max_order));
  perturb->add_option("--delta", pa.delta, "window half-width in (0, 0.1]")
      ->check(CLI::Validator(
          [](std::string& s) -> std::string {
            double v = std::strtod(s.c_str(), nullptr);
            return v > 0.0 && v <= 0.1 ? "" : "delta must lie in (0, 0.1]";
          },
          "(0, 0.1]"));
  perturb->add_option("--C", pa.C, "amplitude constant")->check(CLI::PositiveNumber);
  perturb->add_option("--l", pa.l_list, "comma-separated list")
      ->required()
      ->delimiter(',')
      ->check(CLI::Range(1, 200));
  perturb->add_option("--out", pa.out, "output file");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kUsage;
  }

  try {
    if (entropy->parsed()) return cmd_entropy(ea, out, err);
    if (diagram->parsed()) return cmd_diagram(da, out);
    if (perturb->parsed()) return cmd_perturb(pa, out, err);
    if (m_entropy->parsed()) return cmd_markov_entropy(ma, out);
    if (m_parry->parsed()) return cmd_markov_parry(ma, out);
    if (m_bowen->parsed()) return cmd_markov_bowen(ma, out);
    if (m_counts->parsed()) return cmd_markov_counts(ma, out);
    if (m_conv->parsed()) return cmd_markov_convergence(ma, out);
  } catch (const FileNotFoundError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << "\n";
    return kUsage;
  } catch (const InvalidArgument& e) {
    err << "invalid argument: " << e.what() << "\n";
    return kUsage;
  } catch (const ConnectivityError& e) {
    err << "connectivity error: " << e.what() << "\n";
    return kComputationFailed;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kComputationFailed;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kComputationFailed;
  }
  err << "no command\n";
  return kUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace hofent::cli
