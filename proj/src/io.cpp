#include "hofent/io.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "hofent/builtins.hpp"
#include "hofent/error.hpp"

namespace hofent {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FileNotFoundError("file not found: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  fs::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw FileNotFoundError("cannot write " + tmp.string());
    out << content;
    if (!out.flush()) throw FileNotFoundError("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

// ---------------------------------------------------------------- maps

namespace {

Rational json_rational(const json& v) {
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.dump(), 10);
  if (v.is_number()) return parse_rational(v.dump());
  throw FormatError("expected a number or \"p/q\" string");
}

double json_double(const json& v) {
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return kAnalytic;
    return parse_rational(s).get_d();
  }
  if (v.is_number()) return v.get<double>();
  throw FormatError("expected a number");
}

json rational_json(const Rational& q) { return to_string(q); }
json double_json(double v) { return std::stod(format_number(v)); }

}  // namespace

IntervalMap parse_map(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("map file is not valid JSON: ") + e.what());
  }
  for (auto it = doc.begin(); it != doc.end(); ++it)
    if (it.key() != "type" && it.key() != "pieces" && it.key() != "r" && it.key() != "name")
      throw FormatError("unknown map field '" + it.key() + "'");
  const std::string type = doc.value("type", "");
  const std::string name = doc.value("name", type);
  if (type == "builtin") {
    if (doc.contains("r") && (name == "tangency" || name == "builtin:tangency"))
      return tangency_map(json_double(doc["r"]));
    return builtin_map(name);
  }
  if (!doc.contains("pieces") || !doc["pieces"].is_array()) throw FormatError("map needs a pieces array");
  const double r = doc.contains("r") ? json_double(doc["r"]) : kAnalytic;

  if (type == "piecewise_linear") {
    std::vector<LinearPiece> pieces;
    for (const auto& p : doc["pieces"]) {
      const auto& iv = p.at("interval");
      const auto& c = p.at("coeffs");
      if (iv.size() != 2 || c.size() != 2) throw FormatError("linear piece needs [lo,hi] and [intercept,slope]");
      pieces.push_back({json_rational(iv[0]), json_rational(iv[1]), json_rational(c[0]), json_rational(c[1])});
    }
    return IntervalMap::piecewise_linear(std::move(pieces), r, name);
  }
  if (type == "piecewise_poly") {
    std::vector<Piece> pieces;
    for (const auto& p : doc["pieces"]) {
      const auto& iv = p.at("interval");
      if (iv.size() != 2) throw FormatError("piece interval needs two endpoints");
      std::vector<double> coeffs;
      for (const auto& c : p.at("coeffs")) coeffs.push_back(json_double(c));
      double center = p.contains("center") ? json_double(p["center"]) : 0.0;
      pieces.push_back({json_double(iv[0]), json_double(iv[1]),
                        std::make_shared<PolynomialBranch>(std::move(coeffs), center)});
    }
    return IntervalMap(std::move(pieces), r, name);
  }
  throw FormatError("unknown map type '" + type + "'");
}

IntervalMap load_map(const std::string& spec_or_path) {
  if (spec_or_path.rfind("builtin:", 0) == 0) return builtin_map(spec_or_path);
  return parse_map(read_file(spec_or_path));
}

// ---------------------------------------------------------------- diagrams and graphs

template <typename Scalar>
std::string diagram_json(const HofbauerDiagram<Scalar>& d, int K) {
  json doc;
  doc["vertices"] = json::array();
  for (std::size_t i = 0; i < d.vertices.size(); ++i) {
    const auto& v = d.vertices[i];
    json jv;
    jv["id"] = i;
    jv["base"] = v.base;
    if constexpr (ScalarTraits<Scalar>::exact) {
      jv["interval"] = {rational_json(v.image.lo), rational_json(v.image.hi)};
    } else {
      jv["interval"] = {double_json(v.image.lo), double_json(v.image.hi)};
    }
    jv["depth"] = v.depth;
    jv["word"] = v.word;
    if (K > 0) jv["tags"] = in_E_NK(v, d.depth_limit, K) ? json::array({"E"}) : json::array();
    doc["vertices"].push_back(jv);
  }
  doc["edges"] = json::array();
  for (const auto& [a, b] : d.edges) doc["edges"].push_back({a, b});
  doc["meta"] = {{"map", d.map_name}, {"N", d.depth_limit}};
  if (K > 0) doc["meta"]["K"] = K;
  return doc.dump(2) + "\n";
}

template std::string diagram_json(const HofbauerDiagram<double>&, int);
template std::string diagram_json(const HofbauerDiagram<Rational>&, int);

OrientedGraph parse_graph(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("graph file is not valid JSON: ") + e.what());
  }
  if (!doc.contains("vertices") || !doc.contains("edges")) throw FormatError("graph needs vertices and edges");
  OrientedGraph g;
  std::map<long, int> ids;
  for (const auto& v : doc["vertices"]) {
    long id = v.at("id").get<long>();
    std::string name = v.contains("name") ? v["name"].get<std::string>() : std::to_string(id);
    std::vector<std::string> tags;
    if (v.contains("tags"))
      for (const auto& t : v["tags"]) tags.push_back(t.get<std::string>());
    if (ids.count(id)) throw FormatError("duplicate vertex id " + std::to_string(id));
    ids[id] = g.add_vertex(name, tags);
  }
  for (const auto& e : doc["edges"]) {
    if (!e.is_array() || e.size() != 2) throw FormatError("edge must be [from, to]");
    auto a = ids.find(e[0].get<long>()), b = ids.find(e[1].get<long>());
    if (a == ids.end() || b == ids.end()) throw FormatError("edge endpoint does not exist");
    if (!g.add_edge(a->second, b->second)) throw FormatError("duplicate edge");
  }
  return g;
}

OrientedGraph load_graph(const std::string& path) { return parse_graph(read_file(path)); }

std::string graph_json(const OrientedGraph& g) {
  json doc;
  doc["vertices"] = json::array();
  for (std::size_t v = 0; v < g.size(); ++v) {
    json jv{{"id", v}, {"name", g.name(int(v))}};
    if (!g.tags(int(v)).empty()) jv["tags"] = g.tags(int(v));
    doc["vertices"].push_back(jv);
  }
  doc["edges"] = json::array();
  for (std::size_t v = 0; v < g.size(); ++v)
    for (int w : g.successors(int(v))) doc["edges"].push_back({v, w});
  return doc.dump(2) + "\n";
}

// ---------------------------------------------------------------- csv

std::string counts_csv(const std::vector<int>& lengths, const std::vector<BigInt>& counts) {
  std::string out = "p,count,log_count_over_p\n";
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    double v = sgn(counts[i]) > 0 ? log_bigint(counts[i]) / lengths[i] : -INFINITY;
    out += std::to_string(lengths[i]) + "," + counts[i].get_str() + "," + format_number(v) + "\n";
  }
  return out;
}

std::string bounds_csv(const std::vector<BoundsReport>& reports) {
  auto opt = [](const std::optional<double>& v) { return v ? format_number(*v) : std::string(); };
  std::string out =
      "map,r,h,h_method,h_lap,h_hofbauer,R,yomdin_bound,main_theorem_bound,beta,lyapunov_max,"
      "lyapunov_count,notes\n";
  for (const auto& rep : reports) {
    std::string notes;
    for (const auto& n : rep.notes) notes += (notes.empty() ? "" : "; ") + n;
    for (char& c : notes)
      if (c == ',' || c == '\n') c = ' ';
    double lmax = rep.lyapunov.empty() ? 0.0 : *std::max_element(rep.lyapunov.begin(), rep.lyapunov.end());
    out += rep.map_name + "," + format_number(rep.r) + "," + format_number(rep.h) + "," + rep.h_method + "," +
           opt(rep.h_lap) + "," + opt(rep.h_hofbauer) + "," + format_number(rep.R) + "," +
           format_number(rep.yomdin_bound) + "," + format_number(rep.main_bound) + "," + opt(rep.beta) + "," +
           (rep.lyapunov.empty() ? std::string() : format_number(lmax)) + "," +
           std::to_string(rep.lyapunov.size()) + "," + notes + "\n";
  }
  return out;
}

std::string sequence_csv(const std::string& index_name, const std::string& value_name,
                         const std::vector<double>& values, int first_index) {
  std::string out = index_name + "," + value_name + "\n";
  for (std::size_t i = 0; i < values.size(); ++i)
    out += std::to_string(first_index + int(i)) + "," + format_number(values[i]) + "\n";
  return out;
}

std::string jump_csv(const std::vector<JumpRow>& rows) {
  std::string out = "l,delta,a,N,cr_distance,certified_entropy,theoretical_chain,lambda_over_r,error\n";
  for (const auto& r : rows) {
    std::string err = r.error;
    for (char& c : err)
      if (c == ',' || c == '\n') c = ' ';
    out += std::to_string(r.l) + "," + format_number(r.delta) + "," + format_number(r.amplitude) + "," +
           std::to_string(r.frequency) + "," + format_number(r.cr_distance) + "," +
           format_number(r.certified_entropy) + "," + format_number(r.theoretical_chain) + "," +
           format_number(r.lambda_over_r) + "," + err + "\n";
  }
  return out;
}

}  // namespace hofent
