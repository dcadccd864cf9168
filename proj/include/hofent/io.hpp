#pragma once

#include <string>
#include <vector>

#include "hofent/analysis.hpp"
#include "hofent/graphs.hpp"
#include "hofent/hofbauer.hpp"
#include "hofent/maps.hpp"
#include "hofent/perturb.hpp"

namespace hofent {

/// 12 significant digits; "inf", "-inf", "nan" for non-finite values.
std::string format_number(double v);

std::string read_file(const std::string& path);
/// Writes through a temporary sibling and renames it into place.
void write_atomic(const std::string& path, const std::string& content);

/// "builtin:..." names or a map description file.
IntervalMap load_map(const std::string& spec_or_path);
/// Map description: {type, pieces:[{interval:[lo,hi], coeffs:[...]}], r, name}.
IntervalMap parse_map(const std::string& text);

template <typename Scalar>
std::string diagram_json(const HofbauerDiagram<Scalar>& d, int K = 0);

/// Graph file (a diagram file is accepted; its meta block is ignored).
OrientedGraph parse_graph(const std::string& text);
OrientedGraph load_graph(const std::string& path);
std::string graph_json(const OrientedGraph& g);

std::string counts_csv(const std::vector<int>& lengths, const std::vector<BigInt>& counts);
std::string bounds_csv(const std::vector<BoundsReport>& reports);
std::string sequence_csv(const std::string& index_name, const std::string& value_name,
                         const std::vector<double>& values, int first_index = 1);
std::string jump_csv(const std::vector<JumpRow>& rows);

}  // namespace hofent
