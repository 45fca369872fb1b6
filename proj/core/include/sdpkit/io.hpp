#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "sdpkit/graph.hpp"
#include "sdpkit/qcr.hpp"
#include "sdpkit/sdp_model.hpp"
#include "sdpkit/sos.hpp"

// Text readers and writers. Readers throw ParseError with a 1-based line number.
// Lines starting with '#' and blank lines are skipped, except in SDPA files, where
// comments are leading lines starting with '*' or '"'.
namespace sdpkit {

// `n` then n rows of n numbers, or `n sparse` then `i j value` lines (1-based, i <= j).
SymMatrix parse_matrix(std::istream& in);
SymMatrix parse_matrix(const std::string& text);
void write_matrix(std::ostream& out, const SymMatrix& m);

// `p n m` (or `p edge n m`) then m lines `e i j [w]`, or the compact form `n;i-j,i-j,...`.
// Missing weights are 1.
struct GraphData {
  int n = 0;
  std::vector<std::pair<int, int>> edges;  // 0-based, i < j
  std::vector<double> weights;
};

GraphData parse_graph_data(std::istream& in);
GraphData parse_graph_data(const std::string& text);
Graph to_graph(const GraphData& d);                   // weights ignored
WeightedGraph to_weighted_graph(const GraphData& d);
Graph parse_graph(const std::string& text);
void write_graph(std::ostream& out, const Graph& g);
void write_graph(std::ostream& out, const WeightedGraph& g);
std::string compact_graph(const Graph& g);

// Lines `coeff e1 ... en`; n and the degree come from the first line.
HomPoly parse_poly(std::istream& in);
HomPoly parse_poly(const std::string& text);
void write_poly(std::ostream& out, const HomPoly& p);

// `n p`, Q (n lines), c (one line), A (p lines), b (one line, absent when p = 0).
BinQp parse_binqp(std::istream& in);
BinQp parse_binqp(const std::string& text);
void write_binqp(std::ostream& out, const BinQp& q);

// SDPA sparse: m, nblocks, block sizes (negative = diagonal), c, then
// `matno blkno i j value` with matno 0 for B. Separators "{}()," are ignored.
PrimalSdp parse_sdpa(std::istream& in);
PrimalSdp parse_sdpa(const std::string& text);
// nonneg_vars are written as an extra trailing diagonal block with one row per variable.
void write_sdpa(std::ostream& out, const PrimalSdp& p);

}  // namespace sdpkit
