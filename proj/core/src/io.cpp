#include "sdpkit/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <tuple>

namespace sdpkit {

namespace {

struct Line {
  int number;
  std::vector<std::string> tokens;
};

std::vector<std::string> split(const std::string& s) {
  std::istringstream is(s);
  std::vector<std::string> out;
  std::string t;
  while (is >> t) out.push_back(t);
  return out;
}

std::vector<Line> read_lines(std::istream& in) {
  std::vector<Line> out;
  std::string s;
  int no = 0;
  while (std::getline(in, s)) {
    ++no;
    auto t = split(s);
    if (t.empty() || t[0][0] == '#') continue;
    out.push_back({no, std::move(t)});
  }
  return out;
}

double to_double(const std::string& s, int line) {
  double v = 0.0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw ParseError(line, "expected a number, got '" + s + "'");
  if (!std::isfinite(v)) throw ParseError(line, "non-finite number '" + s + "'");
  return v;
}

long to_int(const std::string& s, int line) {
  long v = 0;
  const char* b = s.data();
  const char* e = b + s.size();
  if (b != e && *b == '+') ++b;
  auto [p, ec] = std::from_chars(b, e, v);
  if (ec != std::errc() || p != e) throw ParseError(line, "expected an integer, got '" + s + "'");
  return v;
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<double> numbers(const Line& l, std::size_t expected, const char* what) {
  if (l.tokens.size() != expected)
    throw ParseError(l.number, std::string(what) + ": expected " + std::to_string(expected) + " values, got " +
                                   std::to_string(l.tokens.size()));
  std::vector<double> v;
  for (const auto& t : l.tokens) v.push_back(to_double(t, l.number));
  return v;
}

int last_line(const std::vector<Line>& lines) { return lines.empty() ? 0 : lines.back().number; }

}  // namespace

SymMatrix parse_matrix(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.empty()) throw ParseError(0, "empty matrix file");
  const Line& h = lines[0];
  if (h.tokens.size() > 2 || (h.tokens.size() == 2 && h.tokens[1] != "sparse"))
    throw ParseError(h.number, "header must be 'n' or 'n sparse'");
  const long n = to_int(h.tokens[0], h.number);
  if (n < 1 || n > 100000) throw ParseError(h.number, "order must be positive");
  Matrix a = Matrix::Zero(n, n);
  if (h.tokens.size() == 2) {
    std::set<std::pair<long, long>> seen;
    for (std::size_t k = 1; k < lines.size(); ++k) {
      const Line& l = lines[k];
      if (l.tokens.size() != 3) throw ParseError(l.number, "expected 'i j value'");
      const long i = to_int(l.tokens[0], l.number), j = to_int(l.tokens[1], l.number);
      if (i < 1 || j < 1 || i > n || j > n) throw ParseError(l.number, "index out of range");
      if (i > j) throw ParseError(l.number, "sparse entries must lie in the upper triangle");
      if (!seen.insert({i, j}).second) throw ParseError(l.number, "duplicate entry");
      a(i - 1, j - 1) = a(j - 1, i - 1) = to_double(l.tokens[2], l.number);
    }
    return SymMatrix(a);
  }
  if (static_cast<long>(lines.size()) - 1 != n)
    throw ParseError(last_line(lines), "expected " + std::to_string(n) + " rows");
  for (long i = 0; i < n; ++i) {
    const auto row = numbers(lines[i + 1], n, "matrix row");
    for (long j = 0; j < n; ++j) a(i, j) = row[j];
  }
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < i; ++j)
      if (a(i, j) != a(j, i))
        throw ParseError(lines[i + 1].number, "asymmetric entry (" + std::to_string(i + 1) + "," +
                                                  std::to_string(j + 1) + ")");
  return SymMatrix(a);
}

SymMatrix parse_matrix(const std::string& text) {
  std::istringstream is(text);
  return parse_matrix(is);
}

void write_matrix(std::ostream& out, const SymMatrix& m) {
  const int n = m.order();
  out << n << '\n';
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) out << (j ? " " : "") << num(m(i, j));
    out << '\n';
  }
}

namespace {

GraphData parse_compact(const std::string& s, int line) {
  GraphData d;
  const auto semi = s.find(';');
  d.n = static_cast<int>(to_int(s.substr(0, semi), line));
  if (d.n < 1) throw ParseError(line, "graph needs at least one vertex");
  std::string rest = s.substr(semi + 1);
  std::set<std::pair<int, int>> seen;
  std::size_t pos = 0;
  while (pos < rest.size()) {
    auto comma = rest.find(',', pos);
    if (comma == std::string::npos) comma = rest.size();
    const std::string tok = rest.substr(pos, comma - pos);
    pos = comma + 1;
    if (tok.empty()) continue;
    const auto dash = tok.find('-');
    if (dash == std::string::npos) throw ParseError(line, "edge '" + tok + "' is not of the form i-j");
    int i = static_cast<int>(to_int(tok.substr(0, dash), line)) - 1;
    int j = static_cast<int>(to_int(tok.substr(dash + 1), line)) - 1;
    if (i < 0 || j < 0 || i >= d.n || j >= d.n) throw ParseError(line, "vertex out of range in '" + tok + "'");
    if (i == j) throw ParseError(line, "self-loop '" + tok + "'");
    if (i > j) std::swap(i, j);
    if (!seen.insert({i, j}).second) throw ParseError(line, "duplicate edge '" + tok + "'");
    d.edges.emplace_back(i, j);
    d.weights.push_back(1.0);
  }
  return d;
}

}  // namespace

GraphData parse_graph_data(std::istream& in) {
  auto lines = read_lines(in);
  std::erase_if(lines, [](const Line& l) { return l.tokens[0] == "c"; });
  if (lines.empty()) throw ParseError(0, "empty graph file");
  if (lines[0].tokens[0].find(';') != std::string::npos) {
    if (lines.size() > 1) throw ParseError(lines[1].number, "compact form takes a single line");
    std::string joined;
    for (const auto& t : lines[0].tokens) joined += t;
    return parse_compact(joined, lines[0].number);
  }
  const Line& h = lines[0];
  if (h.tokens[0] != "p") throw ParseError(h.number, "expected 'p n m'");
  std::size_t off = (h.tokens.size() == 4) ? 2 : 1;
  if (h.tokens.size() != off + 2) throw ParseError(h.number, "expected 'p n m'");
  GraphData d;
  d.n = static_cast<int>(to_int(h.tokens[off], h.number));
  const long m = to_int(h.tokens[off + 1], h.number);
  if (d.n < 1) throw ParseError(h.number, "graph needs at least one vertex");
  std::set<std::pair<int, int>> seen;
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const Line& l = lines[k];
    if (l.tokens[0] != "e" || (l.tokens.size() != 3 && l.tokens.size() != 4))
      throw ParseError(l.number, "expected 'e i j [w]'");
    int i = static_cast<int>(to_int(l.tokens[1], l.number)) - 1;
    int j = static_cast<int>(to_int(l.tokens[2], l.number)) - 1;
    if (i < 0 || j < 0 || i >= d.n || j >= d.n) throw ParseError(l.number, "vertex out of range");
    if (i == j) throw ParseError(l.number, "self-loop");
    if (i > j) std::swap(i, j);
    if (!seen.insert({i, j}).second) throw ParseError(l.number, "duplicate edge");
    const double w = l.tokens.size() == 4 ? to_double(l.tokens[3], l.number) : 1.0;
    if (w < 0.0) throw ParseError(l.number, "negative weight");
    d.edges.emplace_back(i, j);
    d.weights.push_back(w);
  }
  if (static_cast<long>(d.edges.size()) != m)
    throw ParseError(h.number, "header announces " + std::to_string(m) + " edges, found " +
                                   std::to_string(d.edges.size()));
  return d;
}

GraphData parse_graph_data(const std::string& text) {
  std::istringstream is(text);
  return parse_graph_data(is);
}

Graph to_graph(const GraphData& d) { return Graph(d.n, d.edges); }

WeightedGraph to_weighted_graph(const GraphData& d) {
  Matrix w = Matrix::Zero(d.n, d.n);
  for (std::size_t k = 0; k < d.edges.size(); ++k) {
    auto [i, j] = d.edges[k];
    w(i, j) = w(j, i) = d.weights[k];
  }
  return WeightedGraph(w);
}

Graph parse_graph(const std::string& text) { return to_graph(parse_graph_data(text)); }

void write_graph(std::ostream& out, const Graph& g) {
  out << "p " << g.n() << ' ' << g.num_edges() << '\n';
  for (auto [i, j] : g.edges()) out << "e " << i + 1 << ' ' << j + 1 << '\n';
}

void write_graph(std::ostream& out, const WeightedGraph& g) {
  std::vector<std::string> rows;
  for (int i = 0; i < g.n(); ++i)
    for (int j = i + 1; j < g.n(); ++j)
      if (g.weight(i, j) != 0.0)
        rows.push_back("e " + std::to_string(i + 1) + ' ' + std::to_string(j + 1) + ' ' + num(g.weight(i, j)));
  out << "p " << g.n() << ' ' << rows.size() << '\n';
  for (const auto& r : rows) out << r << '\n';
}

std::string compact_graph(const Graph& g) {
  std::string s = std::to_string(g.n()) + ";";
  bool first = true;
  for (auto [i, j] : g.edges()) {
    if (!first) s += ',';
    first = false;
    s += std::to_string(i + 1) + '-' + std::to_string(j + 1);
  }
  return s;
}

HomPoly parse_poly(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.empty()) throw ParseError(0, "empty polynomial");
  const int nvars = static_cast<int>(lines[0].tokens.size()) - 1;
  if (nvars < 1) throw ParseError(lines[0].number, "expected 'coeff e1 ... en'");
  int degree = 0;
  for (int k = 1; k <= nvars; ++k) degree += static_cast<int>(to_int(lines[0].tokens[k], lines[0].number));
  if (degree < 0) throw ParseError(lines[0].number, "negative degree");
  HomPoly p(nvars, degree);
  std::set<Exponent> seen;
  for (const Line& l : lines) {
    if (static_cast<int>(l.tokens.size()) != nvars + 1)
      throw ParseError(l.number, "expected " + std::to_string(nvars + 1) + " fields");
    const double c = to_double(l.tokens[0], l.number);
    Exponent e(nvars);
    int deg = 0;
    for (int k = 0; k < nvars; ++k) {
      const long x = to_int(l.tokens[k + 1], l.number);
      if (x < 0 || x > 1000) throw ParseError(l.number, "exponent out of range");
      e[k] = static_cast<int>(x);
      deg += e[k];
    }
    if (deg != degree) throw ParseError(l.number, "polynomial is not homogeneous");
    if (!seen.insert(e).second) throw ParseError(l.number, "duplicate monomial");
    p.add(e, c);
  }
  return p;
}

HomPoly parse_poly(const std::string& text) {
  std::istringstream is(text);
  return parse_poly(is);
}

void write_poly(std::ostream& out, const HomPoly& p) {
  for (const auto& [e, v] : p.coeffs) {
    out << num(v);
    for (int x : e) out << ' ' << x;
    out << '\n';
  }
}

BinQp parse_binqp(std::istream& in) {
  const auto lines = read_lines(in);
  if (lines.empty()) throw ParseError(0, "empty BinQp file");
  const Line& h = lines[0];
  if (h.tokens.size() != 2) throw ParseError(h.number, "expected 'n p'");
  const long n = to_int(h.tokens[0], h.number), p = to_int(h.tokens[1], h.number);
  if (n < 1 || p < 0 || p > n) throw ParseError(h.number, "need n >= 1 and 0 <= p <= n");
  const std::size_t expected = 1 + n + 1 + p + (p > 0 ? 1 : 0);
  if (lines.size() != expected)
    throw ParseError(last_line(lines), "expected " + std::to_string(expected) + " non-comment lines, got " +
                                           std::to_string(lines.size()));
  BinQp q;
  Matrix qm(n, n);
  for (long i = 0; i < n; ++i) {
    const auto row = numbers(lines[1 + i], n, "Q row");
    for (long j = 0; j < n; ++j) qm(i, j) = row[j];
  }
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < i; ++j)
      if (qm(i, j) != qm(j, i)) throw ParseError(lines[1 + i].number, "Q is not symmetric");
  q.Q = SymMatrix(qm);
  const auto c = numbers(lines[1 + n], n, "c");
  q.c = Eigen::Map<const Vector>(c.data(), n);
  q.A = Matrix(p, n);
  for (long k = 0; k < p; ++k) {
    const auto row = numbers(lines[2 + n + k], n, "A row");
    for (long j = 0; j < n; ++j) q.A(k, j) = row[j];
  }
  q.b = Vector(p);
  if (p > 0) {
    const auto b = numbers(lines[2 + n + p], p, "b");
    for (long k = 0; k < p; ++k) q.b(k) = b[k];
  }
  try {
    q.validate();
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
  return q;
}

BinQp parse_binqp(const std::string& text) {
  std::istringstream is(text);
  return parse_binqp(is);
}

void write_binqp(std::ostream& out, const BinQp& q) {
  const int n = q.n(), p = q.p();
  out << n << ' ' << p << '\n';
  auto row = [&](auto&& get, int len) {
    for (int j = 0; j < len; ++j) out << (j ? " " : "") << num(get(j));
    out << '\n';
  };
  for (int i = 0; i < n; ++i) row([&](int j) { return q.Q(i, j); }, n);
  row([&](int j) { return q.c(j); }, n);
  for (int k = 0; k < p; ++k) row([&](int j) { return q.A(k, j); }, n);
  if (p > 0) row([&](int j) { return q.b(j); }, p);
}

PrimalSdp parse_sdpa(std::istream& in) {
  struct Tok {
    int line;
    std::string s;
  };
  std::vector<std::vector<Tok>> lines;
  std::string s;
  int no = 0;
  bool header = true;
  while (std::getline(in, s)) {
    ++no;
    if (header && !s.empty() && (s[0] == '*' || s[0] == '"')) continue;
    for (char& ch : s)
      if (ch == '{' || ch == '}' || ch == '(' || ch == ')' || ch == ',') ch = ' ';
    auto t = split(s);
    if (t.empty()) continue;
    header = false;
    std::vector<Tok> row;
    for (auto& x : t) row.push_back({no, std::move(x)});
    lines.push_back(std::move(row));
  }
  if (lines.size() < 2) throw ParseError(no, "truncated SDPA file");
  // m and nblocks take the first token of their lines; the rest may be a label.
  const long m = to_int(lines[0][0].s, lines[0][0].line);
  const long nb = to_int(lines[1][0].s, lines[1][0].line);
  if (m < 0) throw ParseError(lines[0][0].line, "negative variable count");
  if (nb < 1) throw ParseError(lines[1][0].line, "need at least one block");
  std::vector<Tok> rest;
  for (std::size_t k = 2; k < lines.size(); ++k)
    for (auto& t : lines[k]) rest.push_back(t);
  std::size_t pos = 0;
  auto next = [&](const char* what) -> const Tok& {
    if (pos >= rest.size()) throw ParseError(no, std::string("unexpected end of file reading ") + what);
    return rest[pos++];
  };
  std::vector<int> orders;
  std::vector<bool> diag;
  for (long k = 0; k < nb; ++k) {
    const Tok& t = next("block sizes");
    const long sz = to_int(t.s, t.line);
    if (sz == 0) throw ParseError(t.line, "block size 0");
    orders.push_back(static_cast<int>(std::abs(sz)));
    diag.push_back(sz < 0);
  }
  PrimalSdp p;
  p.c = Vector(m);
  for (long i = 0; i < m; ++i) {
    const Tok& t = next("objective");
    p.c(i) = to_double(t.s, t.line);
  }
  std::vector<std::vector<Matrix>> mats(m + 1);
  for (auto& v : mats)
    for (int o : orders) v.push_back(Matrix::Zero(o, o));
  std::set<std::tuple<long, long, long, long>> seen;
  while (pos < rest.size()) {
    const int line = rest[pos].line;
    long f[4];
    for (long& x : f) {
      const Tok& t = next("entry");
      if (t.line != line) throw ParseError(line, "entry needs 'matno blkno i j value' on one line");
      x = to_int(t.s, t.line);
    }
    const Tok& vt = next("entry");
    if (vt.line != line) throw ParseError(line, "entry needs 'matno blkno i j value' on one line");
    const double v = to_double(vt.s, vt.line);
    auto [mat, blk, i, j] = std::tuple{f[0], f[1], f[2], f[3]};
    if (mat < 0 || mat > m) throw ParseError(line, "matrix number out of range");
    if (blk < 1 || blk > nb) throw ParseError(line, "block number out of range");
    const long o = orders[blk - 1];
    if (i < 1 || j < 1 || i > o || j > o) throw ParseError(line, "entry index out of range");
    if (i > j) std::swap(i, j);
    if (diag[blk - 1] && i != j) throw ParseError(line, "off-diagonal entry in a diagonal block");
    if (!seen.insert({mat, blk, i, j}).second) throw ParseError(line, "duplicate entry");
    mats[mat][blk - 1](i - 1, j - 1) = mats[mat][blk - 1](j - 1, i - 1) = v;
  }
  auto block = [&](long mat) {
    std::vector<SymMatrix> b;
    for (const Matrix& x : mats[mat]) b.emplace_back(x);
    return BlockMatrix(std::move(b), diag);
  };
  p.B = block(0);
  for (long i = 1; i <= m; ++i) p.A.push_back(block(i));
  return p;
}

PrimalSdp parse_sdpa(const std::string& text) {
  std::istringstream is(text);
  return parse_sdpa(is);
}

void write_sdpa(std::ostream& out, const PrimalSdp& p) {
  p.validate();
  const int m = p.num_vars();
  // Sign constraints become one extra diagonal block holding the x_i >= 0 rows.
  std::vector<int> nonneg = p.nonneg_vars;
  std::sort(nonneg.begin(), nonneg.end());
  nonneg.erase(std::unique(nonneg.begin(), nonneg.end()), nonneg.end());
  const int extra = static_cast<int>(nonneg.size());
  const int nb = p.B.num_blocks() + (extra > 0 ? 1 : 0);
  out << m << '\n' << nb << '\n';
  for (int k = 0; k < p.B.num_blocks(); ++k)
    out << (k ? " " : "") << (p.B.is_diagonal(k) ? -1 : 1) * p.B.block(k).order();
  if (extra > 0) out << ' ' << -extra;
  out << '\n';
  for (int i = 0; i < m; ++i) out << (i ? " " : "") << num(p.c(i));
  out << '\n';
  for (int mat = 0; mat <= m; ++mat) {
    const BlockMatrix& bm = mat == 0 ? p.B : p.A[mat - 1];
    for (int k = 0; k < bm.num_blocks(); ++k) {
      const Matrix& d = bm.block(k).dense();
      for (int i = 0; i < d.rows(); ++i)
        for (int j = i; j < d.cols(); ++j)
          if (d(i, j) != 0.0)
            out << mat << ' ' << k + 1 << ' ' << i + 1 << ' ' << j + 1 << ' ' << num(d(i, j)) << '\n';
    }
    if (mat > 0)
      for (int r = 0; r < extra; ++r)
        if (nonneg[r] == mat - 1) out << mat << ' ' << nb << ' ' << r + 1 << ' ' << r + 1 << " 1\n";
  }
}

}  // namespace sdpkit
