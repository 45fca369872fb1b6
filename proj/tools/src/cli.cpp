#include "sdpkit_cli/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "sdpkit/copos.hpp"
#include "sdpkit/io.hpp"
#include "sdpkit/maxcut.hpp"
#include "sdpkit/qcr.hpp"
#include "sdpkit/sos.hpp"
#include "sdpkit/theta.hpp"

namespace sdpkit::cli {

using nlohmann::json;

double json_number(double v) {
  if (!std::isfinite(v)) throw Error(ErrorKind::NumericalTrouble, "non-finite value in report");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  const double r = std::strtod(buf, nullptr);
  return r == 0.0 ? 0.0 : r;
}

namespace {

struct Options {
  std::string input;
  std::optional<double> tol;
  std::uint64_t seed = 0;
  int trials = 2000;
  int r = 0;
  std::string scheme = "r1";
  int threads = 1;
  std::string format = "json";
};

json num(double v) { return json_number(v); }

json vec(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(num(v(i)));
  return a;
}

json mat(const Matrix& m) {
  json a = json::array();
  for (int i = 0; i < m.rows(); ++i) a.push_back(vec(m.row(i).transpose()));
  return a;
}

// Eigenvectors are defined up to sign; make the first sizeable entry positive.
Vector canonical_sign(Vector v) {
  for (int i = 0; i < v.size(); ++i)
    if (std::abs(v(i)) > 1e-9) {
      if (v(i) < 0) v = -v;
      break;
    }
  return v;
}

std::string read_input(const Options& o, std::istream& in) {
  if (o.input == "-") {
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }
  std::ifstream f(o.input);
  if (!f) throw ParseError(0, "cannot open '" + o.input + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

SolveOptions solve_options(const Options& o) {
  SolveOptions s;
  if (o.tol) s.tol = *o.tol;
  return s;
}

json block_json(const BlockMatrix& b) {
  json blocks = json::array();
  for (int k = 0; k < b.num_blocks(); ++k) blocks.push_back(mat(b.block(k).dense()));
  return blocks;
}

json cmd_psd(const SymMatrix& a, const Options& o) {
  const PsdVerdict v = psd_check(a, o.tol.value_or(kDefaultTol));
  json j{{"order", a.order()}, {"is_psd", v.is_psd}, {"is_pd", v.is_pd}, {"min_eigenvalue", num(v.min_eigenvalue)}};
  if (v.witness) j["witness"] = vec(canonical_sign(*v.witness));
  return j;
}

json cmd_chol(const SymMatrix& a, const Options& o) {
  const CholFactor c = chol_psd(a, o.tol.value_or(kDefaultTol));
  return {{"order", a.order()}, {"rank", c.rank}, {"lower", mat(c.lower)}};
}

json cmd_eig(const SymMatrix& a) {
  const EigenDecomp e = eig_decompose(a);
  json vecs = json::array();
  for (int k = 0; k < a.order(); ++k) vecs.push_back(vec(canonical_sign(e.vectors.col(k))));
  return {{"order", a.order()}, {"eigenvalues", vec(e.values)}, {"eigenvectors", vecs}};
}

json cmd_solve(const PrimalSdp& p, const Options& o) {
  const SolveReport r = solve(p, solve_options(o));
  return {{"status", to_string(r.status)}, {"pobj", num(r.pobj)},  {"dobj", num(r.dobj)},
          {"gap", num(r.gap)},             {"pinf", num(r.pinf)},  {"dinf", num(r.dinf)},
          {"iters", r.iters},              {"x", vec(r.x)},        {"Y", block_json(r.Y)}};
}

json cmd_theta(const Graph& g, const Options& o) {
  const ThetaReport t = theta_report(g, solve_options(o));
  json j{{"n", g.n()},
         {"edges", g.num_edges()},
         {"theta", num(t.theta_dual)},
         {"theta_primal", num(t.theta_primal)},
         {"theta_dual", num(t.theta_dual)},
         {"theta_prime", num(t.theta_prime)},
         {"theta_lambda_max", num(t.theta_lambda_max)},
         {"theta_lambda_ratio", num(t.theta_lambda_ratio)},
         {"theta_orthonormal", num(t.theta_orthonormal)},
         {"theta_leaning", num(t.theta_leaning)},
         {"alpha", t.alpha}};
  json sandwich{{"alpha_le_theta", t.alpha <= t.theta_dual + 1e-4}};
  if (t.clique_cover) {
    j["clique_cover"] = *t.clique_cover;
    sandwich["theta_le_clique_cover"] = t.theta_dual <= *t.clique_cover + 2e-4;
  }
  if (t.chi_star) j["chi_star"] = num(*t.chi_star);
  j["sandwich"] = sandwich;
  return j;
}

json cmd_stable(const Graph& g, const Options& o) {
  const StableQp s = stable_via_qp(g);
  return {{"n", g.n()},
          {"alpha", alpha_bruteforce(g)},
          {"qp_value", num(s.value)},
          {"alpha_from_qp", static_cast<int>(std::lround(1.0 / s.value))},
          {"qp_x", vec(s.x)},
          {"alpha0", num(alpha0(g, solve_options(o)))}};
}

json verdict_json(const ConeVerdict& v) {
  json j{{"cone", to_string(v.cone)}, {"member", v.member}};
  if (v.r) j["r"] = *v.r;
  if (v.cone == Cone::SplusPlusN || v.cone == Cone::K_r) j["margin"] = num(v.margin);
  if (v.decomposition) j["decomposition"] = {{"S", mat(v.decomposition->S.dense())}, {"N", mat(v.decomposition->N.dense())}};
  if (v.violating_z) j["violating_z"] = *v.violating_z;
  if (v.sos) j["sos_squares"] = static_cast<int>(v.sos->squares.size());
  return j;
}

json cmd_copos(const SymMatrix& m, const Options& o) {
  const SolveOptions so = solve_options(o);
  json cones = json::array();
  cones.push_back(verdict_json(in_dnn(m)));
  cones.push_back(verdict_json(in_splus_plus_n(m, so)));
  if (o.r <= 1) cones.push_back(verdict_json(k_r_member(m, o.r, so)));
  cones.push_back(verdict_json(p_r_outer(m, o.r)));
  return {{"order", m.order()}, {"r", o.r}, {"cones", cones}};
}

json cmd_sos(const HomPoly& p, const Options& o) {
  const SosResult s = sos_decompose(p, solve_options(o));
  json j{{"nvars", p.nvars},
         {"degree", p.degree},
         {"feasible", s.feasible},
         {"margin", num(s.margin)},
         {"status", to_string(s.status)}};
  if (s.certificate) {
    json squares = json::array();
    for (const Vector& q : s.certificate->squares) squares.push_back(vec(canonical_sign(q)));
    j["certificate"] = {{"basis", s.certificate->basis},
                        {"gram", mat(s.certificate->gram.dense())},
                        {"squares", squares},
                        {"residual", num(coefficient_distance(expand(*s.certificate, p.nvars), p))}};
  }
  return j;
}

json cmd_maxcut(const WeightedGraph& g, const Options& o) {
  const CutResult c = goemans_williamson(g, o.seed, o.trials, o.threads, solve_options(o));
  json j{{"n", g.n()},
         {"seed", o.seed},
         {"trials", c.trials},
         {"sdp_bound", num(c.sdp_bound)},
         {"value", num(c.value)},
         {"assignment", c.assignment},
         {"best_over_trials", num(c.best_over_trials)},
         {"mean_over_trials", num(c.mean_over_trials)},
         {"std_over_trials", num(c.std_over_trials)}};
  if (g.n() <= 22) j["bruteforce"] = num(maxcut_bruteforce(g));
  return j;
}

json cmd_qcr(const BinQp& q, const Options& o) {
  const QcrScheme scheme = o.scheme == "r2" ? QcrScheme::R2 : QcrScheme::R1;
  const QcrResult r = qcr_solve(q, scheme, solve_options(o));
  const ConvexifiedQp& c = r.relaxation.conv;
  Eigen::SelfAdjointEigenSolver<Matrix> es(c.Qc.dense(), Eigen::EigenvaluesOnly);
  return {{"n", q.n()},
          {"p", q.p()},
          {"scheme", to_string(scheme)},
          {"sdp_value", num(r.relaxation.value)},
          {"lower_bound", num(r.relaxation.lower_bound)},
          {"status", to_string(r.relaxation.report.status)},
          {"convexified",
           {{"Qc", mat(c.Qc.dense())},
            {"cc", vec(c.cc)},
            {"k", num(c.k)},
            {"mu", vec(c.mu)},
            {"lam", mat(c.lam)},
            {"floor_shift", num(c.floor_shift)},
            {"min_eigenvalue", num(es.eigenvalues()(0))}}},
          {"bnb",
           {{"best_x", r.bnb.best_x},
            {"best_obj", num(r.bnb.best_obj)},
            {"nodes", r.bnb.nodes},
            {"root_bound", num(r.bnb.root_bound)}}}};
}

void flatten(std::vector<std::pair<std::string, std::string>>& rows, const std::string& key, const json& j) {
  auto scalar = [](const json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); };
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it) flatten(rows, key.empty() ? it.key() : key + "." + it.key(), it.value());
  } else if (j.is_array() && !j.empty() && j[0].is_structured()) {
    for (std::size_t k = 0; k < j.size(); ++k) flatten(rows, key + "[" + std::to_string(k) + "]", j[k]);
  } else if (j.is_array()) {
    std::string s;
    for (const auto& v : j) s += (s.empty() ? "" : " ") + scalar(v);
    rows.emplace_back(key, s);
  } else {
    rows.emplace_back(key, scalar(j));
  }
}

}  // namespace

void write_text(std::ostream& out, const json& j) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten(rows, "", j);
  std::size_t w = 0;
  for (const auto& r : rows) w = std::max(w, r.first.size());
  for (const auto& [k, v] : rows) out << k << std::string(w - k.size() + 2, ' ') << v << '\n';
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"sdpkit: semidefinite programming toolkit"};
  app.name("sdpkit");
  app.require_subcommand(1);
  Options o;

  struct Sub {
    const char* name;
    const char* help;
  };
  const std::vector<Sub> subs{
      {"psd", "PSD / PD test of a symmetric matrix"},
      {"chol", "Pivoted Cholesky factor of a PSD matrix"},
      {"eig", "Jacobi eigendecomposition"},
      {"solve", "Solve an SDPA-format primal SDP"},
      {"theta", "Lovasz theta formulations and sandwich bounds of a graph"},
      {"stable", "Stability number via the simplex QP and alpha0"},
      {"copos", "Cone membership tests for copositivity"},
      {"sos", "Sum-of-squares decomposition of a homogeneous form"},
      {"maxcut", "Goemans-Williamson relaxation and hyperplane rounding"},
      {"qcr", "Quadratic convex reformulation and branch and bound"},
  };
  for (const Sub& s : subs) {
    CLI::App* sc = app.add_subcommand(s.name, s.help);
    sc->add_option("--input", o.input, "Input file, '-' for stdin")->required();
    sc->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "text"}));
    const std::string name = s.name;
    if (name != "eig") sc->add_option("--tol", o.tol, "Tolerance (solver gap target or PSD threshold)");
    if (name == "maxcut") {
      sc->add_option("--seed", o.seed, "Random seed");
      sc->add_option("--trials", o.trials, "Rounding trials")->check(CLI::PositiveNumber);
      sc->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    }
    if (name == "copos") sc->add_option("--r", o.r, "Hierarchy level")->check(CLI::NonNegativeNumber);
    if (name == "qcr") sc->add_option("--scheme", o.scheme, "Redundant constraints")->check(CLI::IsMember({"r1", "r2"}));
  }

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kParseError;
  }
  if (o.tol && !(*o.tol > 0)) {
    err << "error: --tol must be positive\n";
    return kParseError;
  }

  const std::string cmd = app.get_subcommands().front()->get_name();
  json result;
  try {
    const std::string text = read_input(o, in);
    if (cmd == "psd" || cmd == "chol" || cmd == "eig" || cmd == "copos") {
      const SymMatrix a = parse_matrix(text);
      if (cmd == "psd") result = cmd_psd(a, o);
      if (cmd == "chol") result = cmd_chol(a, o);
      if (cmd == "eig") result = cmd_eig(a);
      if (cmd == "copos") result = cmd_copos(a, o);
    } else if (cmd == "solve") {
      result = cmd_solve(parse_sdpa(text), o);
    } else if (cmd == "theta" || cmd == "stable") {
      const Graph g = parse_graph(text);
      result = cmd == "theta" ? cmd_theta(g, o) : cmd_stable(g, o);
    } else if (cmd == "maxcut") {
      result = cmd_maxcut(to_weighted_graph(parse_graph_data(text)), o);
    } else if (cmd == "sos") {
      result = cmd_sos(parse_poly(text), o);
    } else {
      result = cmd_qcr(parse_binqp(text), o);
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kParseError;
  } catch (const Error& e) {
    err << cmd << ": " << e.what() << '\n';
    return kNumericalFailure;
  } catch (const std::exception& e) {
    err << cmd << ": " << e.what() << '\n';
    return kNumericalFailure;
  }
  if (o.format == "text")
    write_text(out, result);
  else
    out << result.dump(2) << '\n';
  return kOk;
}

}  // namespace sdpkit::cli
