#pragma once

#include <optional>
#include <vector>

#include "sdpkit/graph.hpp"
#include "sdpkit/sos.hpp"

namespace sdpkit {

enum class Cone { SplusCapN, SplusPlusN, K_r, P_r_outer };

const char* to_string(Cone c);

struct Decomposition {
  SymMatrix S;  // PSD part
  SymMatrix N;  // entrywise nonnegative part, zero diagonal
};

struct ConeVerdict {
  Cone cone = Cone::SplusCapN;
  bool member = false;
  std::optional<int> r;
  std::optional<Decomposition> decomposition;
  std::optional<SosCertificate> sos;
  std::optional<std::vector<int>> violating_z;
  double margin = 0.0;  // SDP margin where one was solved
};

// Doubly nonnegative: PSD and entrywise >= -1e-9.
ConeVerdict in_dnn(const SymMatrix& m);

// M = S + N with S PSD, N >= 0, diag(N) = 0. Solved as min t with
// M + t I - N >= 0; member iff t* <= 1e-7 max(1, |M|_F).
ConeVerdict in_splus_plus_n(const SymMatrix& m, const SolveOptions& opts = {});

// p_M(x) = sum_ij M_ij x_i^2 x_j^2.
HomPoly quartic_form(const SymMatrix& m);

// SOS test of (sum x_i^2)^r p_M, r in {0, 1}.
ConeVerdict k_r_member(const SymMatrix& m, int r, const SolveOptions& opts = {});

// z^T M z >= -1e-9 for every integer z >= 0 with sum z <= r; the first violation
// in lexicographic order is returned.
ConeVerdict p_r_outer(const SymMatrix& m, int r);

struct StableQp {
  double value = 0.0;
  Vector x;
};

// min (A + I) . x x^T over the simplex, by support reduction.
StableQp stable_via_qp(const Graph& g);

// Theta dual strengthened with X >= 0.
double alpha0(const Graph& g, const SolveOptions& opts = {});

SymMatrix horn_matrix();

}  // namespace sdpkit
