#pragma once

#include <string>
#include <vector>

#include "sdpkit/sdp_model.hpp"

namespace sdpkit {

enum class SolveStatus { Optimal, NearOptimal, PrimalInfeasibleSuspected, DualInfeasibleSuspected, IterationLimit };

const char* to_string(SolveStatus s);

struct SolveOptions {
  double tol = 1e-7;       // relative duality gap target
  int max_iter = 200;
  double feas_tol = 1e-8;  // scaled primal and dual residuals
  bool classify_failures = true;  // run phase1 when the main solve does not converge
};

struct SolveReport {
  SolveStatus status = SolveStatus::IterationLimit;
  Vector x;
  BlockMatrix Y;
  BlockMatrix Z;  // primal slack, sum A_i x_i - B
  double pobj = 0.0;
  double dobj = 0.0;
  double gap = 0.0;       // relative gap used by the stopping test
  double pinf = 0.0;      // scaled primal residual
  double dinf = 0.0;      // scaled dual residual
  int iters = 0;
  std::vector<double> gap_history;  // Z (.) Y after each iteration

  bool ok() const { return status == SolveStatus::Optimal || status == SolveStatus::NearOptimal; }
};

// Infeasible-start primal-dual path following (HKM direction, Mehrotra corrector).
SolveReport solve(const PrimalSdp& p, const SolveOptions& opts = {});

// Solves primal_of(d); Y of the report is the dual variable of d.
SolveReport solve(const DualSdp& d, const SolveOptions& opts = {});

struct Phase1Result {
  Vector x0;
  double margin = 0.0;  // optimal t of min t s.t. sum A_i x_i - B + t I >= 0, t >= -1
  SolveStatus status = SolveStatus::IterationLimit;
};

Phase1Result phase1(const PrimalSdp& p, const SolveOptions& opts = {});

double min_eigen_via_sdp(const SymMatrix& x, const SolveOptions& opts = {});
double max_eigen_via_sdp(const SymMatrix& x, const SolveOptions& opts = {});

}  // namespace sdpkit
