#pragma once

#include <map>
#include <optional>
#include <vector>

#include "sdpkit/sdp_solver.hpp"

namespace sdpkit {

using Exponent = std::vector<int>;

// Homogeneous polynomial; zero coefficients are never stored.
struct HomPoly {
  int nvars = 1;
  int degree = 0;
  std::map<Exponent, double> coeffs;

  HomPoly() = default;
  HomPoly(int nvars, int degree);
  void add(const Exponent& e, double v);  // accumulates, drops exact zeros
  double coeff(const Exponent& e) const;
  void validate() const;
};

// Degree-d monomials (exact) or all monomials of degree <= d, in descending
// lexicographic order within each degree, degrees ascending.
std::vector<Exponent> monomial_basis(int nvars, int d, bool exact);

double eval(const HomPoly& p, const Vector& x);

HomPoly multiply(const HomPoly& a, const HomPoly& b);

// (sum_i x_i^2)^r * p.
HomPoly multiply_norm_power(const HomPoly& p, int r);

struct SosCertificate {
  std::vector<Exponent> basis;
  SymMatrix gram;
  std::vector<Vector> squares;  // coefficient vectors over basis
};

// Sum of squares of the certificate, expanded symbolically.
HomPoly expand(const SosCertificate& cert, int nvars);

// Largest coefficient mismatch between two polynomials.
double coefficient_distance(const HomPoly& a, const HomPoly& b);

struct SosResult {
  bool feasible = false;
  std::optional<SosCertificate> certificate;
  double margin = 0.0;  // max t with Gram - t I >= 0 over all Gram matrices of p
  SolveStatus status = SolveStatus::IterationLimit;
  double pinf = 0.0;
  double dinf = 0.0;
};

// Gram-matrix SDP over the exact-degree basis. feasible iff margin >= -1e-6 and the
// extracted certificate reproduces p within 1e-6.
SosResult sos_decompose(const HomPoly& p, const SolveOptions& opts = {});

}  // namespace sdpkit
