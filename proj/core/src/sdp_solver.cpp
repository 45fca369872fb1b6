#include "sdpkit/sdp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sdpkit {

const char* to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Optimal: return "Optimal";
    case SolveStatus::NearOptimal: return "NearOptimal";
    case SolveStatus::PrimalInfeasibleSuspected: return "PrimalInfeasibleSuspected";
    case SolveStatus::DualInfeasibleSuspected: return "DualInfeasibleSuspected";
    case SolveStatus::IterationLimit: return "IterationLimit";
  }
  return "Unknown";
}

namespace {

struct Entry {
  int r, c;
  double v;
};

// Problem data split into dense PSD blocks and one diagonal (LP) part that
// collects order-1 blocks, diagonal blocks and sign-constrained variables.
struct Data {
  int m = 0;
  std::vector<int> dsize;
  int lp = 0;
  std::vector<int> kind;   // per input block: 0 dense, 1 lp
  std::vector<int> where;  // dense index or lp offset
  std::vector<std::vector<std::pair<int, std::vector<Entry>>>> ad;  // constraint -> (dense block, entries)
  std::vector<std::vector<Matrix>> ad_dense;                         // same layout, filled when entries are many
  Matrix alp;                                                        // lp x m
  std::vector<Matrix> bd;
  Vector bl;
  Vector c;
  std::vector<std::vector<std::pair<int, int>>> touching;  // dense block -> (constraint, slot in ad)
  double norm_b = 0.0;
  double norm_c = 0.0;
  int total_order = 0;
};

struct Iterate {
  Vector x;
  std::vector<Matrix> zd, yd;
  Vector zl, yl;
};

Data build_data(const PrimalSdp& p) {
  p.validate();
  Data d;
  d.m = p.num_vars();
  d.c = p.c;
  const int nb = p.B.num_blocks();
  d.kind.resize(nb);
  d.where.resize(nb);
  for (int k = 0; k < nb; ++k) {
    const int n = p.B.block(k).order();
    if (n == 1 || p.B.is_diagonal(k)) {
      d.kind[k] = 1;
      d.where[k] = d.lp;
      d.lp += n;
    } else {
      d.kind[k] = 0;
      d.where[k] = static_cast<int>(d.dsize.size());
      d.dsize.push_back(n);
    }
  }
  const int lp_blocks = d.lp;
  d.lp += static_cast<int>(p.nonneg_vars.size());
  d.alp = Matrix::Zero(d.lp, d.m);
  d.bl = Vector::Zero(d.lp);
  d.bd.resize(d.dsize.size());
  for (int k = 0; k < nb; ++k) {
    const Matrix& bk = p.B.block(k).dense();
    if (d.kind[k] == 0) {
      d.bd[d.where[k]] = bk;
    } else {
      for (int i = 0; i < bk.rows(); ++i) d.bl(d.where[k] + i) = bk(i, i);
    }
  }
  d.ad.resize(d.m);
  d.ad_dense.resize(d.m);
  d.touching.resize(d.dsize.size());
  for (int i = 0; i < d.m; ++i) {
    for (int k = 0; k < nb; ++k) {
      const Matrix& a = p.A[i].block(k).dense();
      if (d.kind[k] == 1) {
        for (int r = 0; r < a.rows(); ++r) d.alp(d.where[k] + r, i) = a(r, r);
        continue;
      }
      std::vector<Entry> ents;
      for (int cc = 0; cc < a.cols(); ++cc)
        for (int r = 0; r <= cc; ++r)
          if (a(r, cc) != 0.0) ents.push_back({r, cc, a(r, cc)});
      if (ents.empty()) continue;
      const int b = d.where[k];
      d.touching[b].emplace_back(i, static_cast<int>(d.ad[i].size()));
      const bool dense = static_cast<int>(ents.size()) > d.dsize[b];
      d.ad[i].emplace_back(b, std::move(ents));
      d.ad_dense[i].push_back(dense ? a : Matrix());
    }
  }
  for (size_t s = 0; s < p.nonneg_vars.size(); ++s) d.alp(lp_blocks + static_cast<int>(s), p.nonneg_vars[s]) = 1.0;

  double nb2 = d.bl.squaredNorm();
  for (const auto& b : d.bd) nb2 += b.squaredNorm();
  d.norm_b = std::sqrt(nb2);
  d.norm_c = d.c.norm();
  d.total_order = d.lp;
  for (int n : d.dsize) d.total_order += n;
  return d;
}

double entries_dot(const std::vector<Entry>& ents, const Matrix& m) {
  double s = 0.0;
  for (const auto& e : ents) s += (e.r == e.c) ? e.v * m(e.r, e.r) : e.v * (m(e.r, e.c) + m(e.c, e.r));
  return s;
}

// A_i (.) M summed over blocks.
Vector apply_adjoint(const Data& d, const std::vector<Matrix>& md, const Vector& ml) {
  Vector out = d.alp.transpose() * ml;
  for (int i = 0; i < d.m; ++i)
    for (const auto& [b, ents] : d.ad[i]) out(i) += entries_dot(ents, md[b]);
  return out;
}

// sum_i x_i A_i
void apply_op(const Data& d, const Vector& x, std::vector<Matrix>& md, Vector& ml) {
  md.resize(d.dsize.size());
  for (size_t b = 0; b < d.dsize.size(); ++b) md[b] = Matrix::Zero(d.dsize[b], d.dsize[b]);
  ml = d.alp * x;
  for (int i = 0; i < d.m; ++i) {
    if (x(i) == 0.0) continue;
    for (const auto& [b, ents] : d.ad[i])
      for (const auto& e : ents) {
        md[b](e.r, e.c) += x(i) * e.v;
        if (e.r != e.c) md[b](e.c, e.r) += x(i) * e.v;
      }
  }
}

double block_dot(const std::vector<Matrix>& ad, const Vector& al, const std::vector<Matrix>& bd, const Vector& bl) {
  double s = al.dot(bl);
  for (size_t b = 0; b < ad.size(); ++b) s += ad[b].cwiseProduct(bd[b]).sum();
  return s;
}

double block_norm(const std::vector<Matrix>& md, const Vector& ml) {
  double s = ml.squaredNorm();
  for (const auto& m : md) s += m.squaredNorm();
  return std::sqrt(s);
}

Matrix sym(const Matrix& m) { return 0.5 * (m + m.transpose()); }

// Largest alpha with X + alpha dX >= 0 (infinity if unbounded), given chol(X) = L.
double max_step_dense(const Eigen::LLT<Matrix>& llt, const Matrix& dx) {
  const auto l = llt.matrixL();
  const Matrix t = l.solve(dx);
  const Matrix mm = l.solve(t.transpose());
  Eigen::SelfAdjointEigenSolver<Matrix> es(sym(mm), Eigen::EigenvaluesOnly);
  const double lmin = es.eigenvalues()(0);
  return lmin < 0 ? -1.0 / lmin : std::numeric_limits<double>::infinity();
}

double max_step_lp(const Vector& x, const Vector& dx) {
  double a = std::numeric_limits<double>::infinity();
  for (int k = 0; k < x.size(); ++k)
    if (dx(k) < 0) a = std::min(a, -x(k) / dx(k));
  return a;
}

Matrix schur_matrix(const Data& d, const std::vector<Matrix>& zinv, const std::vector<Matrix>& yd, const Vector& zl,
                    const Vector& yl) {
  Matrix h = Matrix::Zero(d.m, d.m);
  for (size_t b = 0; b < d.dsize.size(); ++b) {
    const auto& touch = d.touching[b];
    const int n = d.dsize[b];
    const Matrix& zi = zinv[b];
    const Matrix& y = yd[b];
    Matrix t(n, n);
    for (size_t jj = 0; jj < touch.size(); ++jj) {
      const auto [j, sj] = touch[jj];
      const auto& ents_j = d.ad[j][sj].second;
      const Matrix& dense_j = d.ad_dense[j][sj];
      if (dense_j.size() > 0) {
        t.noalias() = zi * (dense_j * y);
      } else {
        t.setZero();
        for (const auto& e : ents_j) {
          t.noalias() += e.v * zi.col(e.r) * y.row(e.c);
          if (e.r != e.c) t.noalias() += e.v * zi.col(e.c) * y.row(e.r);
        }
      }
      for (size_t ii = 0; ii <= jj; ++ii) {
        const auto [i, si] = touch[ii];
        // tr(A_i T) = sum over entries of A_i of v * (T(c,r) + T(r,c) if off-diagonal)
        double s = 0.0;
        for (const auto& e : d.ad[i][si].second)
          s += (e.r == e.c) ? e.v * t(e.r, e.r) : e.v * (t(e.c, e.r) + t(e.r, e.c));
        h(i, j) += s;
        if (i != j) h(j, i) += s;
      }
    }
  }
  if (d.lp > 0) {
    const Vector w = yl.cwiseQuotient(zl);
    h.noalias() += d.alp.transpose() * w.asDiagonal() * d.alp;
  }
  return 0.5 * (h + h.transpose());
}

struct Measures {
  double pobj, dobj, pinf, dinf, gap, compl_;
};

Measures measure(const Data& d, const Iterate& it) {
  Measures ms{};
  ms.pobj = d.c.dot(it.x);
  ms.dobj = block_dot(d.bd, d.bl, it.yd, it.yl);
  std::vector<Matrix> ax;
  Vector axl;
  apply_op(d, it.x, ax, axl);
  for (size_t b = 0; b < ax.size(); ++b) ax[b] -= d.bd[b] + it.zd[b];
  axl -= d.bl + it.zl;
  ms.pinf = block_norm(ax, axl) / (1.0 + d.norm_b);
  const Vector rd = d.c - apply_adjoint(d, it.yd, it.yl);
  ms.dinf = rd.norm() / (1.0 + d.norm_c);
  ms.compl_ = block_dot(it.zd, it.zl, it.yd, it.yl);
  const double scale = std::max(1.0, 0.5 * (std::abs(ms.pobj) + std::abs(ms.dobj)));
  ms.gap = std::max(std::abs(ms.pobj - ms.dobj), std::abs(ms.compl_)) / scale;
  return ms;
}

BlockMatrix to_blocks(const PrimalSdp& p, const Data& d, const std::vector<Matrix>& md, const Vector& ml) {
  std::vector<SymMatrix> blocks;
  for (int k = 0; k < p.B.num_blocks(); ++k) {
    const int n = p.B.block(k).order();
    if (d.kind[k] == 0) {
      blocks.emplace_back(sym(md[d.where[k]]));
    } else {
      Matrix m = Matrix::Zero(n, n);
      for (int i = 0; i < n; ++i) m(i, i) = ml(d.where[k] + i);
      blocks.emplace_back(m);
    }
  }
  return BlockMatrix(std::move(blocks), p.B.diagonal_flags());
}

SolveReport run_ipm(const PrimalSdp& p, const SolveOptions& opts) {
  const Data d = build_data(p);
  const int nd = static_cast<int>(d.dsize.size());
  const double big_n = std::max(1, d.total_order);

  // Starting point in the style of SDPT3.
  double max_a = 0.0, ratio = 0.0;
  {
    for (int i = 0; i < d.m; ++i) {
      double na2 = d.alp.col(i).squaredNorm();
      for (const auto& [b, ents] : d.ad[i])
        for (const auto& e : ents) na2 += (e.r == e.c ? 1.0 : 2.0) * e.v * e.v;
      const double na = std::sqrt(na2);
      max_a = std::max(max_a, na);
      ratio = std::max(ratio, (1.0 + std::abs(d.c(i))) / (1.0 + na));
    }
  }
  const double rho_y = std::max({10.0, std::sqrt(big_n), big_n * ratio});
  const double rho_z = std::max({10.0, std::sqrt(big_n), max_a, d.norm_b});

  Iterate it;
  it.x = Vector::Zero(d.m);
  it.zd.resize(nd);
  it.yd.resize(nd);
  for (int b = 0; b < nd; ++b) {
    it.zd[b] = rho_z * Matrix::Identity(d.dsize[b], d.dsize[b]);
    it.yd[b] = rho_y * Matrix::Identity(d.dsize[b], d.dsize[b]);
  }
  it.zl = Vector::Constant(d.lp, rho_z);
  it.yl = Vector::Constant(d.lp, rho_y);

  SolveReport rep;
  const double diverge = 1e8 * std::max({1.0, d.norm_b, d.norm_c});
  bool converged = false;
  bool near = false;
  int iter = 0;
  Measures ms = measure(d, it);

  for (; iter < opts.max_iter; ++iter) {
    if (ms.gap <= opts.tol && ms.pinf <= opts.feas_tol && ms.dinf <= opts.feas_tol) {
      converged = true;
      break;
    }
    double ynorm = block_norm(it.yd, it.yl);
    double znorm = std::max(block_norm(it.zd, it.zl), it.x.lpNorm<Eigen::Infinity>());
    if (ynorm > diverge) {
      rep.status = SolveStatus::PrimalInfeasibleSuspected;
      break;
    }
    if (znorm > diverge) {
      rep.status = SolveStatus::DualInfeasibleSuspected;
      break;
    }

    std::vector<Eigen::LLT<Matrix>> zchol(nd);
    std::vector<Matrix> zinv(nd);
    bool trouble = false;
    for (int b = 0; b < nd; ++b) {
      zchol[b].compute(it.zd[b]);
      if (zchol[b].info() != Eigen::Success) {
        trouble = true;
        break;
      }
      zinv[b] = zchol[b].solve(Matrix::Identity(d.dsize[b], d.dsize[b]));
      zinv[b] = sym(zinv[b]);
    }
    std::vector<Eigen::LLT<Matrix>> ychol(nd);
    for (int b = 0; b < nd && !trouble; ++b) {
      ychol[b].compute(it.yd[b]);
      if (ychol[b].info() != Eigen::Success) trouble = true;
    }
    if (trouble) break;

    const double mu = ms.compl_ / big_n;
    // Primal residual Rp = sum A x - B - Z.
    std::vector<Matrix> rpd;
    Vector rpl;
    apply_op(d, it.x, rpd, rpl);
    for (int b = 0; b < nd; ++b) rpd[b] -= d.bd[b] + it.zd[b];
    rpl -= d.bl + it.zl;

    Matrix h = schur_matrix(d, zinv, it.yd, it.zl, it.yl);
    Eigen::LLT<Matrix> hl(h);
    Eigen::LDLT<Matrix> hd;
    bool use_ldlt = false;
    if (d.m > 0 && hl.info() != Eigen::Success) {
      const double reg = 1e-12 * std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
      hd.compute(h + reg * Matrix::Identity(d.m, d.m));
      use_ldlt = true;
    }
    auto solve_h = [&](const Vector& rhs) -> Vector {
      if (d.m == 0) return Vector();
      return use_ldlt ? Vector(hd.solve(rhs)) : Vector(hl.solve(rhs));
    };

    struct Dir {
      Vector dx;
      std::vector<Matrix> dzd, dyd;
      Vector dzl, dyl;
    };
    // sigma_mu and the optional second-order term dZa dYa define one direction.
    auto direction = [&](double smu, const Dir* corr) {
      std::vector<Matrix> g(nd);
      Vector gl(d.lp);
      for (int b = 0; b < nd; ++b) {
        Matrix gb = smu * zinv[b] - zinv[b] * rpd[b] * it.yd[b];
        if (corr) gb -= zinv[b] * corr->dzd[b] * corr->dyd[b];
        g[b] = sym(gb);
      }
      for (int k = 0; k < d.lp; ++k) {
        double v = (smu - rpl(k) * it.yl(k)) / it.zl(k);
        if (corr) v -= corr->dzl(k) * corr->dyl(k) / it.zl(k);
        gl(k) = v;
      }
      const Vector rhs = apply_adjoint(d, g, gl) - d.c;
      Dir dir;
      dir.dx = solve_h(rhs);
      apply_op(d, dir.dx, dir.dzd, dir.dzl);
      dir.dyd.resize(nd);
      for (int b = 0; b < nd; ++b) {
        dir.dzd[b] += rpd[b];
        Matrix dy = smu * zinv[b] - it.yd[b] - zinv[b] * dir.dzd[b] * it.yd[b];
        if (corr) dy -= zinv[b] * corr->dzd[b] * corr->dyd[b];
        dir.dyd[b] = sym(dy);
      }
      dir.dzl += rpl;
      dir.dyl.resize(d.lp);
      for (int k = 0; k < d.lp; ++k) {
        double v = (smu - it.zl(k) * it.yl(k) - dir.dzl(k) * it.yl(k)) / it.zl(k);
        if (corr) v -= corr->dzl(k) * corr->dyl(k) / it.zl(k);
        dir.dyl(k) = v;
      }
      return dir;
    };
    auto step_lengths = [&](const Dir& dir) {
      double ap = max_step_lp(it.zl, dir.dzl);
      double ad = max_step_lp(it.yl, dir.dyl);
      for (int b = 0; b < nd; ++b) {
        ap = std::min(ap, max_step_dense(zchol[b], dir.dzd[b]));
        ad = std::min(ad, max_step_dense(ychol[b], dir.dyd[b]));
      }
      return std::pair<double, double>(ap, ad);
    };

    const Dir pred = direction(0.0, nullptr);
    if (!pred.dx.allFinite()) break;
    auto [ap_aff, ad_aff] = step_lengths(pred);
    ap_aff = std::min(1.0, ap_aff);
    ad_aff = std::min(1.0, ad_aff);
    double compl_aff = 0.0;
    {
      compl_aff = ms.compl_ + ap_aff * block_dot(pred.dzd, pred.dzl, it.yd, it.yl) +
                  ad_aff * block_dot(it.zd, it.zl, pred.dyd, pred.dyl) +
                  ap_aff * ad_aff * block_dot(pred.dzd, pred.dzl, pred.dyd, pred.dyl);
    }
    const double ratio_mu = std::max(0.0, compl_aff) / std::max(ms.compl_, 1e-300);
    const double expon = std::max(1.0, 3.0 * std::pow(std::min(ap_aff, ad_aff), 2));
    const double sigma = std::min(1.0, std::pow(ratio_mu, expon));

    const Dir dir = direction(sigma * mu, &pred);
    if (!dir.dx.allFinite()) break;
    auto [ap, ad] = step_lengths(dir);
    ap = std::min(1.0, 0.95 * ap);
    ad = std::min(1.0, 0.95 * ad);

    if (ap < 1e-12 && ad < 1e-12) break;

    it.x += ap * dir.dx;
    for (int b = 0; b < nd; ++b) {
      it.zd[b] = sym(it.zd[b] + ap * dir.dzd[b]);
      it.yd[b] = sym(it.yd[b] + ad * dir.dyd[b]);
    }
    it.zl += ap * dir.dzl;
    it.yl += ad * dir.dyl;

    ms = measure(d, it);
    rep.gap_history.push_back(ms.compl_);
  }

  if (!converged && iter >= opts.max_iter && ms.gap <= opts.tol && ms.pinf <= opts.feas_tol &&
      ms.dinf <= opts.feas_tol)
    converged = true;
  near = ms.gap <= 1e3 * opts.tol && ms.pinf <= 1e3 * opts.feas_tol && ms.dinf <= 1e3 * opts.feas_tol;

  rep.x = it.x;
  rep.Y = to_blocks(p, d, it.yd, it.yl);
  rep.Z = to_blocks(p, d, it.zd, it.zl);
  rep.pobj = ms.pobj;
  rep.dobj = ms.dobj;
  rep.gap = ms.gap;
  rep.pinf = ms.pinf;
  rep.dinf = ms.dinf;
  rep.iters = iter;
  if (converged)
    rep.status = SolveStatus::Optimal;
  else if (rep.status != SolveStatus::PrimalInfeasibleSuspected && rep.status != SolveStatus::DualInfeasibleSuspected)
    rep.status = near ? SolveStatus::NearOptimal : SolveStatus::IterationLimit;
  return rep;
}

PrimalSdp phase1_problem(const PrimalSdp& p) {
  p.validate();
  const int m = p.num_vars();
  std::vector<SymMatrix> bblocks = p.B.blocks();
  std::vector<bool> flags = p.B.diagonal_flags();
  const int ns = static_cast<int>(p.nonneg_vars.size());
  // Extra diagonal block: t + 1 >= 0, then x_i + t >= 0 for sign-constrained variables.
  auto extra = [&](const std::vector<double>& diag) {
    Vector v = Vector::Zero(1 + ns);
    for (size_t k = 0; k < diag.size(); ++k) v(static_cast<int>(k)) = diag[k];
    return SymMatrix::diagonal(v);
  };
  PrimalSdp q;
  {
    std::vector<SymMatrix> b = bblocks;
    std::vector<double> diag(1 + ns, 0.0);
    diag[0] = -1.0;
    b.push_back(extra(diag));
    std::vector<bool> f = flags;
    f.push_back(true);
    q.B = BlockMatrix(std::move(b), f);
  }
  std::vector<bool> f = flags;
  f.push_back(true);
  for (int i = 0; i < m; ++i) {
    std::vector<SymMatrix> b = p.A[i].blocks();
    std::vector<double> diag(1 + ns, 0.0);
    for (int s = 0; s < ns; ++s)
      if (p.nonneg_vars[s] == i) diag[1 + s] = 1.0;
    b.push_back(extra(diag));
    q.A.emplace_back(std::move(b), f);
  }
  {
    std::vector<SymMatrix> b;
    for (const auto& blk : bblocks) b.push_back(SymMatrix::identity(blk.order()));
    std::vector<double> diag(1 + ns, 1.0);
    b.push_back(extra(diag));
    q.A.emplace_back(std::move(b), f);
  }
  q.c = Vector::Zero(m + 1);
  q.c(m) = 1.0;
  return q;
}

}  // namespace

SolveReport solve(const PrimalSdp& p, const SolveOptions& opts) {
  if (!(opts.tol > 0) || !(opts.feas_tol > 0) || opts.max_iter < 1)
    throw Error(ErrorKind::InvalidArgument, "solve: invalid options");
  SolveReport rep = run_ipm(p, opts);
  if (!rep.ok() && rep.status == SolveStatus::IterationLimit && opts.classify_failures) {
    const Phase1Result ph = phase1(p, opts);
    if (ph.margin >= opts.feas_tol) rep.status = SolveStatus::PrimalInfeasibleSuspected;
  }
  return rep;
}

SolveReport solve(const DualSdp& d, const SolveOptions& opts) { return solve(primal_of(d), opts); }

Phase1Result phase1(const PrimalSdp& p, const SolveOptions& opts) {
  SolveOptions o = opts;
  o.classify_failures = false;
  const SolveReport r = run_ipm(phase1_problem(p), o);
  Phase1Result out;
  out.x0 = r.x.head(p.num_vars());
  out.margin = r.pobj;
  out.status = r.status;
  return out;
}

double min_eigen_via_sdp(const SymMatrix& x, const SolveOptions& opts) {
  if (x.order() > 40) throw Error(ErrorKind::UnsupportedSize, "min_eigen_via_sdp: order above 40");
  PrimalSdp p;
  p.c = Vector::Constant(1, -1.0);
  p.A = {BlockMatrix({SymMatrix::identity(x.order()) * -1.0})};
  p.B = BlockMatrix({x * -1.0});
  const SolveReport r = solve(p, opts);
  if (!r.ok()) throw Error(ErrorKind::NumericalTrouble, std::string("min_eigen_via_sdp: ") + to_string(r.status));
  return -r.pobj;
}

double max_eigen_via_sdp(const SymMatrix& x, const SolveOptions& opts) {
  if (x.order() > 40) throw Error(ErrorKind::UnsupportedSize, "max_eigen_via_sdp: order above 40");
  PrimalSdp p;
  p.c = Vector::Constant(1, 1.0);
  p.A = {BlockMatrix({SymMatrix::identity(x.order())})};
  p.B = BlockMatrix({x});
  const SolveReport r = solve(p, opts);
  if (!r.ok()) throw Error(ErrorKind::NumericalTrouble, std::string("max_eigen_via_sdp: ") + to_string(r.status));
  return r.pobj;
}

}  // namespace sdpkit
