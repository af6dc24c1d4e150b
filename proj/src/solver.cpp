#include "perron/solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "perron/error.hpp"
#include "perron/log.hpp"

namespace perron {

WorkingGrid make_working_grid(const SpectralData& s, double t0, double t_end, double step, const QuadConfig& q) {
  q.validate();
  WorkingGrid wg;
  const UniformGrid report = UniformGrid::covering(t0, t_end, step);
  double amin = INFINITY;
  for (double a : s.alpha)
    if (a > 0.0) amin = std::min(amin, a);
  double pad = 0.0;
  if (std::isfinite(amin)) {
    pad = tail_bound(cplx(amin, 0.0), 0.0, {}, q.tail_tol, step, q.max_interval);
  }
  pad = std::max(pad, 4.0 * step);
  wg.grid = UniformGrid::covering(t0, report.back() + pad, step);
  wg.report_size = report.size;
  wg.pad = wg.grid.back() - report.back();
  return wg;
}

GreenBank::GreenBank(const SpectralData& s, const UniformGrid& grid, int quad_order) : s_(s), grid_(grid) {
  sweeps_.reserve(s.gamma.size());
  for (cplx g : s.gamma) sweeps_.emplace_back(g, grid, quad_order);
}

std::vector<std::vector<cplx>> GreenBank::apply(std::span<const cplx> h) const {
  std::vector<std::vector<cplx>> w;
  w.reserve(sweeps_.size());
  for (const auto& sw : sweeps_) w.push_back(sw.apply(h));
  return w;
}

GreenStack GreenBank::solve(std::span<const cplx> h) const {
  return stack_from_components(s_, grid_, apply(h), std::vector<cplx>(h.begin(), h.end()));
}

GreenStack stack_from_components(const SpectralData& s, const UniformGrid& grid, std::vector<std::vector<cplx>> w,
                                 std::vector<cplx> h) {
  const int n = s.order();
  GreenStack z;
  z.grid = grid;
  z.derivs.assign(n - 1, std::vector<cplx>(grid.size, 0.0));
  z.top.assign(grid.size, 0.0);
  for (std::size_t j = 0; j < s.gamma.size(); ++j) {
    cplx c = 1.0 / s.Gamma[j];
    for (int i = 0; i <= n - 1; ++i) {
      auto& row = (i < n - 1) ? z.derivs[i] : z.top;
      for (std::size_t k = 0; k < grid.size; ++k) row[k] -= c * w[j][k];
      c *= s.gamma[j];
    }
  }
  for (std::size_t k = 0; k < grid.size; ++k) z.top[k] -= h[k];
  z.components = std::move(w);
  z.integrand = std::move(h);
  return z;
}

double lipschitz_majorant(int order, double M) {
  double best = 0.0;
  for (int i = 1; i <= order - 1; ++i) {
    double acc = 0.0;
    const IntPoly f = nonlinear_remainder(i);
    for (const auto& [e, c] : f.terms()) {
      const int deg = total_degree(e);
      acc += std::abs(static_cast<double>(c)) * deg * std::pow(M, deg - 1);
    }
    best = std::max(best, acc);
  }
  return best;
}

ContractionReport contraction_constants(const RiccatiSystem& sys, const SpectralData& s, const WorkingGrid& wg,
                                        const QuadConfig& q, std::optional<double> M) {
  const int n = sys.order;
  const UniformGrid& grid = wg.grid;
  const std::size_t R = wg.report_size;
  const SystemSamples S = sample_system(sys, grid);
  ContractionReport rep;
  rep.beta = s.beta;

  // G[P] derivative stack for (gpr) and the ball condition
  const GreenBank bank(s, grid, q.panel_order);
  const GreenStack gp = bank.solve(S.P);
  for (std::size_t k = 0; k < R; ++k) rep.gpr_sup = std::max(rep.gpr_sup, gp.norm_at(k));
  rep.gpr_tail = gp.norm_at(R - 1);
  rep.gpr_decays = rep.gpr_tail < rep.gpr_sup;

  std::vector<std::vector<double>> absLc(n - 1, std::vector<double>(grid.size));
  std::vector<std::vector<double>> absr(n, std::vector<double>(grid.size));
  for (std::size_t k = 0; k < grid.size; ++k) {
    for (int m = 0; m < n - 1; ++m) absLc[m][k] = std::abs(S.Lc[k][m]);
    for (int i = 0; i < n; ++i) absr[i][k] = std::abs(S.r[k][i]);
  }
  auto sup = [R](const std::vector<double>& v) { return *std::max_element(v.begin(), v.begin() + R); };

  std::vector<std::vector<double>> suffix(s.gamma.size() * (n - 1));
  for (int variant = 0; variant < 2; ++variant) {
    double L = 0.0, Q = 0.0;
    for (std::size_t j = 0; j < s.gamma.size(); ++j) {
      const double a = s.alpha[j];
      const double shifted = variant == 0 ? a : a - (a > 0 ? 1.0 : -1.0) * s.beta;
      const GreenSweep sw(cplx(shifted, 0.0), grid, q.panel_order);
      const double wgt = s.alpha_tilde[j] / std::abs(s.Gamma[j]);
      for (int m = 0; m < n - 1; ++m) {
        const auto I = sw.apply_abs(absLc[m]);
        L += wgt * sup(I);
        if (variant == 0) {
          auto& suf = suffix[j * (n - 1) + m];
          suf.assign(R, 0.0);
          double run = 0.0;
          for (std::size_t k = R; k-- > 0;) suf[k] = run = std::max(run, I[k]);
        }
      }
      std::vector<double> Ir(n + 1, 0.0);  // r_n = 0
      for (int i = 2; i <= n - 1; ++i) Ir[i] = sup(sw.apply_abs(absr[i]));
      for (int i = 2; i <= n; ++i) {
        double inner = 0.0;
        for (int k = 0; k <= i - 2; ++k) inner += binomial(i, k) * std::pow(std::abs(sys.lambda), k);
        Q += wgt * inner * (std::abs(sys.a[i]) / std::abs(shifted) + Ir[i]);
      }
    }
    (variant == 0 ? rep.L0 : rep.L_beta) = L;
    (variant == 0 ? rep.Q0 : rep.Q_beta) = Q;
  }

  rep.M = M.value_or(std::max(2.0 * rep.gpr_sup, 1e-12));
  rep.m_M = lipschitz_majorant(n, rep.M);
  rep.eps0 = rep.m_M * rep.Q0 + rep.L0;
  rep.K = rep.m_M * rep.Q_beta + rep.L_beta;
  rep.N = rep.K < 0.5 ? 1.0 / (1.0 - 2.0 * rep.K) : std::numeric_limits<double>::quiet_NaN();
  rep.cl0_holds = rep.L0 < 1.0;
  rep.cl_holds = rep.L_beta < 0.5;
  rep.ball_holds = rep.gpr_sup <= (1.0 - rep.eps0) * rep.M;
  rep.contraction_certified = rep.eps0 < 1.0 && rep.ball_holds;

  for (std::size_t k = 0; k < R; ++k) {
    double L = 0.0;
    for (std::size_t j = 0; j < s.gamma.size(); ++j)
      for (int m = 0; m < n - 1; ++m) L += s.alpha_tilde[j] / std::abs(s.Gamma[j]) * suffix[j * (n - 1) + m][k];
    if (L < 1.0) {
      rep.first_admissible_t = grid.at(k);
      break;
    }
  }
  return rep;
}

namespace {

bool finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

void integrand(const RiccatiSystem& sys, const SystemSamples& S, const std::vector<std::vector<cplx>>& Z,
               std::vector<cplx>& h) {
  const int n = sys.order;
  std::vector<cplx> col(n - 1);
  for (std::size_t k = 0; k < h.size(); ++k) {
    cplx v = S.P[k];
    for (int m = 0; m < n - 1; ++m) {
      col[m] = Z[m][k];
      v += S.Lc[k][m] * col[m];
    }
    v += sys.eval_F(S.r[k], col);
    h[k] = v;
  }
}

}  // namespace

ZSolution picard_solve(const RiccatiSystem& sys, const SpectralData& s, const WorkingGrid& wg,
                       const PicardOptions& opts) {
  const int n = sys.order;
  if (s.order() != n) throw PreconditionError("picard_solve: spectral data and system orders differ");
  const UniformGrid& grid = wg.grid;
  const std::size_t N = grid.size;
  const SystemSamples S = sample_system(sys, grid);
  const GreenBank bank(s, grid, opts.quad_order);

  ZSolution sol;
  sol.report_size = wg.report_size;
  std::vector<std::vector<cplx>> Z(n - 1, std::vector<cplx>(N, 0.0));
  std::vector<cplx> h(N);
  double prev = INFINITY;
  int growing = 0;
  for (int it = 1; it <= opts.max_iter; ++it) {
    integrand(sys, S, Z, h);
    for (cplx v : h)
      if (!finite(v)) throw DivergenceError("picard_solve: non-finite integrand at iteration " + std::to_string(it),
                                            INFINITY, it);
    GreenStack next = stack_from_components(s, grid, bank.apply(h), h);
    double upd = 0.0;
    for (std::size_t k = 0; k < N; ++k) {
      double d = 0.0;
      for (int m = 0; m < n - 1; ++m) d += std::abs(next.derivs[m][k] - Z[m][k]);
      upd = std::max(upd, d);
    }
    if (!std::isfinite(upd))
      throw DivergenceError("picard_solve: non-finite update at iteration " + std::to_string(it), INFINITY, it);
    sol.update_history.push_back(upd);
    if (it >= 2 && prev > 1e-12 && upd > 1e-13) sol.measured_ratio = std::max(sol.measured_ratio, upd / prev);
    Z = next.derivs;
    sol.iterations = it;
    sol.final_update = upd;
    log::debug("picard iteration ", it, " update ", upd);
    if (upd < opts.tol) {
      sol.converged = true;
      break;
    }
    if (it >= 2 && upd > prev) {
      if (++growing >= 3) {
        std::ostringstream os;
        os << "picard_solve: updates grew for 3 consecutive iterations (growth factor " << upd / prev
           << ", update " << upd << " at iteration " << it << ")";
        throw DivergenceError(os.str(), upd / prev, it);
      }
    } else {
      growing = 0;
    }
    prev = upd;
  }
  if (!sol.converged) {
    std::ostringstream os;
    os << "picard_solve: no convergence in " << opts.max_iter << " iterations (last update " << sol.final_update
       << ")";
    throw NumericError(os.str());
  }

  // One more application gives the stack whose top row matches the fixed-point integrand.
  integrand(sys, S, Z, h);
  GreenStack fin = stack_from_components(s, grid, bank.apply(h), h);
  double res = 0.0;
  for (std::size_t k = 0; k < N; ++k) {
    double d = 0.0;
    for (int m = 0; m < n - 1; ++m) d += std::abs(fin.derivs[m][k] - Z[m][k]);
    res = std::max(res, d);
  }
  sol.final_residual = res;
  static_cast<GreenStack&>(sol) = std::move(fin);

  std::vector<double> absP(N);
  for (std::size_t k = 0; k < N; ++k) absP[k] = std::abs(S.P[k]);
  const auto Ip = GreenSweep(cplx(s.beta, 0.0), grid, opts.quad_order).apply_abs(absP);
  const auto Im = GreenSweep(cplx(-s.beta, 0.0), grid, opts.quad_order).apply_abs(absP);
  sol.envelope.resize(N);
  for (std::size_t k = 0; k < N; ++k) sol.envelope[k] = Ip[k] + Im[k];
  return sol;
}

}  // namespace perron
