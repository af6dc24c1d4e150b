#include "perron/asympt.hpp"

#include <cmath>
#include <limits>

#include "perron/error.hpp"

namespace perron {

const char* formula_name(FormulaKind k) {
  switch (k) {
    case FormulaKind::kGeneral: return "general";
    case FormulaKind::kLevinson: return "levinson";
    case FormulaKind::kHartmanWintner: return "hartman_wintner";
    case FormulaKind::kRefined: return "refined";
    case FormulaKind::kRefinedRemainder: return "refined_remainder";
    case FormulaKind::kLadder: return "ladder";
  }
  return "?";
}

FormulaKind formula_from_name(const std::string& name) {
  for (FormulaKind k : {FormulaKind::kGeneral, FormulaKind::kLevinson, FormulaKind::kHartmanWintner,
                        FormulaKind::kRefined, FormulaKind::kRefinedRemainder, FormulaKind::kLadder})
    if (name == formula_name(k)) return k;
  if (name == "hw") return FormulaKind::kHartmanWintner;
  throw PreconditionError("unknown formula kind '" + name + "'");
}

namespace {

UniformGrid report_grid(const UniformGrid& working, std::size_t R) { return UniformGrid{working.t0, working.step, R}; }

AsymptoticReport base(FormulaKind kind, const SpectralData& s, const UniformGrid& working, std::size_t R) {
  AsymptoticReport rep;
  rep.kind = kind;
  rep.lambda = s.lambda;
  rep.kappa = s.kappa();
  rep.grid = report_grid(working, R);
  Factor e{"exponential", std::vector<cplx>(R), std::vector<cplx>(R, s.lambda)};
  for (std::size_t k = 0; k < R; ++k) e.log_value[k] = s.lambda * (rep.grid.at(k) - rep.grid.t0);
  rep.factors.push_back(std::move(e));
  return rep;
}

// exp(-Σ_j G_{γ_j}[f] / (Γ_j γ_j))
Factor green_factor(const SpectralData& s, const GreenStack& g, std::span<const cplx> f, std::size_t R) {
  Factor out{"green_correction", std::vector<cplx>(R, 0.0), std::vector<cplx>(R, 0.0)};
  const cplx kappa = s.kappa();
  for (std::size_t k = 0; k < R; ++k) {
    cplx acc = 0.0;
    for (std::size_t j = 0; j < s.gamma.size(); ++j) acc -= g.components[j][k] / (s.Gamma[j] * s.gamma[j]);
    out.log_value[k] = acc;
    out.log_derivative[k] = -kappa * f[k] + g.derivs[0][k];
  }
  return out;
}

// exp(κ ∫_{t0}^t f)
Factor integral_factor(cplx kappa, const UniformGrid& grid, std::span<const cplx> f, std::size_t R) {
  const auto c = cumulative_integral(grid, f);
  Factor out{"integral", std::vector<cplx>(R), std::vector<cplx>(R)};
  for (std::size_t k = 0; k < R; ++k) {
    out.log_value[k] = kappa * c[k];
    out.log_derivative[k] = kappa * f[k];
  }
  return out;
}

std::vector<double> tail_integral(const UniformGrid& grid, std::span<const double> v, std::size_t end) {
  std::vector<double> out(end, 0.0);
  double acc = 0.0;
  for (std::size_t k = end; k-- > 1;) {
    acc += 0.5 * grid.step * (v[k] + v[k - 1]);
    out[k - 1] = acc;
  }
  return out;
}

std::vector<double> sum_abs_green(const SpectralData& s, const UniformGrid& grid, std::span<const double> absf,
                                  int quad_order) {
  std::vector<double> out(grid.size, 0.0);
  for (std::size_t j = 0; j < s.gamma.size(); ++j) {
    const auto I = GreenSweep(cplx(s.alpha[j], 0.0), grid, quad_order).apply_abs(absf);
    for (std::size_t k = 0; k < grid.size; ++k) out[k] += I[k];
  }
  return out;
}

std::vector<double> beta_pair(const SpectralData& s, const UniformGrid& grid, std::span<const double> absf,
                              int quad_order) {
  const auto a = GreenSweep(cplx(s.beta, 0.0), grid, quad_order).apply_abs(absf);
  const auto b = GreenSweep(cplx(-s.beta, 0.0), grid, quad_order).apply_abs(absf);
  std::vector<double> out(grid.size);
  for (std::size_t k = 0; k < grid.size; ++k) out[k] = a[k] + b[k];
  return out;
}

// Least-squares slope of log|v| against log t over the second half of [0, R).
double decay_exponent(const UniformGrid& grid, std::span<const double> v, std::size_t R) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (std::size_t k = R / 2; k < R; ++k) {
    if (!(v[k] > 0.0) || grid.at(k) <= 0.0) continue;
    const double x = std::log(grid.at(k)), y = std::log(v[k]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return std::numeric_limits<double>::infinity();
  const double den = n * sxx - sx * sx;
  if (den == 0.0) return std::numeric_limits<double>::infinity();
  return -(n * sxy - sx * sy) / den;
}

std::vector<double> abs_of(std::span<const cplx> v) {
  std::vector<double> out(v.size());
  for (std::size_t k = 0; k < v.size(); ++k) out[k] = std::abs(v[k]);
  return out;
}

// R(θ) = L(θ) + F(Θ) at every node
std::vector<cplx> remainder_of(const RiccatiSystem& sys, const SystemSamples& S, const GreenStack& th) {
  std::vector<cplx> out(th.size());
  for (std::size_t k = 0; k < th.size(); ++k) {
    const auto Z = th.stack(k);
    out[k] = sys.eval_L(S.r[k], Z) + sys.eval_F(S.r[k], Z);
  }
  return out;
}

}  // namespace

AsymptoticReport assemble_general(const RiccatiSystem& sys, const SpectralData& s, const ZSolution& z,
                                  int quad_order) {
  const UniformGrid& grid = z.grid;
  const std::size_t R = z.report_size;
  AsymptoticReport rep = base(FormulaKind::kGeneral, s, grid, R);
  const SystemSamples S = sample_system(sys, grid);
  const GreenBank bank(s, grid, quad_order);
  const GreenStack gp = bank.solve(S.P);
  rep.factors.push_back(green_factor(s, gp, S.P, R));
  rep.factors.push_back(integral_factor(rep.kappa, grid, z.integrand, R));

  std::vector<cplx> lf(grid.size);
  for (std::size_t k = 0; k < grid.size; ++k) lf[k] = z.integrand[k] - S.P[k];
  const auto env = sum_abs_green(s, grid, abs_of(lf), quad_order);
  rep.envelope.assign(env.begin(), env.begin() + R);
  rep.envelope_text = "sum_j I_{gamma_j}[L+F]";

  const auto glf = bank.apply(lf);
  rep.remainder_log.assign(R, 0.0);
  for (std::size_t k = 0; k < R; ++k)
    for (std::size_t j = 0; j < s.gamma.size(); ++j)
      rep.remainder_log[k] -= (glf[j][k] - z.components[j][0]) / (s.Gamma[j] * s.gamma[j]);
  rep.applicability["picard_converged"] = z.converged;
  rep.diagnostics["picard_iterations"] = z.iterations;
  return rep;
}

AsymptoticReport assemble_levinson(const RiccatiSystem& sys, const SpectralData& s, const WorkingGrid& wg,
                                   int quad_order) {
  const UniformGrid& grid = wg.grid;
  const std::size_t R = wg.report_size;
  AsymptoticReport rep = base(FormulaKind::kLevinson, s, grid, R);
  const SystemSamples S = sample_system(sys, grid);
  const auto absP = abs_of(S.P);
  const double qP = decay_exponent(grid, absP, R);
  const auto e = beta_pair(s, grid, absP, quad_order);
  const double qe = decay_exponent(grid, e, R);
  const double tend = grid.at(R - 1);
  double tail = std::numeric_limits<double>::infinity();
  if (qe > 1.0) tail = e[R - 1] * tend / (qe - 1.0);  // ∫_{t_end}^∞ e(t_end)(s/t_end)^{-q}
  const auto inner = tail_integral(grid, e, R);
  rep.envelope.resize(R);
  for (std::size_t k = 0; k < R; ++k) rep.envelope[k] = inner[k] + tail;
  rep.envelope_text = "int_t^inf (I_beta + I_-beta)[P]";
  rep.applicability["P_in_L1"] = qP > 1.05;
  rep.diagnostics["P_decay_exponent"] = qP;
  rep.diagnostics["envelope_tail_beyond_t_end"] = tail;
  return rep;
}

AsymptoticReport assemble_hw(const RiccatiSystem& sys, const SpectralData& s, const ZSolution& z, int quad_order) {
  const UniformGrid& grid = z.grid;
  const std::size_t R = z.report_size;
  AsymptoticReport rep = base(FormulaKind::kHartmanWintner, s, grid, R);
  const SystemSamples S = sample_system(sys, grid);
  const GreenBank bank(s, grid, quad_order);
  const GreenStack gp = bank.solve(S.P);
  rep.factors.push_back(green_factor(s, gp, S.P, R));
  rep.factors.push_back(integral_factor(rep.kappa, grid, S.P, R));
  std::vector<double> lf(grid.size);
  for (std::size_t k = 0; k < grid.size; ++k) lf[k] = std::abs(z.integrand[k] - S.P[k]);
  const auto env = sum_abs_green(s, grid, lf, quad_order);
  const auto tail = tail_integral(grid, lf, grid.size);
  rep.envelope.resize(R);
  for (std::size_t k = 0; k < R; ++k) rep.envelope[k] = env[k] + tail[k];
  rep.envelope_text = "sum_j I_{gamma_j}[L+F] + int_t^inf |L+F|";
  rep.applicability["picard_converged"] = z.converged;
  return rep;
}

AsymptoticReport assemble_refined(const RiccatiSystem& sys, const SpectralData& s, const WorkingGrid& wg,
                                  bool remainder_mode, const ZSolution* z, int quad_order) {
  const UniformGrid& grid = wg.grid;
  const std::size_t R = wg.report_size;
  AsymptoticReport rep =
      base(remainder_mode ? FormulaKind::kRefinedRemainder : FormulaKind::kRefined, s, grid, R);
  const SystemSamples S = sample_system(sys, grid);
  const GreenBank bank(s, grid, quad_order);
  const GreenStack theta = bank.solve(S.P);  // θ = -G[P]
  const std::vector<cplx> Rt = remainder_of(sys, S, theta);

  std::vector<cplx> f(grid.size);
  for (std::size_t k = 0; k < grid.size; ++k) f[k] = S.P[k] + (remainder_mode ? Rt[k] : cplx(0.0));
  const GreenStack gf = remainder_mode ? bank.solve(f) : bank.solve(S.P);
  rep.factors.push_back(green_factor(s, gf, f, R));
  rep.factors.push_back(integral_factor(rep.kappa, grid, f, R));

  const auto absR = abs_of(Rt);
  const auto pairR = beta_pair(s, grid, absR, quad_order);
  const double qR = decay_exponent(grid, pairR, R);
  double tailR = std::numeric_limits<double>::infinity();
  if (qR > 1.0) tailR = pairR[R - 1] * grid.at(R - 1) / (qR - 1.0);
  const auto inner = tail_integral(grid, pairR, R);
  rep.envelope.resize(R);
  for (std::size_t k = 0; k < R; ++k) rep.envelope[k] = inner[k] + tailR;
  rep.envelope_text = "int_t^inf (I_beta + I_-beta)[R(theta)]";
  rep.diagnostics["R_theta_decay_exponent"] = qR;
  rep.diagnostics["envelope_tail_beyond_t_end"] = tailR;
  if (remainder_mode && z != nullptr) {
    std::vector<double> g(grid.size);
    std::vector<cplx> U(sys.order - 1), T(sys.order - 1), UT(sys.order - 1);
    for (std::size_t k = 0; k < grid.size; ++k) {
      for (int m = 0; m < sys.order - 1; ++m) {
        T[m] = theta.derivs[m][k];
        U[m] = z->derivs[m][k] - T[m];
        UT[m] = z->derivs[m][k];
      }
      g[k] = std::abs(sys.eval_L(S.r[k], U) + sys.eval_F(S.r[k], UT) - sys.eval_F(S.r[k], T));
    }
    const auto a = sum_abs_green(s, grid, g, quad_order);
    const auto b = tail_integral(grid, g, grid.size);
    for (std::size_t k = 0; k < R; ++k) rep.envelope[k] = a[k] + b[k];
    rep.envelope_text = "sum_j I_{gamma_j}[L(u)+F~(U)] + int_t^inf |L(u)+F~(U)|";
  }
  double rmax = 0.0;
  for (std::size_t k = 0; k < R; ++k) rmax = std::max(rmax, absR[k]);
  rep.diagnostics["sup_R_theta"] = rmax;
  return rep;
}

AsymptoticReport assemble_ladder(const RiccatiSystem& sys, const ThetaLadder& ladder, const WorkingGrid& wg) {
  (void)sys;
  const UniformGrid& grid = wg.grid;
  const std::size_t R = wg.report_size;
  if (ladder.theta.empty()) throw PreconditionError("assemble_ladder: empty ladder");
  AsymptoticReport rep;
  rep.kind = FormulaKind::kLadder;
  rep.lambda = sys.lambda;
  rep.grid = report_grid(grid, R);
  Factor e{"exponential", std::vector<cplx>(R), std::vector<cplx>(R, sys.lambda)};
  for (std::size_t k = 0; k < R; ++k) e.log_value[k] = sys.lambda * (rep.grid.at(k) - rep.grid.t0);
  rep.factors.push_back(std::move(e));
  std::vector<cplx> sum(grid.size);
  for (std::size_t k = 0; k < grid.size; ++k) sum[k] = ladder.sum(k);
  const auto c = cumulative_integral(grid, sum);
  Factor lf{"ladder", std::vector<cplx>(R), std::vector<cplx>(R)};
  for (std::size_t k = 0; k < R; ++k) {
    lf.log_value[k] = c[k];
    lf.log_derivative[k] = sum[k];
  }
  rep.factors.push_back(std::move(lf));
  rep.envelope.assign(R, 0.0);
  if (!ladder.psi.empty()) {
    const auto tail = tail_integral(grid, abs_of(ladder.psi[0]), R);
    rep.envelope = tail;
    rep.envelope_text = "int_t^t_end |psi_m|";
  } else {
    rep.envelope_text = "unavailable without a reference solution";
  }
  rep.diagnostics["depth"] = ladder.depth();
  rep.applicability["explicit_n5_recursion"] = ladder.explicit_n5;
  return rep;
}

FormulaValue eval_formula(const AsymptoticReport& rep, double t) {
  const UniformGrid& g = rep.grid;
  if (g.size < 4) throw PreconditionError("eval_formula: report grid too small");
  const double tol = 1e-9 * g.step;
  if (t < g.t0 - tol || t > g.back() + tol) throw PreconditionError("eval_formula: t outside the reported grid");
  FormulaValue v;
  for (const Factor& f : rep.factors) {
    v.log_y += interpolate_cubic(g, f.log_value, t);
    v.log_derivative += interpolate_cubic(g, f.log_derivative, t);
  }
  v.y = std::exp(v.log_y);
  v.envelope = interpolate_cubic(g, rep.envelope, t);
  return v;
}

nlohmann::json to_json(const AsymptoticReport& rep, std::size_t max_samples) {
  using nlohmann::json;
  auto c2j = [](cplx c) { return json::array({c.real(), c.imag()}); };
  const std::size_t R = rep.grid.size;
  const std::size_t stride = std::max<std::size_t>(1, (R + max_samples - 1) / std::max<std::size_t>(1, max_samples));
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < R; k += stride) idx.push_back(k);
  if (idx.empty() || idx.back() != R - 1) idx.push_back(R - 1);

  json j;
  j["kind"] = formula_name(rep.kind);
  j["lambda"] = c2j(rep.lambda);
  j["kappa"] = c2j(rep.kappa);
  j["t0"] = rep.grid.t0;
  j["t_end"] = rep.grid.back();
  j["step"] = rep.grid.step;
  json factors = json::array();
  for (const Factor& f : rep.factors) {
    json fs = json::array();
    for (std::size_t k : idx) fs.push_back(json::array({rep.grid.at(k), f.log_value[k].real(), f.log_value[k].imag()}));
    factors.push_back({{"name", f.name}, {"log_samples", fs}});
  }
  j["factors"] = factors;
  json env = json::array();
  for (std::size_t k : idx) env.push_back(json::array({rep.grid.at(k), rep.envelope[k]}));
  j["envelope"] = {{"text", rep.envelope_text}, {"samples", env}};
  j["applicability"] = rep.applicability;
  json diag = json::object();
  for (const auto& [k, v] : rep.diagnostics) diag[k] = std::isfinite(v) ? json(v) : json(nullptr);
  j["diagnostics"] = diag;
  return j;
}

}  // namespace perron
