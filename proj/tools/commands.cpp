#include "commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"
#include "perron/acceptance.hpp"
#include "perron/asympt.hpp"
#include "perron/config.hpp"
#include "perron/error.hpp"
#include "perron/example5.hpp"
#include "perron/ladder.hpp"
#include "perron/log.hpp"
#include "perron/riccati.hpp"
#include "perron/solver.hpp"
#include "perron/validate.hpp"

namespace perron::cli {
namespace {

using nlohmann::json;

constexpr double kLogDerivTailTol = 1e-2;
constexpr double kDriftTol = 0.05;
constexpr double kWronskianTol = 0.05;

json c2j(cplx c) { return json::array({c.real(), c.imag()}); }
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

RunConfig load(const Common& c) {
  RunConfig cfg = c.config_path.empty() ? parse_config(example5_config_text()) : load_config(c.config_path);
  if (!c.json_out.empty()) cfg.json_path = c.json_out;
  if (!c.csv_dir.empty()) cfg.csv_dir = c.csv_dir;
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

json envelope_of(const RunConfig& cfg, const std::string& command) {
  return {{"tool", "perron"}, {"version", tool_version()}, {"command", command}, {"config_hash", cfg.hash()}};
}

void emit_json(const RunConfig& cfg, const json& j) {
  const std::string text = j.dump(2) + "\n";
  if (cfg.json_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(cfg.json_path, std::ios::binary);
  if (!out) throw ConfigError("output.json", "cannot write " + cfg.json_path);
  out << text;
  log::info("wrote ", cfg.json_path);
}

void write_csv(const RunConfig& cfg, const std::string& name, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::filesystem::create_directories(cfg.csv_dir);
  const std::string path = (std::filesystem::path(cfg.csv_dir) / name).string();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("output.csv_dir", "cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << "\n";
  char buf[40];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", row[i]);
      out << (i ? "," : "") << buf;
    }
    out << "\n";
  }
  log::info("wrote ", path);
}

// Everything a subcommand needs once λ is fixed.
struct Pipeline {
  RunConfig cfg;
  PerturbedODE ode;
  std::vector<cplx> roots;
  SpectralData spectral;
  RiccatiSystem sys;
  WorkingGrid wg;

  explicit Pipeline(RunConfig c) : cfg(std::move(c)) {
    ode = cfg.ode();
    roots = find_roots(ode.charpoly());
    spectral = spectral_data(roots, cfg.select_lambda(roots), cfg.beta);
    sys = build_riccati(ode, spectral.lambda);
    wg = make_working_grid(spectral, cfg.t0, cfg.t_end, cfg.step, cfg.quad);
  }

  PicardOptions picard() const {
    PicardOptions p = cfg.picard;
    p.quad_order = cfg.quad.panel_order;
    return p;
  }
};

json spectral_json(const SpectralData& s) {
  json j;
  json roots = json::array(), g = json::array(), G = json::array();
  for (cplx r : s.roots) roots.push_back(c2j(r));
  for (std::size_t i = 0; i < s.gamma.size(); ++i) {
    g.push_back(c2j(s.gamma[i]));
    G.push_back(c2j(s.Gamma[i]));
  }
  j["roots"] = roots;
  j["lambda"] = c2j(s.lambda);
  j["lambda_index"] = s.lambda_index;
  j["gamma"] = g;
  j["Gamma"] = G;
  j["alpha"] = s.alpha;
  j["alpha_tilde"] = s.alpha_tilde;
  j["gamma_tilde"] = s.gamma_tilde;
  j["beta"] = s.beta;
  j["kappa"] = c2j(s.kappa());
  const WeightCheck w = partial_fraction_weights_check(s);
  j["weights_check"] = {{"ok", w.ok}, {"max_residual", w.max_residual}};
  return j;
}

json contraction_json(const ContractionReport& c) {
  return {{"beta", c.beta},
          {"M", c.M},
          {"L0", c.L0},
          {"L_beta", c.L_beta},
          {"Q0", c.Q0},
          {"Q_beta", c.Q_beta},
          {"m_M", c.m_M},
          {"eps0", c.eps0},
          {"K", c.K},
          {"N", num(c.N)},
          {"gpr_sup", c.gpr_sup},
          {"gpr_tail", c.gpr_tail},
          {"flags",
           {{"gpr", c.gpr_decays}, {"cl0", c.cl0_holds}, {"cl", c.cl_holds}, {"ball", c.ball_holds}}},
          {"contraction_certified", c.contraction_certified},
          {"first_admissible_t", c.first_admissible_t ? json(*c.first_admissible_t) : json(nullptr)}};
}

json picard_json(const ZSolution& z) {
  return {{"converged", z.converged},
          {"iterations", z.iterations},
          {"final_update", z.final_update},
          {"final_residual", z.final_residual},
          {"measured_ratio", z.measured_ratio},
          {"update_history", z.update_history}};
}

AsymptoticReport build_formula(const Pipeline& p, FormulaKind kind, const ZSolution& z) {
  const int qo = p.cfg.quad.panel_order;
  switch (kind) {
    case FormulaKind::kGeneral: return assemble_general(p.sys, p.spectral, z, qo);
    case FormulaKind::kLevinson: return assemble_levinson(p.sys, p.spectral, p.wg, qo);
    case FormulaKind::kHartmanWintner: return assemble_hw(p.sys, p.spectral, z, qo);
    case FormulaKind::kRefined: return assemble_refined(p.sys, p.spectral, p.wg, false, &z, qo);
    case FormulaKind::kRefinedRemainder: return assemble_refined(p.sys, p.spectral, p.wg, true, &z, qo);
    case FormulaKind::kLadder: {
      const ThetaLadder l = theta_ladder(p.sys, p.spectral, p.wg.grid, p.cfg.ladder_depth, &z, LadderMode::kAuto, qo);
      return assemble_ladder(p.sys, l, p.wg);
    }
  }
  throw PreconditionError("unknown formula kind");
}

}  // namespace

const char* example5_config_text() {
  return R"cfg(# worked fifth-order example: x^5 - 5x^3 + 4x, lambda = 1
order = 5
coefficients = [0, 4, 0, -5, 0]
perturbations = ["(t^2+1)^(-1/3)", "(t^2+1)^(-1/3)", "0", "t^(-2/3)", "0"]
t0 = 10
t_end = 50
step = 0.02
lambda = [1, 0]
quad.panel_order = 8
quad.panel_width = 0.5
quad.tail_tol = 1e-12
picard.tol = 1e-10
picard.max_iter = 200
ladder.depth = 2
seed = 1
)cfg";
}

int analyze(const Common& c) {
  const Pipeline p(load(c));
  json j = envelope_of(p.cfg, "analyze");
  j["spectral"] = spectral_json(p.spectral);
  j["riccati"] = to_string(p.sys);
  j["working_grid"] = {{"t0", p.wg.grid.t0}, {"step", p.wg.grid.step}, {"report_nodes", p.wg.report_size},
                       {"total_nodes", p.wg.grid.size}, {"tail_pad", p.wg.pad}};
  j["contraction"] = contraction_json(contraction_constants(p.sys, p.spectral, p.wg, p.cfg.quad, p.cfg.ball_M));

  // smallness integrals against the slowest shift
  std::size_t slow = 0;
  for (std::size_t i = 1; i < p.spectral.gamma.size(); ++i)
    if (std::abs(p.spectral.alpha[i]) < std::abs(p.spectral.alpha[slow])) slow = i;
  const double H = p.cfg.horizon.value_or(p.cfg.t_end);
  const UniformGrid sg = UniformGrid::covering(p.cfg.t0, H, std::max(p.cfg.step, (H - p.cfg.t0) / 400.0));
  json small = json::array();
  for (std::size_t i = 0; i < p.ode.r.size(); ++i) {
    const auto d = smallness_diagnostics(p.ode.r[i], p.spectral.gamma[slow], sg, p.cfg.quad);
    small.push_back({{"index", i},
                     {"expr", p.ode.r[i].to_string()},
                     {"r_star_start", d.r_star.front()},
                     {"r_bar_start", d.r_bar.front()},
                     {"I_gamma_start", d.i_gamma.front()},
                     {"r_star_end", d.r_star.back()},
                     {"r_bar_end", d.r_bar.back()},
                     {"I_gamma_end", d.i_gamma.back()},
                     {"horizon", d.horizon},
                     {"finite_horizon_surrogate", true}});
  }
  j["smallness"] = {{"gamma", c2j(p.spectral.gamma[slow])}, {"records", small}};
  emit_json(p.cfg, j);
  return kOk;
}

int solve(const Common& c) {
  const Pipeline p(load(c));
  const ZSolution z = picard_solve(p.sys, p.spectral, p.wg, p.picard());
  json j = envelope_of(p.cfg, "solve");
  j["lambda"] = c2j(p.spectral.lambda);
  j["picard"] = picard_json(z);
  if (!p.cfg.csv_dir.empty()) {
    std::vector<std::string> header = {"t"};
    for (std::size_t i = 0; i < z.derivs.size(); ++i) {
      header.push_back("z" + std::to_string(i) + "_re");
      header.push_back("z" + std::to_string(i) + "_im");
    }
    header.push_back("envelope");
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < z.report_size; ++k) {
      std::vector<double> row = {z.grid.at(k)};
      for (const auto& d : z.derivs) {
        row.push_back(d[k].real());
        row.push_back(d[k].imag());
      }
      row.push_back(z.envelope[k]);
      rows.push_back(std::move(row));
    }
    write_csv(p.cfg, "z.csv", header, rows);
    j["csv"] = "z.csv";
  }
  emit_json(p.cfg, j);
  return kOk;
}

int formula(const Common& c, const std::string& kind_name) {
  const Pipeline p(load(c));
  const FormulaKind kind = formula_from_name(kind_name);
  const ZSolution z = picard_solve(p.sys, p.spectral, p.wg, p.picard());
  const AsymptoticReport rep = build_formula(p, kind, z);
  json j = envelope_of(p.cfg, "formula");
  j["report"] = to_json(rep);
  j["picard"] = {{"converged", z.converged}, {"iterations", z.iterations}};
  emit_json(p.cfg, j);
  return kOk;
}

int validate(const Common& c, const std::string& kind_name) {
  const Pipeline p(load(c));
  const ZSolution z = picard_solve(p.sys, p.spectral, p.wg, p.picard());
  const AsymptoticReport phi = build_formula(p, formula_from_name(kind_name), z);
  const auto fund = fundamental_system(p.ode, p.roots, p.cfg.t_end, p.cfg.step);
  const ReferenceComparison cmp = compare_with_reference(fund[p.spectral.lambda_index], z, phi);
  const double t_min = p.cfg.t0 + 0.25 * (p.cfg.t_end - p.cfg.t0);
  const WronskianCheck w = wronskian_check(fund, t_min);
  const bool ok_ld = cmp.tail_max_logderiv_error <= kLogDerivTailTol;
  const bool ok_drift = cmp.drift <= kDriftTol;
  const bool ok_w = w.max_rel_deviation <= kWronskianTol;
  json j = envelope_of(p.cfg, "validate");
  j["formula"] = formula_name(phi.kind);
  j["checks"] = {
      {"logderiv_tail", {{"value", cmp.tail_max_logderiv_error}, {"tol", kLogDerivTailTol}, {"pass", ok_ld}}},
      {"ratio_drift", {{"value", cmp.drift}, {"tol", kDriftTol}, {"pass", ok_drift}}},
      {"wronskian", {{"value", w.max_rel_deviation}, {"t_min", t_min}, {"tol", kWronskianTol}, {"pass", ok_w}}}};
  j["c"] = c2j(cmp.c);
  j["reference_error_estimate"] = fund[0].max_error_estimate;
  if (!p.cfg.csv_dir.empty()) {
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < cmp.t.size(); ++k)
      rows.push_back({cmp.t[k], cmp.logderiv_error[k].real(), cmp.logderiv_error[k].imag(), cmp.ratio[k].real(),
                      cmp.ratio[k].imag(), std::abs(w.ratio[k] / w.vandermonde)});
    write_csv(p.cfg, "validate.csv", {"t", "logderiv_err_re", "logderiv_err_im", "ratio_re", "ratio_im", "wronskian_norm"},
              rows);
  }
  emit_json(p.cfg, j);
  return ok_ld && ok_drift && ok_w ? kOk : kAcceptanceFailure;
}

int example5(const Common& c) {
  const RunConfig cfg = load(c);
  Example5Options o;
  o.t0 = cfg.t0;
  o.t_end = cfg.t_end;
  o.step = cfg.step;
  o.quad = cfg.quad;
  o.picard = cfg.picard;
  o.picard.quad_order = cfg.quad.panel_order;
  o.lambda = cfg.select_lambda(find_roots(example5_ode(cfg.t0).charpoly()));
  const Example5Report rep = example5_harness(o);
  log::info("example5 finished in ", rep.seconds, " s");
  const bool ld = rep.comparison.tail_max_logderiv_error <= kLogDerivTailTol;
  const bool drift = rep.comparison.drift <= kDriftTol;
  const bool fast = rep.seconds <= 60.0;
  json j = envelope_of(cfg, "example5");
  j["report"] = rep.to_json();
  j["pass"] = {{"picard_converged", rep.z.converged},
               {"bound", rep.bound_holds},
               {"logderiv_tail", ld},
               {"drift", drift},
               {"runtime", fast}};
  const bool all = rep.z.converged && rep.bound_holds && ld && drift && fast;
  j["pass"]["all"] = all;
  if (!cfg.csv_dir.empty()) {
    std::vector<std::vector<double>> rows;
    for (std::size_t k = 0; k < rep.comparison.t.size(); ++k)
      rows.push_back({rep.comparison.t[k], rep.z.derivs[0][k].real(), rep.z.envelope[k],
                      std::abs(rep.comparison.logderiv_error[k]), rep.comparison.ratio[k].real(),
                      rep.comparison.ratio[k].imag()});
    write_csv(cfg, "example5.csv", {"t", "z0_re", "envelope", "logderiv_err", "ratio_re", "ratio_im"}, rows);
  }
  emit_json(cfg, j);
  return all ? kOk : kAcceptanceFailure;
}

int selftest(const Common& c) {
  const std::uint64_t seed = c.seed.value_or(kAcceptanceSeed);
  json checks = json::array();
  bool all = true;
  for (int id = 1; id <= kAcceptanceCount; ++id) {
    const CheckResult r = run_check(id, seed);
    std::cerr << format_line(r) << "\n";
    checks.push_back({{"id", r.id}, {"name", r.name}, {"pass", r.passed}, {"summary", r.summary}});
    all = all && r.passed;
  }
  RunConfig cfg;
  cfg.seed = seed;
  cfg.json_path = c.json_out;
  json j = {{"tool", "perron"}, {"version", tool_version()}, {"command", "selftest"}, {"seed", seed},
            {"checks", checks}, {"all_pass", all}};
  emit_json(cfg, j);
  return all ? kOk : kAcceptanceFailure;
}

}  // namespace perron::cli
