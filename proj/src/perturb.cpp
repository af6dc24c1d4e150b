#include "perron/perturb.hpp"

#include <algorithm>
#include <cmath>

#include "perron/error.hpp"

namespace perron {

std::vector<cplx> PerturbedODE::r_at(double t) const {
  std::vector<cplx> out(a.size(), 0.0);
  for (std::size_t i = 0; i < r.size() && i < out.size(); ++i)
    if (!r[i].empty()) out[i] = r[i].evaluate(t);
  return out;
}

bool PerturbedODE::unperturbed() const {
  for (const Expr& e : r) {
    if (e.empty()) continue;
    if (!e.is_constant() || e.evaluate(0.0) != 0.0) return false;
  }
  return true;
}

PerturbationBundle::PerturbationBundle(std::vector<Expr> r, cplx lambda) : r_(std::move(r)), lambda_(lambda) {
  if (r_.size() < 2) throw PreconditionError("perturbation bundle needs order >= 2");
}

std::vector<cplx> PerturbationBundle::evaluate(double t) const {
  std::vector<cplx> out(r_.size(), 0.0);
  for (std::size_t i = 0; i < r_.size(); ++i)
    if (!r_[i].empty()) out[i] = r_[i].evaluate(t);
  return out;
}

cplx PerturbationBundle::p_r_lambda(std::span<const cplx> r, cplx lambda, int k) {
  const int n = static_cast<int>(r.size());
  if (k < 0 || k > n) throw PreconditionError("p_r_lambda: k out of range");
  cplx acc = 0.0;
  for (int i = n - 1; i >= k; --i) acc = acc * lambda + r[i] * binomial(i, k);
  return acc;
}

cplx PerturbationBundle::p_r_lambda(int k, double t) const {
  const auto r = evaluate(t);
  return p_r_lambda(r, lambda_, k);
}

SmallnessDiagnostics smallness_diagnostics(const Expr& r, cplx gamma, const UniformGrid& grid, const QuadConfig& q) {
  q.validate();
  SmallnessDiagnostics d;
  d.t = grid.nodes();
  d.horizon = grid.back();
  const GaussRule& g = gauss_legendre(q.panel_order);
  auto absr = [&](double s) { return std::abs(r.evaluate(s)); };

  // r*: one-unit windows with panels of width <= panel_width
  for (double t : d.t) {
    const int count = std::max(1, static_cast<int>(std::ceil(1.0 / q.panel_width)));
    const double h = 1.0 / count;
    double acc = 0.0;
    for (int p = 0; p < count; ++p)
      for (std::size_t k = 0; k < g.nodes.size(); ++k)
        acc += 0.5 * h * g.weights[k] * absr(t + p * h + 0.5 * h * (g.nodes[k] + 1.0));
    d.r_star.push_back(acc);
  }

  std::vector<double> samples(grid.size);
  for (std::size_t k = 0; k < grid.size; ++k) samples[k] = absr(d.t[k]);
  const std::vector<double> c = cumulative_integral(grid, samples);
  d.r_bar.resize(grid.size);
  for (std::size_t k = 0; k < grid.size; ++k) {
    double best = 0.0;
    for (std::size_t m = k; m < grid.size; ++m) best = std::max(best, (c[m] - c[k]) / (1.0 + d.t[m] - d.t[k]));
    d.r_bar[k] = best;
  }

  const GreenSweep sweep(gamma, grid, q.panel_order);
  d.i_gamma = sweep.apply_abs(samples);
  return d;
}

}  // namespace perron
