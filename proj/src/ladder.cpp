#include "perron/ladder.hpp"

#include <cmath>

#include "perron/error.hpp"

namespace perron {

cplx ThetaLadder::sum(std::size_t k, int i) const {
  cplx acc = 0.0;
  for (const auto& th : theta) acc += (i < th.order() - 1) ? th.derivs[i][k] : th.top[k];
  return acc;
}

namespace {

// Σ over compositions c_1+...+c_d = target (c_s >= 1) of Π θ_{c_s}^{(slot_s)}(t_k).
cplx composition_sum(const std::vector<GreenStack>& th, const std::vector<int>& slots, std::size_t pos, int target,
                     std::size_t k) {
  const std::size_t left = slots.size() - pos;
  if (left == 0) return target == 0 ? cplx(1.0) : cplx(0.0);
  cplx acc = 0.0;
  const int hi = target - static_cast<int>(left - 1);
  for (int c = 1; c <= hi && c <= static_cast<int>(th.size()); ++c)
    acc += th[c - 1].derivs[slots[pos]][k] * composition_sum(th, slots, pos + 1, target - c, k);
  return acc;
}

std::vector<int> slots_of(const Exponents& e) {
  std::vector<int> s;
  for (std::size_t v = 0; v < e.size(); ++v)
    for (int p = 0; p < e[v]; ++p) s.push_back(static_cast<int>(v));
  return s;
}

cplx generic_integrand(const RiccatiSystem& sys, const SystemSamples& S, const std::vector<GreenStack>& th,
                       const std::vector<std::vector<int>>& slots, int l, std::size_t k) {
  const int n = sys.order;
  cplx h = (l == 1) ? S.P[k] : cplx(0.0);
  if (l >= 2)
    for (int m = 0; m < n - 1; ++m) h += S.Lc[k][m] * th[l - 2].derivs[m][k];
  for (std::size_t t = 0; t < sys.f_terms.size(); ++t) {
    const FTerm& term = sys.f_terms[t];
    const int d = term.degree;
    if (term.constant != 0.0 && d <= l) h += term.constant * composition_sum(th, slots[t], 0, l, k);
    if (d <= l - 1) {
      cplx rc = 0.0;
      for (int i = 0; i < n; ++i) rc += term.r_coeff[i] * S.r[k][i];
      if (rc != 0.0) h += rc * composition_sum(th, slots[t], 0, l - 1, k);
    }
  }
  return h;
}

// Hand-expanded order-l integrands for n = 5 (l <= 4).
cplx explicit5_integrand(const RiccatiSystem& sys, const SystemSamples& S, const std::vector<GreenStack>& th, int l,
                         std::size_t k) {
  auto T = [&](int idx, int v) { return th[idx - 1].derivs[v][k]; };
  const auto& r = S.r[k];
  const cplx a2 = sys.tilde_a(2), a3 = sys.tilde_a(3), a4 = sys.tilde_a(4);
  const cplx r2 = sys.tilde_r(2, r), r3 = sys.tilde_r(3, r), r4 = sys.tilde_r(4, r);
  auto L = [&](int idx) {
    cplx acc = 0.0;
    for (int m = 0; m < 4; ++m) acc += S.Lc[k][m] * T(idx, m);
    return acc;
  };
  // quadratic form of F for a pair (i, j), symmetric sum over both orders
  auto quad = [&](int i, int j) {
    const cplx x0 = T(i, 0), x1 = T(i, 1), x2 = T(i, 2), x3 = T(i, 3);
    const cplx y0 = T(j, 0), y1 = T(j, 1), y2 = T(j, 2), y3 = T(j, 3);
    return a2 * x0 * y0 + 3.0 * a3 * x0 * y1 + a4 * (4.0 * x0 * y2 + 3.0 * x1 * y1) + 5.0 * x0 * y3 +
           10.0 * x1 * y2;
  };
  auto quad_r = [&](int i, int j) {
    const cplx x0 = T(i, 0), x1 = T(i, 1);
    const cplx y0 = T(j, 0), y1 = T(j, 1), y2 = T(j, 2);
    return r2 * x0 * y0 + 3.0 * r3 * x0 * y1 + r4 * (4.0 * x0 * y2 + 3.0 * x1 * y1);
  };
  switch (l) {
    case 1:
      return S.P[k];
    case 2:
      return L(1) + quad(1, 1);
    case 3: {
      const cplx t0 = T(1, 0), t1 = T(1, 1), t2 = T(1, 2);
      return L(2) + quad_r(1, 1) + quad(1, 2) + quad(2, 1) + a3 * t0 * t0 * t0 + 6.0 * a4 * t0 * t0 * t1 +
             15.0 * t0 * t1 * t1 + 10.0 * t0 * t0 * t2;
    }
    case 4: {
      const cplx p0 = T(1, 0), p1 = T(1, 1), p2 = T(1, 2);
      const cplx q0 = T(2, 0), q1 = T(2, 1), q2 = T(2, 2);
      const cplx cubic = 3.0 * a3 * p0 * p0 * q0 + 6.0 * a4 * (2.0 * p0 * q0 * p1 + p0 * p0 * q1) +
                         15.0 * (q0 * p1 * p1 + 2.0 * p0 * p1 * q1) + 10.0 * (2.0 * p0 * q0 * p2 + p0 * p0 * q2);
      const cplx quartic = a4 * p0 * p0 * p0 * p0 + 10.0 * p0 * p0 * p0 * p1;
      const cplx r_part = quad_r(1, 2) + quad_r(2, 1) + r3 * p0 * p0 * p0 + 6.0 * r4 * p0 * p0 * p1;
      return L(3) + quad(1, 3) + quad(3, 1) + quad(2, 2) + cubic + quartic + r_part;
    }
    default:
      throw SizeLimitError("explicit n=5 ladder stops at depth 4");
  }
}

}  // namespace

ThetaLadder theta_ladder(const RiccatiSystem& sys, const SpectralData& s, const UniformGrid& grid, int m,
                         const GreenStack* z, LadderMode mode, int quad_order) {
  if (m < 1) throw PreconditionError("theta_ladder: depth must be >= 1");
  if (m > kMaxLadderDepth)
    throw SizeLimitError("theta_ladder: depth " + std::to_string(m) + " exceeds the cap of " +
                         std::to_string(kMaxLadderDepth));
  const bool use5 = mode == LadderMode::kExplicit5 || (mode == LadderMode::kAuto && sys.order == 5);
  if (use5 && sys.order != 5) throw PreconditionError("explicit ladder recursion requires n = 5");

  const SystemSamples S = sample_system(sys, grid);
  const GreenBank bank(s, grid, quad_order);
  std::vector<std::vector<int>> slots;
  for (const auto& t : sys.f_terms) slots.push_back(slots_of(t.exps));

  ThetaLadder out;
  out.explicit_n5 = use5;
  for (int l = 1; l <= m; ++l) {
    std::vector<cplx> h(grid.size);
    for (std::size_t k = 0; k < grid.size; ++k)
      h[k] = use5 ? explicit5_integrand(sys, S, out.theta, l, k) : generic_integrand(sys, S, out.theta, slots, l, k);
    out.theta.push_back(bank.solve(h));
  }
  if (z != nullptr) {
    if (z->size() != grid.size) throw PreconditionError("theta_ladder: reference z lives on a different grid");
    out.psi = z->derivs;
    for (std::size_t i = 0; i < out.psi.size(); ++i)
      for (std::size_t k = 0; k < grid.size; ++k) out.psi[i][k] -= out.sum(k, static_cast<int>(i));
  }
  return out;
}

double psi_tail_l1(const ThetaLadder& ladder, const UniformGrid& grid, std::size_t report_size) {
  if (ladder.psi.empty()) throw PreconditionError("psi_tail_l1: ladder has no reference solution");
  const std::size_t start = (report_size - 1) / 2;
  double acc = 0.0;
  for (std::size_t k = start; k + 1 < report_size; ++k)
    acc += 0.5 * grid.step * (std::abs(ladder.psi[0][k]) + std::abs(ladder.psi[0][k + 1]));
  return acc;
}

}  // namespace perron
