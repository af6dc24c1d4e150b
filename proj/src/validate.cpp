#include "perron/validate.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "perron/error.hpp"

namespace perron {
namespace {

using Mat = Eigen::MatrixXcd;

Mat companion(const PerturbedODE& ode, double t) {
  const int n = ode.order();
  const auto r = ode.r_at(t);
  Mat A = Mat::Zero(n, n);
  for (int i = 0; i + 1 < n; ++i) A(i, i + 1) = 1.0;
  for (int i = 0; i < n; ++i) A(n - 1, i) = -(ode.a[i] + r[i]);
  return A;
}

// Dormand-Prince 5(4); returns the 5th-order update and the embedded error estimate.
struct StepResult {
  Mat x;
  double err;
};

StepResult dp45(const PerturbedODE& ode, double t, const Mat& x, double h) {
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = b1 - 5179.0 / 57600, e3 = b3 - 7571.0 / 16695, e4 = b4 - 393.0 / 640,
                          e5 = b5 + 92097.0 / 339200, e6 = b6 - 187.0 / 2100, e7 = -1.0 / 40;
  const Mat k1 = companion(ode, t) * x;
  const Mat k2 = companion(ode, t + c2 * h) * (x + h * a21 * k1);
  const Mat k3 = companion(ode, t + c3 * h) * (x + h * (a31 * k1 + a32 * k2));
  const Mat k4 = companion(ode, t + c4 * h) * (x + h * (a41 * k1 + a42 * k2 + a43 * k3));
  const Mat k5 = companion(ode, t + c5 * h) * (x + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
  const Mat A6 = companion(ode, t + h);
  const Mat k6 = A6 * (x + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
  Mat xn = x + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  const Mat k7 = A6 * xn;
  const Mat err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  double rel = 0.0;
  for (int c = 0; c < x.cols(); ++c) rel = std::max(rel, err.col(c).norm() / std::max(xn.col(c).norm(), 1e-300));
  return {std::move(xn), rel};
}

}  // namespace

Trajectory reference_integrate(const PerturbedODE& ode, std::span<const cplx> y0, double t_end, double step) {
  const int n = ode.order();
  if (static_cast<int>(y0.size()) != n) throw PreconditionError("reference_integrate: y0 must have n entries");
  Trajectory tr;
  tr.grid = UniformGrid::covering(ode.t0, t_end, step);
  Mat x(n, 1);
  for (int i = 0; i < n; ++i) x(i, 0) = y0[i];
  double scale = 0.0;
  tr.state.reserve(tr.grid.size);
  for (std::size_t k = 0; k < tr.grid.size; ++k) {
    const double nrm = x.norm();
    if (!std::isfinite(nrm)) throw NumericError("reference_integrate: state became non-finite");
    if (nrm > 1e50 || (nrm < 1e-50 && nrm > 0.0)) {
      x /= nrm;
      scale += std::log(nrm);
    }
    tr.state.emplace_back(x.data(), x.data() + n);
    tr.log_scale.push_back(scale);
    if (k + 1 == tr.grid.size) break;
    StepResult s = dp45(ode, tr.grid.at(k), x, step);
    tr.max_error_estimate = std::max(tr.max_error_estimate, s.err);
    x = std::move(s.x);
  }
  return tr;
}

std::vector<Trajectory> fundamental_system(const PerturbedODE& ode, std::span<const cplx> roots, double t_end,
                                           double step, double pad) {
  const int n = ode.order();
  if (static_cast<int>(roots.size()) != n) throw PreconditionError("fundamental_system: need n roots");
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return roots[a].real() > roots[b].real(); });

  const UniformGrid report = UniformGrid::covering(ode.t0, t_end, step);
  const UniformGrid full = UniformGrid::covering(ode.t0, report.back() + std::max(pad, 2 * step), step);
  const std::size_t N = full.size;

  Mat V(n, n);
  for (int c = 0; c < n; ++c) {
    cplx p = 1.0;
    for (int i = 0; i < n; ++i) {
      V(i, c) = p;
      p *= roots[order[c]];
    }
  }
  Eigen::HouseholderQR<Mat> qr0(V);
  std::vector<Mat> Q(N), R(N - 1);
  Q[0] = qr0.householderQ() * Mat::Identity(n, n);
  double max_err = 0.0;
  for (std::size_t k = 0; k + 1 < N; ++k) {
    StepResult s = dp45(ode, full.at(k), Q[k], step);
    max_err = std::max(max_err, s.err);
    Eigen::HouseholderQR<Mat> qr(s.x);
    Q[k + 1] = qr.householderQ() * Mat::Identity(n, n);
    R[k] = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int c = 0; c < n; ++c)
      if (!std::isfinite(std::abs(R[k](c, c))) || R[k](c, c) == 0.0)
        throw NumericError("fundamental_system: degenerate frame at t=" + std::to_string(full.at(k + 1)));
  }

  std::vector<Trajectory> out(n);
  for (int rank = 0; rank < n; ++rank) {
    const int m = rank + 1;
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(m);
    c(rank) = 1.0;
    std::vector<Eigen::VectorXcd> coef(N);
    std::vector<double> logs(N, 0.0);
    coef[N - 1] = c;
    for (std::size_t k = N - 1; k-- > 0;) {
      Eigen::VectorXcd v = R[k].topLeftCorner(m, m).triangularView<Eigen::Upper>().solve(coef[k + 1]);
      const double nv = v.norm();
      coef[k] = v / nv;
      logs[k] = logs[k + 1] + std::log(nv);
    }
    Trajectory& tr = out[order[rank]];
    tr.grid = report;
    tr.root = roots[order[rank]];
    tr.max_error_estimate = max_err;
    const double base = logs[0];
    for (std::size_t k = 0; k < report.size; ++k) {
      const Eigen::VectorXcd x = Q[k].leftCols(m) * coef[k];
      tr.state.emplace_back(x.data(), x.data() + n);
      tr.log_scale.push_back(logs[k] - base);
    }
  }
  return out;
}

LogDerivativeProfile log_derivative_profile(const Trajectory& traj, int i) {
  LogDerivativeProfile p;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t k = 0; k < traj.state.size(); ++k) {
    const auto& s = traj.state[k];
    if (i < 0 || i >= static_cast<int>(s.size())) throw PreconditionError("log_derivative_profile: bad order");
    double nrm = 0.0;
    for (cplx v : s) nrm = std::max(nrm, std::abs(v));
    if (std::abs(s[0]) <= 1e-13 * nrm) {
      p.values.emplace_back(nan, nan);
      p.gaps.push_back(k);
    } else {
      p.values.push_back(s[i] / s[0]);
    }
  }
  return p;
}

WronskianCheck wronskian_check(std::span<const Trajectory> trajs, double t_min) {
  const int n = static_cast<int>(trajs.size());
  if (n < 2) throw PreconditionError("wronskian_check: need at least two trajectories");
  const std::size_t K = trajs[0].state.size();
  for (const auto& tr : trajs)
    if (tr.state.size() != K || static_cast<int>(tr.state[0].size()) != n)
      throw PreconditionError("wronskian_check: trajectories must share a grid and have n components");
  WronskianCheck w;
  w.vandermonde = 1.0;
  for (int i = 0; i < n; ++i)
    for (int k = i + 1; k < n; ++k) w.vandermonde *= trajs[k].root - trajs[i].root;
  for (std::size_t k = 0; k < K; ++k) {
    Mat M(n, n);
    double logs = 0.0;
    cplx prod0 = 1.0;
    for (int c = 0; c < n; ++c) {
      const auto& s = trajs[c].state[k];
      for (int i = 0; i < n; ++i) M(i, c) = s[i] / s[0];
      prod0 *= s[0];
      logs += trajs[c].log_scale[k];
    }
    const cplx det = M.determinant();
    const double t = trajs[0].grid.at(k);
    w.t.push_back(t);
    w.ratio.push_back(det);
    w.log_abs_w.push_back(std::log(std::abs(det)) + std::log(std::abs(prod0)) + logs);
    if (t >= t_min - 1e-12) w.max_rel_deviation = std::max(w.max_rel_deviation, std::abs(det / w.vandermonde - 1.0));
  }
  return w;
}

ReferenceComparison compare_with_reference(const Trajectory& ref, const ZSolution& z, const AsymptoticReport& phi) {
  const std::size_t R = std::min({ref.state.size(), z.report_size, phi.grid.size});
  if (R < 4) throw PreconditionError("compare_with_reference: too few common nodes");
  if (std::abs(ref.grid.step - z.grid.step) > 1e-12 || std::abs(ref.grid.t0 - z.grid.t0) > 1e-12)
    throw PreconditionError("compare_with_reference: reference and z grids differ");
  ReferenceComparison out;
  const auto prof = log_derivative_profile(ref, 1);
  const std::size_t start = (R - 1) / 2;
  std::vector<cplx> logratio(R);
  for (std::size_t k = 0; k < R; ++k) {
    const double t = z.grid.at(k);
    out.t.push_back(t);
    out.logderiv_error.push_back(prof.values[k] - (phi.lambda + z.derivs[0][k]));
    const FormulaValue fv = eval_formula(phi, t);
    logratio[k] = std::log(ref.state[k][0]) + ref.log_scale[k] - fv.log_y;
  }
  // unwrap the phase so the least-squares constant is continuous
  for (std::size_t k = 1; k < R; ++k) {
    double d = logratio[k].imag() - logratio[k - 1].imag();
    const double two_pi = 2.0 * std::numbers::pi;
    const double shift = two_pi * std::round(d / two_pi);
    logratio[k] -= cplx(0.0, shift);
  }
  cplx mean = 0.0;
  for (std::size_t k = start; k < R; ++k) mean += logratio[k];
  mean /= static_cast<double>(R - start);
  out.c = std::exp(mean);
  for (std::size_t k = 0; k < R; ++k) {
    out.ratio.push_back(std::exp(logratio[k] - mean));
    if (k >= start) {
      out.drift = std::max(out.drift, std::abs(out.ratio[k] - 1.0));
      out.tail_max_logderiv_error = std::max(out.tail_max_logderiv_error, std::abs(out.logderiv_error[k]));
    }
  }
  return out;
}

}  // namespace perron
