#include "perron/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "perron/error.hpp"

namespace perron {

const GaussRule& gauss_legendre(int order) {
  if (order < 1 || order > 64) throw PreconditionError("Gauss-Legendre order must be in [1, 64]");
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mu);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  GaussRule rule;
  rule.nodes.resize(order);
  rule.weights.resize(order);
  for (int i = 0; i < order; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      if (order == 1) p0 = 1.0;
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

UniformGrid UniformGrid::covering(double t0, double t_end, double step) {
  if (!(step > 0.0)) throw PreconditionError("grid step must be positive");
  if (!(t_end > t0)) throw PreconditionError("grid end must exceed its start");
  const double cells = std::ceil((t_end - t0) / step - 1e-9);
  return UniformGrid{t0, step, static_cast<std::size_t>(cells) + 1};
}

std::vector<double> UniformGrid::nodes() const {
  std::vector<double> out(size);
  for (std::size_t k = 0; k < size; ++k) out[k] = at(k);
  return out;
}

namespace {

double lagrange(int m, double u, int p) {
  // nodes at -p, 1-p, 2-p, 3-p
  double v = 1.0;
  const double xm = m - p;
  for (int j = 0; j < 4; ++j) {
    if (j == m) continue;
    const double xj = j - p;
    v *= (u - xj) / (xm - xj);
  }
  return v;
}

template <class T>
T interp(const UniformGrid& grid, std::span<const T> f, double t) {
  if (grid.size < 4) throw PreconditionError("cubic interpolation needs at least 4 nodes");
  const double x = (t - grid.t0) / grid.step;
  long long k = static_cast<long long>(std::floor(x));
  k = std::clamp<long long>(k, 0, static_cast<long long>(grid.size) - 2);
  const std::size_t s = stencil_start(static_cast<std::size_t>(k), grid.size);
  const double u = x - static_cast<double>(k);
  const int p = static_cast<int>(static_cast<std::size_t>(k) - s);
  T acc{};
  for (int m = 0; m < 4; ++m) acc += f[s + m] * lagrange(m, u, p);
  return acc;
}

template <class T>
std::vector<T> running(const UniformGrid& grid, std::span<const T> f) {
  if (f.size() != grid.size) throw PreconditionError("cumulative_integral: size mismatch");
  std::vector<T> out(grid.size, T{});
  if (grid.size < 4) {
    for (std::size_t k = 1; k < grid.size; ++k) out[k] = out[k - 1] + 0.5 * grid.step * (f[k] + f[k - 1]);
    return out;
  }
  const CellWeights w = exp_cell_weights(0.0, grid.step, 6);
  for (std::size_t k = 0; k + 1 < grid.size; ++k) {
    const std::size_t s = stencil_start(k, grid.size);
    const auto& ws = w.stencils[k - s];
    T cell{};
    for (int m = 0; m < 4; ++m) cell += f[s + m] * ws[m].real();
    out[k + 1] = out[k] + cell;
  }
  return out;
}

}  // namespace

std::size_t stencil_start(std::size_t k, std::size_t size) {
  if (k == 0) return 0;
  if (k + 2 >= size) return size - 4;
  return k - 1;
}

CellWeights exp_cell_weights(cplx c, double h, int quad_order) {
  const GaussRule& g = gauss_legendre(std::max(quad_order, 4));
  CellWeights out{};
  for (int p = 0; p < 3; ++p) {
    for (int m = 0; m < 4; ++m) {
      cplx acc = 0.0;
      for (std::size_t q = 0; q < g.nodes.size(); ++q) {
        const double u = 0.5 * (g.nodes[q] + 1.0);
        acc += 0.5 * g.weights[q] * std::exp(c * u) * lagrange(m, u, p);
      }
      out.stencils[p][m] = h * acc;
    }
  }
  return out;
}

std::vector<cplx> cumulative_integral(const UniformGrid& grid, std::span<const cplx> f) { return running(grid, f); }
std::vector<double> cumulative_integral(const UniformGrid& grid, std::span<const double> f) {
  return running(grid, f);
}

cplx interpolate_cubic(const UniformGrid& grid, std::span<const cplx> f, double t) { return interp(grid, f, t); }
double interpolate_cubic(const UniformGrid& grid, std::span<const double> f, double t) { return interp(grid, f, t); }

std::vector<cplx> differentiate(const UniformGrid& grid, std::span<const cplx> f) {
  const std::size_t n = f.size();
  if (n < 5) throw PreconditionError("differentiate needs at least 5 nodes");
  const double h = grid.step;
  std::vector<cplx> d(n);
  for (std::size_t k = 0; k < n; ++k) {
    if (k >= 2 && k + 2 < n) {
      d[k] = (f[k - 2] - 8.0 * f[k - 1] + 8.0 * f[k + 1] - f[k + 2]) / (12.0 * h);
    } else if (k < 2) {
      // fourth-order forward/offset stencils
      if (k == 0)
        d[k] = (-25.0 * f[0] + 48.0 * f[1] - 36.0 * f[2] + 16.0 * f[3] - 3.0 * f[4]) / (12.0 * h);
      else
        d[k] = (-3.0 * f[0] - 10.0 * f[1] + 18.0 * f[2] - 6.0 * f[3] + f[4]) / (12.0 * h);
    } else {
      const std::size_t e = n - 1;
      if (k == e)
        d[k] = (25.0 * f[e] - 48.0 * f[e - 1] + 36.0 * f[e - 2] - 16.0 * f[e - 3] + 3.0 * f[e - 4]) / (12.0 * h);
      else
        d[k] = (3.0 * f[e] + 10.0 * f[e - 1] - 18.0 * f[e - 2] + 6.0 * f[e - 3] - f[e - 4]) / (12.0 * h);
    }
  }
  return d;
}

}  // namespace perron
