#include "perron/green.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "perron/error.hpp"

namespace perron {

void QuadConfig::validate() const {
  if (panel_order < 4 || panel_order > 64) throw ConfigError("quad.panel_order", "must be in [4, 64]");
  if (!(panel_width > 0.0)) throw ConfigError("quad.panel_width", "must be positive");
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw ConfigError("quad.tail_tol", "must be in (0, 1)");
  if (!(max_interval > 0.0)) throw ConfigError("quad.max_interval", "must be positive");
}

cplx GridFunction::operator()(double t) const {
  if (grid.size == 0) return 0.0;
  if (t > grid.back() + 1e-12 * (1.0 + std::abs(t))) return envelope ? cplx(envelope(t), 0.0) : cplx(0.0);
  return interpolate_cubic(grid, values, t);
}

cplx kernel(cplx omega, double t, double s) {
  const double a = omega.real();
  if (a == 0.0) throw PreconditionError("Green kernel requires Re(omega) != 0");
  const double sg = a > 0 ? 1.0 : -1.0;
  if (sg * (t - s) < 0.0) return -sg * std::exp(omega * (t - s));
  return 0.0;
}

namespace {

// ∫_a^b w(s) f(s) ds by composite Gauss-Legendre with panels no wider than `width`.
template <class Integrand>
cplx panels(double a, double b, double width, const GaussRule& g, Integrand&& fn) {
  if (b <= a) return 0.0;
  const int count = std::max(1, static_cast<int>(std::ceil((b - a) / width - 1e-12)));
  const double h = (b - a) / count;
  cplx acc = 0.0;
  for (int p = 0; p < count; ++p) {
    const double lo = a + p * h;
    for (std::size_t q = 0; q < g.nodes.size(); ++q) {
      const double s = lo + 0.5 * h * (g.nodes[q] + 1.0);
      acc += 0.5 * h * g.weights[q] * fn(s);
    }
  }
  return acc;
}

template <class Weight>
GreenValue integrate(cplx omega, const ScalarFn& f, double t, double t0, const QuadConfig& q,
                     const EnvelopeFn& envelope, Weight&& weight) {
  q.validate();
  const double a = omega.real();
  if (a == 0.0) throw PreconditionError("Green operator requires Re(omega) != 0");
  const GaussRule& g = gauss_legendre(q.panel_order);
  GreenValue out;
  if (a < 0.0) {
    out.value = panels(t0, t, q.panel_width, g, [&](double s) { return weight(t, s) * f(s); });
    return out;
  }
  if (envelope) {
    const double T = tail_bound(omega, t, envelope, q.tail_tol, q.panel_width, q.max_interval);
    out.value = -panels(t, T, q.panel_width, g, [&](double s) { return weight(t, s) * f(s); });
    out.tail_estimate = std::exp(-a * (T - t)) * envelope(T) / a;
    return out;
  }
  // Adaptive: extend panel by panel until the local sup bounds the rest.
  double lo = t;
  cplx acc = 0.0;
  for (;;) {
    const double hi = lo + q.panel_width;
    double local = 0.0;
    acc += panels(lo, hi, q.panel_width, g, [&](double s) {
      const cplx v = f(s);
      local = std::max(local, std::abs(v));
      return weight(t, s) * v;
    });
    lo = hi;
    const double bound = std::exp(-a * (lo - t)) * local / a;
    if (bound < q.tail_tol) {
      out.tail_estimate = bound;
      break;
    }
    if (lo - t >= q.max_interval) {
      out.tail_estimate = bound;
      out.truncated = true;
      break;
    }
  }
  out.value = -acc;
  return out;
}

}  // namespace

GreenValue scalar_green(cplx omega, const ScalarFn& f, double t, double t0, const QuadConfig& q,
                        const EnvelopeFn& envelope) {
  return integrate(omega, f, t, t0, q, envelope, [omega](double tt, double s) { return std::exp(omega * (tt - s)); });
}

GreenValue scalar_abs(cplx omega, const ScalarFn& f, double t, double t0, const QuadConfig& q,
                      const EnvelopeFn& envelope) {
  const double a = omega.real();
  const ScalarFn absf = [&f](double s) { return cplx(std::abs(f(s)), 0.0); };
  GreenValue v = integrate(cplx(a, 0.0), absf, t, t0, q, envelope,
                           [a](double tt, double s) { return cplx(std::exp(a * (tt - s)), 0.0); });
  v.value = std::abs(v.value);
  return v;
}

double tail_bound(cplx omega, double t, const EnvelopeFn& envelope, double tol, double step, double max_interval) {
  const double a = omega.real();
  if (a == 0.0) throw PreconditionError("tail_bound requires Re(omega) != 0");
  if (a < 0.0) return t;
  if (!(step > 0.0)) throw PreconditionError("tail_bound step must be positive");
  const long long max_k = static_cast<long long>(std::ceil(max_interval / step));
  for (long long k = 0; k <= max_k; ++k) {
    const double T = t + static_cast<double>(k) * step;
    const double env = envelope ? envelope(T) : 1.0;
    if (std::exp(-a * (T - t)) * env / a < tol) return T;
  }
  std::ostringstream os;
  const double T = t + max_interval;
  os << "tail_bound: tolerance " << tol << " not reached within " << max_interval
     << "; bound at cap = " << std::exp(-a * max_interval) * (envelope ? envelope(T) : 1.0) / a;
  throw NumericError(os.str());
}

cplx composite_green(const SpectralData& s, const ScalarFn& f, double t, double t0, int i, const QuadConfig& q,
                     const EnvelopeFn& envelope) {
  const int n = s.order();
  if (i < 0 || i > n - 1) throw PreconditionError("composite_green: derivative order out of range");
  cplx acc = 0.0;
  for (std::size_t j = 0; j < s.gamma.size(); ++j)
    acc += std::pow(s.gamma[j], i) / s.Gamma[j] * scalar_green(s.gamma[j], f, t, t0, q, envelope).value;
  if (i == n - 1) acc += f(t);
  return acc;
}

GreenSweep::GreenSweep(cplx omega, const UniformGrid& grid, int quad_order) : omega_(omega), grid_(grid) {
  if (omega.real() == 0.0) throw PreconditionError("GreenSweep requires Re(omega) != 0");
  if (grid.size < 4) throw PreconditionError("GreenSweep needs at least 4 grid nodes");
  const double h = grid.step;
  const double a = omega.real();
  w_ = exp_cell_weights(-omega * h, h, quad_order);
  w_abs_ = exp_cell_weights(cplx(-a * h, 0.0), h, quad_order);
  if (a > 0.0) {
    decay_ = std::exp(-omega * h);
    decay_abs_ = std::exp(-a * h);
  } else {
    decay_ = std::exp(omega * h);
    decay_abs_ = std::exp(a * h);
  }
}

std::vector<cplx> GreenSweep::apply(std::span<const cplx> f) const {
  const std::size_t N = grid_.size;
  if (f.size() != N) throw PreconditionError("GreenSweep: sample count mismatch");
  std::vector<cplx> G(N, 0.0);
  auto cell = [&](std::size_t k) {
    const std::size_t s = stencil_start(k, N);
    const auto& w = w_.stencils[k - s];
    return f[s] * w[0] + f[s + 1] * w[1] + f[s + 2] * w[2] + f[s + 3] * w[3];
  };
  if (omega_.real() > 0.0) {
    for (std::size_t k = N - 1; k-- > 0;) G[k] = decay_ * G[k + 1] - cell(k);
  } else {
    for (std::size_t k = 0; k + 1 < N; ++k) G[k + 1] = decay_ * (G[k] + cell(k));
  }
  return G;
}

std::vector<double> GreenSweep::apply_abs(std::span<const double> absf) const {
  const std::size_t N = grid_.size;
  if (absf.size() != N) throw PreconditionError("GreenSweep: sample count mismatch");
  std::vector<double> I(N, 0.0);
  auto cell = [&](std::size_t k) {
    const std::size_t s = stencil_start(k, N);
    const auto& w = w_abs_.stencils[k - s];
    return absf[s] * w[0].real() + absf[s + 1] * w[1].real() + absf[s + 2] * w[2].real() + absf[s + 3] * w[3].real();
  };
  if (omega_.real() > 0.0) {
    for (std::size_t k = N - 1; k-- > 0;) I[k] = decay_abs_ * I[k + 1] + cell(k);
  } else {
    for (std::size_t k = 0; k + 1 < N; ++k) I[k + 1] = decay_abs_ * (I[k] + cell(k));
  }
  return I;
}

}  // namespace perron
