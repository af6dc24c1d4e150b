#include "perron/charpoly.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace perron {

CharPoly::CharPoly(std::vector<cplx> lower) : coeffs_(std::move(lower)) {
  if (coeffs_.size() < 2) throw PreconditionError("characteristic polynomial must have degree >= 2");
  coeffs_.push_back(1.0);
}

CharPoly CharPoly::from_roots(std::span<const cplx> roots) {
  std::vector<cplx> c{1.0};
  for (cplx r : roots) {
    std::vector<cplx> next(c.size() + 1, 0.0);
    for (std::size_t k = 0; k < c.size(); ++k) {
      next[k + 1] += c[k];
      next[k] -= r * c[k];
    }
    c = std::move(next);
  }
  c.pop_back();
  return CharPoly(std::move(c));
}

cplx CharPoly::operator()(cplx x) const {
  cplx acc = 0.0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

bool CharPoly::has_real_coefficients() const {
  return std::all_of(coeffs_.begin(), coeffs_.end(), [](cplx c) { return c.imag() == 0.0; });
}

cplx poly_derivative_at(const CharPoly& p, cplx lambda, int j) {
  const auto& a = p.coefficients();
  const int n = p.degree();
  if (j < 0) throw PreconditionError("poly_derivative_at: negative order");
  cplx acc = 0.0;
  for (int i = n; i >= j; --i) acc = acc * lambda + a[i] * binomial(i, j);
  return acc;
}

std::vector<cplx> derivative_operator_coefficients(const CharPoly& p, cplx lambda) {
  std::vector<cplx> d(p.degree());
  for (int j = 1; j <= p.degree(); ++j) d[j - 1] = poly_derivative_at(p, lambda, j);
  return d;
}

double root_residual(const CharPoly& p, std::span<const cplx> roots) {
  double worst = 0.0;
  for (cplx r : roots) {
    double scale = 0.0, ar = 1.0;
    for (cplx a : p.coefficients()) {
      scale += std::abs(a) * ar;
      ar *= std::abs(r);
    }
    worst = std::max(worst, std::abs(p(r)) / scale);
  }
  return worst;
}

namespace {

void sort_roots(std::vector<cplx>& r) {
  std::sort(r.begin(), r.end(), [](cplx a, cplx b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
}

cplx derivative(const std::vector<cplx>& a, cplx x) {
  cplx acc = 0.0;
  for (std::size_t i = a.size() - 1; i >= 1; --i) acc = acc * x + a[i] * static_cast<double>(i);
  return acc;
}

bool aberth(const CharPoly& p, std::uint64_t seed, const RootOptions& opts, std::vector<cplx>& z) {
  const auto& a = p.coefficients();
  const int n = p.degree();
  double radius = 0.0;  // Cauchy bound
  for (int i = 0; i < n; ++i) radius = std::max(radius, std::abs(a[i]));
  radius = 1.0 + radius;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> jitter(-0.25, 0.25);
  z.resize(n);
  for (int k = 0; k < n; ++k) {
    const double theta = 2.0 * std::numbers::pi * (k + 0.5 + jitter(rng)) / n;
    z[k] = std::polar(radius * (0.5 + 0.1 * (jitter(rng) + 0.25)), theta);
  }
  for (int it = 0; it < opts.max_iter; ++it) {
    double worst = 0.0;
    for (int k = 0; k < n; ++k) {
      const cplx pk = p(z[k]);
      const cplx dk = derivative(a, z[k]);
      if (pk == 0.0) continue;
      const cplx ratio = pk / dk;
      cplx s = 0.0;
      for (int j = 0; j < n; ++j)
        if (j != k) s += 1.0 / (z[k] - z[j]);
      const cplx step = ratio / (1.0 - ratio * s);
      if (!std::isfinite(step.real()) || !std::isfinite(step.imag())) return false;
      z[k] -= step;
      worst = std::max(worst, std::abs(step) / (1.0 + std::abs(z[k])));
    }
    if (worst < opts.tol) return true;
  }
  return false;
}

std::vector<cplx> newton_deflation(const CharPoly& p) {
  std::vector<cplx> work(p.coefficients());
  std::vector<cplx> roots;
  while (work.size() > 2) {
    cplx x(0.4, 0.9);
    for (int it = 0; it < 500; ++it) {
      cplx v = 0.0, dv = 0.0;
      for (auto c = work.rbegin(); c != work.rend(); ++c) {
        dv = dv * x + v;
        v = v * x + *c;
      }
      if (dv == 0.0) {
        x += cplx(0.1, 0.1);
        continue;
      }
      const cplx step = v / dv;
      x -= step;
      if (std::abs(step) < 1e-15 * (1.0 + std::abs(x))) break;
    }
    roots.push_back(x);
    std::vector<cplx> q(work.size() - 1);
    cplx carry = work.back();
    for (std::size_t i = work.size() - 1; i-- > 0;) {
      q[i] = carry;
      carry = work[i] + carry * x;
    }
    work = std::move(q);
  }
  roots.push_back(-work[0] / work[1]);
  return roots;
}

void polish(const CharPoly& p, std::vector<cplx>& z) {
  for (cplx& r : z) {
    for (int it = 0; it < 3; ++it) {
      const cplx d = derivative(p.coefficients(), r);
      if (d == 0.0) break;
      const cplx step = p(r) / d;
      if (!std::isfinite(std::abs(step))) break;
      r -= step;
    }
  }
}

void snap_real(const CharPoly& p, std::vector<cplx>& z) {
  if (!p.has_real_coefficients()) return;
  for (cplx& r : z)
    if (std::abs(r.imag()) <= 1e-12 * (1.0 + std::abs(r))) r = cplx(r.real(), 0.0);
}

}  // namespace

std::vector<cplx> find_roots(const CharPoly& p, const RootOptions& opts) {
  std::vector<cplx> z;
  const double accept = 1e-10;
  for (int attempt = 0; attempt < 4; ++attempt) {
    if (aberth(p, opts.seed + 7919ULL * attempt, opts, z)) {
      polish(p, z);
      snap_real(p, z);
      if (root_residual(p, z) < accept) {
        sort_roots(z);
        return z;
      }
    }
  }
  z = newton_deflation(p);
  polish(p, z);
  snap_real(p, z);
  const double res = root_residual(p, z);
  if (res >= accept) {
    std::ostringstream os;
    os << "find_roots: no convergence; residuals:";
    for (cplx r : z) os << ' ' << std::abs(p(r));
    throw NumericError(os.str());
  }
  sort_roots(z);
  return z;
}

double SpectralData::min_abs_alpha() const {
  double m = INFINITY;
  for (double a : alpha) m = std::min(m, std::abs(a));
  return m;
}

cplx SpectralData::kappa() const {
  cplx prod = 1.0;
  for (cplx g : gamma) prod *= g;
  const double sign = (order() % 2 == 0) ? 1.0 : -1.0;
  return sign / prod;
}

SpectralData spectral_from_shifts(cplx lambda, std::vector<cplx> gamma, std::optional<double> beta) {
  SpectralData s;
  s.lambda = lambda;
  s.gamma = std::move(gamma);
  const std::size_t m = s.gamma.size();
  if (m < 1) throw PreconditionError("spectral data needs at least one shift");
  const int n = static_cast<int>(m) + 1;
  for (std::size_t j = 0; j < m; ++j) {
    const double a = s.gamma[j].real();
    if (a == 0.0) throw PreconditionError("shift " + std::to_string(j) + " has zero real part");
    s.alpha.push_back(a);
    cplx G = 1.0;
    for (std::size_t k = 0; k < m; ++k)
      if (k != j) G *= s.gamma[j] - s.gamma[k];
    s.Gamma.push_back(G);
    double at = 0.0, p = 1.0;
    for (int i = 0; i <= n - 2; ++i) {
      at += p;
      p *= std::abs(s.gamma[j]);
    }
    s.alpha_tilde.push_back(at);
    s.gamma_tilde += at / std::abs(G);
  }
  const double amin = s.min_abs_alpha();
  s.beta = beta.value_or(0.5 * amin);
  if (!(s.beta > 0.0 && s.beta < amin))
    throw PreconditionError("beta must lie in (0, min|Re gamma_j|) = (0, " + std::to_string(amin) + ")");
  return s;
}

SpectralData spectral_data(std::span<const cplx> roots, cplx lambda, std::optional<double> beta) {
  if (roots.size() < 2) throw PreconditionError("spectral_data needs at least two roots");
  double scale = 0.0;
  for (cplx r : roots) scale = std::max(scale, std::abs(r));
  const double gap_tol = 1e-8 * (1.0 + scale);
  for (std::size_t i = 0; i < roots.size(); ++i)
    for (std::size_t j = i + 1; j < roots.size(); ++j)
      if (std::abs(roots[i].real() - roots[j].real()) < gap_tol) {
        std::ostringstream os;
        os << "roots " << i << " and " << j << " have real parts closer than " << gap_tol;
        throw PreconditionError(os.str());
      }
  std::size_t idx = roots.size();
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (std::abs(roots[i] - lambda) <= 1e-8 * (1.0 + std::abs(lambda))) idx = i;
  if (idx == roots.size()) {
    std::ostringstream os;
    os << "lambda " << lambda << " is not a root of the characteristic polynomial";
    throw PreconditionError(os.str());
  }
  std::vector<cplx> gamma;
  for (std::size_t i = 0; i < roots.size(); ++i)
    if (i != idx) gamma.push_back(roots[i] - roots[idx]);
  SpectralData s = spectral_from_shifts(roots[idx], std::move(gamma), beta);
  s.roots.assign(roots.begin(), roots.end());
  s.lambda_index = idx;
  return s;
}

WeightCheck partial_fraction_weights_check(const SpectralData& s, double tol) {
  WeightCheck out;
  const int m = static_cast<int>(s.gamma.size());
  for (int i = 0; i <= m - 1; ++i) {
    cplx sum = 0.0;
    for (std::size_t j = 0; j < s.gamma.size(); ++j) sum += std::pow(s.gamma[j], i) / s.Gamma[j];
    const double target = (i == m - 1) ? 1.0 : 0.0;
    out.residuals.push_back(std::abs(sum - target));
  }
  cplx inv = 0.0;
  for (std::size_t j = 0; j < s.gamma.size(); ++j) inv += 1.0 / (s.Gamma[j] * s.gamma[j]);
  out.residuals.push_back(std::abs(inv - s.kappa()));
  out.max_residual = *std::max_element(out.residuals.begin(), out.residuals.end());
  out.ok = out.max_residual <= tol;
  return out;
}

}  // namespace perron
