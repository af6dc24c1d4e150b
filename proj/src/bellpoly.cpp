#include "perron/bellpoly.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <mutex>
#include <optional>

namespace perron {

int total_degree(const Exponents& e) {
  int d = 0;
  for (int x : e) d += x;
  return d;
}

bool GradedLexGreater::operator()(const Exponents& a, const Exponents& b) const {
  const int da = total_degree(a), db = total_degree(b);
  if (da != db) return da > db;
  return a > b;
}

std::int64_t binomial_int(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  std::int64_t r = 1;
  for (int j = 1; j <= k; ++j) r = r * (n - k + j) / j;
  return r;
}

double binomial(int n, int k) { return static_cast<double>(binomial_int(n, k)); }

namespace {

std::string monomial_text(const Exponents& e) {
  std::string out;
  for (std::size_t v = 0; v < e.size(); ++v) {
    if (e[v] == 0) continue;
    if (!out.empty()) out += '*';
    out += 'x' + std::to_string(v + 1);
    if (e[v] > 1) out += '^' + std::to_string(e[v]);
  }
  return out;
}

std::string shortest(double x) {
  std::array<char, 32> buf{};
  auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

std::string coefficient_text(cplx c) {
  if (c.imag() == 0.0) return shortest(c.real());
  if (c.real() == 0.0) return shortest(c.imag()) + "i";
  std::string im = shortest(c.imag());
  if (im.front() != '-') im = "+" + im;
  return "(" + shortest(c.real()) + im + "i)";
}

template <class Coeff, class Text>
std::string render(const MultiIndexPoly<Coeff>& p, Text coeff_text) {
  if (p.is_zero()) return "0";
  std::string out;
  for (const auto& [e, c] : p.terms()) {
    const std::string mono = monomial_text(e);
    std::string ct = coeff_text(c);
    bool negative = false;
    if (!ct.empty() && ct.front() == '-') {
      negative = true;
      ct.erase(0, 1);
    }
    if (!out.empty() || negative) out += negative ? '-' : '+';
    if (mono.empty()) {
      out += ct;
    } else {
      if (ct != "1") out += ct + "*";
      out += mono;
    }
  }
  return out;
}

std::mutex& bell_mutex() {
  static std::mutex mu;
  return mu;
}

std::vector<std::optional<IntPoly>>& bell_cache() {
  static std::vector<std::optional<IntPoly>> cache(kMaxBellOrder + 1);
  return cache;
}

}  // namespace

std::string to_string(const IntPoly& p) {
  return render(p, [](std::int64_t c) { return std::to_string(c); });
}

std::string to_string(const ComplexPoly& p) { return render(p, coefficient_text); }

const IntPoly& complete_bell(int i) {
  if (i < 0) throw PreconditionError("complete_bell: negative order");
  if (i > kMaxBellOrder)
    throw SizeLimitError("complete_bell: order " + std::to_string(i) + " exceeds the cap of " +
                         std::to_string(kMaxBellOrder));
  std::lock_guard lock(bell_mutex());
  auto& cache = bell_cache();
  if (!cache[0]) cache[0] = IntPoly::constant(0, 1);
  for (int m = 1; m <= i; ++m) {
    if (cache[m]) continue;
    // B_m = Σ_{j=0}^{m-1} C(m-1, j) B_{m-1-j} x_{j+1}
    IntPoly acc(m);
    for (int j = 0; j < m; ++j) {
      IntPoly term = cache[m - 1 - j]->extended(m) * IntPoly::variable(m, j);
      acc += term.scaled(binomial_int(m - 1, j));
    }
    cache[m] = std::move(acc);
  }
  return *cache[i];
}

ComplexPoly bell_shift_expand(int i, cplx lambda) {
  ComplexPoly out(i);
  cplx lp = 1.0;  // λ^{i-j}, built from j = i downwards
  for (int j = i; j >= 0; --j) {
    out += complete_bell(j).cast<cplx>().extended(i).scaled(binomial(i, j) * lp);
    lp *= lambda;
  }
  return out;
}

IntPoly nonlinear_remainder(int i) {
  if (i < 1) throw PreconditionError("nonlinear_remainder: order must be >= 1");
  const IntPoly& b = complete_bell(i + 1);
  IntPoly out(i);
  for (const auto& [e, c] : b.terms()) {
    if (e[i] != 0) continue;  // the lone x_{i+1} term
    out.add_term(Exponents(e.begin(), e.begin() + i), c);
  }
  return out;
}

std::vector<std::pair<int, IntPoly>> degree_split(int i) {
  const IntPoly f = nonlinear_remainder(i);
  std::vector<std::pair<int, IntPoly>> parts;
  for (int k = 2; k <= i + 1; ++k) {
    IntPoly h = f.homogeneous_part(k);
    if (!h.is_zero()) parts.emplace_back(k, std::move(h));
  }
  return parts;
}

cplx eval_poly(const IntPoly& p, std::span<const cplx> point) { return p.evaluate(point); }
cplx eval_poly(const ComplexPoly& p, std::span<const cplx> point) { return p.evaluate(point); }

}  // namespace perron
