#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "perron/error.hpp"

namespace perron {

using cplx = std::complex<double>;

/// Dense exponent vector; entry v is the power of x_{v+1}.
using Exponents = std::vector<int>;

/// Highest Bell order the library will build.
inline constexpr int kMaxBellOrder = 16;
/// Highest supported polynomial arity.
inline constexpr std::size_t kMaxArity = 16;

int total_degree(const Exponents& e);

/// Graded-lex order, largest first: higher total degree, then lexicographically larger exponents.
struct GradedLexGreater {
  bool operator()(const Exponents& a, const Exponents& b) const;
};

/// Sparse polynomial in x_1..x_arity.  Terms with zero coefficient are never stored.
template <class Coeff>
class MultiIndexPoly {
 public:
  using TermMap = std::map<Exponents, Coeff, GradedLexGreater>;

  explicit MultiIndexPoly(std::size_t arity = 0) : arity_(arity) {
    if (arity > kMaxArity) throw SizeLimitError("polynomial arity " + std::to_string(arity) + " exceeds 16");
  }

  static MultiIndexPoly constant(std::size_t arity, Coeff c) {
    MultiIndexPoly p(arity);
    p.add_term(Exponents(arity, 0), c);
    return p;
  }

  /// The monomial x_{index+1}.
  static MultiIndexPoly variable(std::size_t arity, std::size_t index) {
    if (index >= arity) throw PreconditionError("variable index out of range");
    MultiIndexPoly p(arity);
    Exponents e(arity, 0);
    e[index] = 1;
    p.add_term(std::move(e), Coeff{1});
    return p;
  }

  std::size_t arity() const { return arity_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  void add_term(Exponents e, Coeff c) {
    if (e.size() != arity_) throw PreconditionError("exponent vector arity mismatch");
    if (c == Coeff{}) return;
    auto [it, inserted] = terms_.try_emplace(std::move(e), c);
    if (!inserted) {
      it->second += c;
      if (it->second == Coeff{}) terms_.erase(it);
    }
  }

  Coeff coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coeff{} : it->second;
  }

  /// Same polynomial viewed in more variables.
  MultiIndexPoly extended(std::size_t new_arity) const {
    if (new_arity < arity_) throw PreconditionError("cannot shrink arity");
    MultiIndexPoly out(new_arity);
    for (const auto& [e, c] : terms_) {
      Exponents f = e;
      f.resize(new_arity, 0);
      out.terms_.emplace(std::move(f), c);
    }
    return out;
  }

  MultiIndexPoly& operator+=(const MultiIndexPoly& o) {
    check_arity(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }
  MultiIndexPoly& operator-=(const MultiIndexPoly& o) {
    check_arity(o);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
  }
  friend MultiIndexPoly operator+(MultiIndexPoly a, const MultiIndexPoly& b) { return a += b; }
  friend MultiIndexPoly operator-(MultiIndexPoly a, const MultiIndexPoly& b) { return a -= b; }

  friend MultiIndexPoly operator*(const MultiIndexPoly& a, const MultiIndexPoly& b) {
    a.check_arity(b);
    MultiIndexPoly out(a.arity_);
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        Exponents e(a.arity_);
        for (std::size_t v = 0; v < a.arity_; ++v) e[v] = ea[v] + eb[v];
        out.add_term(std::move(e), ca * cb);
      }
    }
    return out;
  }

  MultiIndexPoly scaled(Coeff s) const {
    MultiIndexPoly out(arity_);
    for (const auto& [e, c] : terms_) out.add_term(e, c * s);
    return out;
  }

  int max_degree() const { return terms_.empty() ? -1 : total_degree(terms_.begin()->first); }
  int min_degree() const { return terms_.empty() ? -1 : total_degree(terms_.rbegin()->first); }

  MultiIndexPoly homogeneous_part(int degree) const {
    MultiIndexPoly out(arity_);
    for (const auto& [e, c] : terms_)
      if (total_degree(e) == degree) out.terms_.emplace(e, c);
    return out;
  }

  template <class To>
  MultiIndexPoly<To> cast() const {
    MultiIndexPoly<To> out(arity_);
    for (const auto& [e, c] : terms_) out.add_term(e, static_cast<To>(c));
    return out;
  }

  /// Evaluates with per-variable power tables; throws on arity mismatch.
  cplx evaluate(std::span<const cplx> point) const {
    if (point.size() != arity_)
      throw PreconditionError("eval_poly: point has " + std::to_string(point.size()) +
                              " entries, polynomial arity is " + std::to_string(arity_));
    std::vector<std::vector<cplx>> powers(arity_);
    for (const auto& [e, c] : terms_)
      for (std::size_t v = 0; v < arity_; ++v)
        if (static_cast<std::size_t>(e[v]) >= powers[v].size()) powers[v].resize(e[v] + 1);
    for (std::size_t v = 0; v < arity_; ++v) {
      if (powers[v].empty()) continue;
      powers[v][0] = 1.0;
      for (std::size_t k = 1; k < powers[v].size(); ++k) powers[v][k] = powers[v][k - 1] * point[v];
    }
    cplx sum = 0.0;
    for (const auto& [e, c] : terms_) {
      cplx m = to_cplx(c);
      for (std::size_t v = 0; v < arity_; ++v)
        if (e[v] != 0) m *= powers[v][e[v]];
      sum += m;
    }
    return sum;
  }

  friend bool operator==(const MultiIndexPoly& a, const MultiIndexPoly& b) {
    return a.arity_ == b.arity_ && a.terms_ == b.terms_;
  }

 private:
  static cplx to_cplx(const Coeff& c) {
    if constexpr (std::is_same_v<Coeff, cplx>) {
      return c;
    } else {
      return cplx(static_cast<double>(c), 0.0);
    }
  }
  void check_arity(const MultiIndexPoly& o) const {
    if (o.arity_ != arity_) throw PreconditionError("polynomial arity mismatch");
  }

  std::size_t arity_;
  TermMap terms_;
};

using IntPoly = MultiIndexPoly<std::int64_t>;
using ComplexPoly = MultiIndexPoly<cplx>;

/// Canonical text, e.g. "x1^3+3*x1*x2+x3".
std::string to_string(const IntPoly& p);
std::string to_string(const ComplexPoly& p);

/// B_i(x_1..x_i), arity i.  Memoized; i > 16 raises SizeLimitError.
const IntPoly& complete_bell(int i);

/// B_i(λ+x_1, x_2, ..., x_i) = Σ_j C(i,j) λ^{i-j} B_j, embedded in arity i.
ComplexPoly bell_shift_expand(int i, cplx lambda);

/// f_i = B_{i+1} - x_{i+1}, arity i.
IntPoly nonlinear_remainder(int i);

/// Homogeneous parts h_{k,i} of f_i for k = 2..i+1 (empty parts omitted).
std::vector<std::pair<int, IntPoly>> degree_split(int i);

cplx eval_poly(const IntPoly& p, std::span<const cplx> point);
cplx eval_poly(const ComplexPoly& p, std::span<const cplx> point);

/// Binomial coefficient as double (exact for the ranges used here).
double binomial(int n, int k);
std::int64_t binomial_int(int n, int k);

}  // namespace perron
