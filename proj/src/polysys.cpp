#include "rmono/polysys.hpp"

#include <algorithm>
#include <numeric>

namespace rmono {

namespace {
constexpr int kMaxExponent = 31;
}

Polynomial Polynomial::constant(int n, Complex c) {
  Polynomial p(n);
  p.add_term(std::vector<int>(n, 0), c);
  return p;
}

Polynomial Polynomial::indeterminate(int n, int index) {
  Polynomial p(n);
  std::vector<int> e(n, 0);
  e.at(index) = 1;
  p.add_term(e, 1.0);
  return p;
}

void Polynomial::add_term(const std::vector<int>& e, Complex c) {
  if (c == Complex(0.0)) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == Complex(0.0)) terms_.erase(it);
  }
}

int Polynomial::total_degree() const { return degree_in(0, nvars_); }

int Polynomial::degree_in(int first, int count) const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    d = std::max(d, std::accumulate(e.begin() + first, e.begin() + first + count, 0));
  }
  return d;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  Polynomial out(nvars_);
  std::vector<int> e(nvars_);
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      for (int k = 0; k < nvars_; ++k) e[k] = ea[k] + eb[k];
      out.add_term(e, ca * cb);
    }
  }
  *this = std::move(out);
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial out(nvars_);
  for (const auto& [e, c] : terms_) out.terms_.emplace(e, -c);
  return out;
}

Polynomial Polynomial::pow(int e) const {
  if (e < 0) throw InvalidArgument("negative exponent");
  Polynomial out = constant(nvars_, 1.0);
  for (int k = 0; k < e; ++k) out *= *this;
  return out;
}

std::vector<Monomial> Polynomial::monomials() const {
  std::vector<Monomial> out;
  out.reserve(terms_.size());
  for (const auto& [e, c] : terms_) out.push_back({c, e});
  return out;
}

PolySystem::PolySystem(std::vector<std::string> var_names, std::vector<std::string> param_names,
                       const std::vector<Polynomial>& equations)
    : var_names_(std::move(var_names)), param_names_(std::move(param_names)) {
  const int n = num_vars();
  const int np = num_params();
  if (n <= 0) throw InvalidArgument("system needs at least one variable");
  if (np <= 0) throw InvalidArgument("system needs at least one parameter");
  if (n > kMaxDim || np > kMaxDim) {
    throw InvalidArgument("at most " + std::to_string(kMaxDim) + " variables and parameters supported");
  }
  if (static_cast<int>(equations.size()) != n) {
    throw InvalidArgument("non-square system: " + std::to_string(equations.size()) + " equations in " +
                          std::to_string(n) + " variables");
  }
  max_exponent_.assign(n + np, 0);
  for (const auto& eq : equations) {
    if (eq.num_indeterminates() != n + np) throw DimensionError("equation over wrong indeterminate count");
    if (eq.is_zero()) throw InvalidArgument("zero polynomial equation");
    degrees_.push_back(eq.degree_in(0, n));
    auto monos = eq.monomials();
    std::vector<Term> terms;
    for (const auto& m : monos) {
      if (m.coefficient.imag() != 0.0) is_real_ = false;
      Term t{m.coefficient, {}};
      for (int k = 0; k < n + np; ++k) {
        t.exponents[k] = m.exponents[k];
        max_exponent_[k] = std::max(max_exponent_[k], m.exponents[k]);
      }
      terms.push_back(t);
    }
    equations_.push_back(std::move(monos));
    terms_.push_back(std::move(terms));
  }
}

long PolySystem::total_degree_bound() const {
  long d = 1;
  for (int deg : degrees_) d *= deg;
  return d;
}

template <class S>
static S coefficient_as(Complex c) {
  if constexpr (std::is_same_v<S, double>) {
    return c.real();
  } else {
    return c;
  }
}

template <class S>
void PolySystem::eval(const SmallVec<S>& x, const SmallVec<S>& p, SmallVec<S>* value, SmallMat<S>* jac_x,
                      SmallMat<S>* jac_p) const {
  const int n = num_vars();
  const int np = num_params();
  if (x.size() != n || p.size() != np) throw DimensionError("point dimension mismatch");
  if constexpr (std::is_same_v<S, double>) {
    if (!is_real_) throw InvalidArgument("real evaluation of a system with complex coefficients");
  }
  const int nt = n + np;
  // powers[k][e] = z_k^e
  std::array<std::array<S, kMaxExponent + 1>, 2 * kMaxDim> powers;
  for (int k = 0; k < nt; ++k) {
    const S z = k < n ? x[k] : p[k - n];
    const int emax = max_exponent_[k];
    if (emax > kMaxExponent) throw InvalidArgument("exponent too large");
    powers[k][0] = S(1);
    for (int e = 1; e <= emax; ++e) powers[k][e] = powers[k][e - 1] * z;
  }
  if (value) value->setZero(n);
  if (jac_x) jac_x->setZero(n, n);
  if (jac_p) jac_p->setZero(n, np);
  for (int i = 0; i < n; ++i) {
    for (const Term& t : terms_[i]) {
      const S c = coefficient_as<S>(t.coefficient);
      S prod = c;
      for (int k = 0; k < nt; ++k) prod *= powers[k][t.exponents[k]];
      if (value) (*value)[i] += prod;
      if (!jac_x && !jac_p) continue;
      for (int v = 0; v < nt; ++v) {
        const int ev = t.exponents[v];
        if (ev == 0) continue;
        if ((v < n && !jac_x) || (v >= n && !jac_p)) continue;
        S d = c * static_cast<double>(ev) * powers[v][ev - 1];
        for (int k = 0; k < nt; ++k) {
          if (k != v) d *= powers[k][t.exponents[k]];
        }
        if (v < n) {
          (*jac_x)(i, v) += d;
        } else {
          (*jac_p)(i, v - n) += d;
        }
      }
    }
  }
}

template void PolySystem::eval<double>(const SmallVec<double>&, const SmallVec<double>&, SmallVec<double>*,
                                       SmallMat<double>*, SmallMat<double>*) const;
template void PolySystem::eval<Complex>(const SmallVec<Complex>&, const SmallVec<Complex>&, SmallVec<Complex>*,
                                        SmallMat<Complex>*, SmallMat<Complex>*) const;

namespace {

void check_dims(const PolySystem& sys, const CPoint& x, const CPoint& p) {
  if (x.size() != sys.num_vars() || p.size() != sys.num_params()) {
    throw DimensionError("expected x of length " + std::to_string(sys.num_vars()) + " and p of length " +
                         std::to_string(sys.num_params()));
  }
}

}  // namespace

CVector evaluate(const PolySystem& sys, const CPoint& x, const CPoint& p) {
  check_dims(sys, x, p);
  SmallVec<Complex> v;
  sys.eval<Complex>(x, p, &v, nullptr, nullptr);
  return v;
}

CMatrix jacobian_x(const PolySystem& sys, const CPoint& x, const CPoint& p) {
  check_dims(sys, x, p);
  SmallMat<Complex> j;
  sys.eval<Complex>(x, p, nullptr, &j, nullptr);
  return j;
}

CMatrix jacobian_p(const PolySystem& sys, const CPoint& x, const CPoint& p) {
  check_dims(sys, x, p);
  SmallMat<Complex> j;
  sys.eval<Complex>(x, p, nullptr, nullptr, &j);
  return j;
}

}  // namespace rmono
