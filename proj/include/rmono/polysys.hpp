#pragma once

#include "rmono/common.hpp"

#include <array>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace rmono {

struct Monomial {
  Complex coefficient;
  std::vector<int> exponents;  // over variables followed by parameters

  bool operator==(const Monomial&) const = default;
};

// Sparse polynomial over the combined (x, p) indeterminates, kept in a
// canonical form keyed by exponent vector. Used for construction only; the
// evaluation path works from the flattened monomial lists in PolySystem.
class Polynomial {
 public:
  explicit Polynomial(int num_indeterminates = 0) : nvars_(num_indeterminates) {}

  static Polynomial constant(int n, Complex c);
  static Polynomial indeterminate(int n, int index);

  int num_indeterminates() const { return nvars_; }
  bool is_zero() const { return terms_.empty(); }
  int total_degree() const;
  int degree_in(int first, int count) const;  // total degree restricted to a block

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  Polynomial operator-() const;
  Polynomial pow(int e) const;

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator*(Complex c, const Polynomial& b) { return constant(b.nvars_, c) * b; }
  friend Polynomial operator+(const Polynomial& a, Complex c) { return a + constant(a.nvars_, c); }
  friend Polynomial operator-(const Polynomial& a, Complex c) { return a - constant(a.nvars_, c); }

  std::vector<Monomial> monomials() const;

 private:
  void add_term(const std::vector<int>& e, Complex c);

  int nvars_;
  std::map<std::vector<int>, Complex> terms_;
};

/// Square parameterized polynomial system F(x; p) with N equations in N
/// variables and P parameters. Immutable after construction.
class PolySystem {
 public:
  PolySystem(std::vector<std::string> var_names, std::vector<std::string> param_names,
             const std::vector<Polynomial>& equations);

  int num_vars() const { return static_cast<int>(var_names_.size()); }
  int num_params() const { return static_cast<int>(param_names_.size()); }
  int num_indeterminates() const { return num_vars() + num_params(); }
  bool is_real() const { return is_real_; }

  const std::vector<std::string>& var_names() const { return var_names_; }
  const std::vector<std::string>& param_names() const { return param_names_; }
  const std::vector<std::vector<Monomial>>& equations() const { return equations_; }

  // Degree of each equation in the variables only (parameters are constants).
  const std::vector<int>& degrees() const { return degrees_; }
  long total_degree_bound() const;

  // Fast paths, scalar S is double (real systems only) or Complex. Any of the
  // output pointers may be null.
  template <class S>
  void eval(const SmallVec<S>& x, const SmallVec<S>& p, SmallVec<S>* value, SmallMat<S>* jac_x,
            SmallMat<S>* jac_p) const;

 private:
  struct Term {
    Complex coefficient;
    std::array<int, 2 * kMaxDim> exponents{};
  };

  std::vector<std::string> var_names_;
  std::vector<std::string> param_names_;
  std::vector<std::vector<Monomial>> equations_;
  std::vector<std::vector<Term>> terms_;
  std::vector<int> degrees_;
  std::vector<int> max_exponent_;
  bool is_real_ = true;
};

CVector evaluate(const PolySystem& sys, const CPoint& x, const CPoint& p);
CMatrix jacobian_x(const PolySystem& sys, const CPoint& x, const CPoint& p);
CMatrix jacobian_p(const PolySystem& sys, const CPoint& x, const CPoint& p);

/// Parses the system DSL:
///   var x1 x2; par p1 p2; eq x1^2 - x2^2 - p1; eq 2*x1*x2 - p2;
PolySystem parse_system(std::string_view text);

/// Emits DSL text that parses back to the same monomials.
std::string print_system(const PolySystem& sys);

enum class Builtin { ex21, univariate, modified34, kuramoto3, rpr3 };

PolySystem builtin(Builtin which);
Builtin builtin_from_name(std::string_view name);
std::string builtin_name(Builtin which);
const std::vector<Builtin>& all_builtins();

}  // namespace rmono
