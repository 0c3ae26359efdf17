#pragma once

// Exact multivariate polynomial and rational-function arithmetic over Q.
// Variables are declared up front in a VarTable; monomials are ordered
// lexicographically over the declared variable order, which makes every
// value's representation canonical (equality of values == equality of reps).

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace slelab::exactalg {

using Rat = mpq_class;

// Ordered list of variable names shared by all values of one workspace.
class VarTable {
 public:
  static std::shared_ptr<const VarTable> make(std::vector<std::string> names);

  std::size_t size() const { return names_.size(); }
  const std::string& name(std::size_t i) const { return names_[i]; }
  std::size_t index(const std::string& name) const;  // throws on unknown
  const std::vector<std::string>& names() const { return names_; }

 private:
  explicit VarTable(std::vector<std::string> names);
  std::vector<std::string> names_;
};

using VarTablePtr = std::shared_ptr<const VarTable>;
using Exponents = std::vector<int>;  // one entry per declared variable

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(VarTablePtr vars);

  static Polynomial zero(VarTablePtr vars) { return Polynomial(std::move(vars)); }
  static Polynomial constant(VarTablePtr vars, const Rat& c);
  static Polynomial variable(VarTablePtr vars, const std::string& name);

  const VarTablePtr& vars() const { return vars_; }
  const std::map<Exponents, Rat>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rat constant_value() const;  // requires is_constant()

  int degree(std::size_t var) const;
  int total_degree() const;

  // Leading term in the lexicographic order (largest exponent vector).
  const Rat& leading_coefficient() const;

  Polynomial operator-() const;
  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator*(const Rat& c) const;
  bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  Polynomial derivative(std::size_t var) const;

  // Exact quotient, or nullopt when the division leaves a remainder.
  std::optional<Polynomial> divide_exact(const Polynomial& divisor) const;

  double evaluate(const std::vector<double>& point) const;
  Rat evaluate_exact(const std::vector<Rat>& point) const;

  std::string to_string() const;

  void add_term(const Exponents& e, const Rat& c);  // accumulates, drops zeros

 private:
  friend Polynomial poly_gcd(const Polynomial&, const Polynomial&);
  VarTablePtr vars_;
  std::map<Exponents, Rat> terms_;
};

// GCD over Q[x1..xn], normalized so the lexicographic leading coefficient is 1.
Polynomial poly_gcd(const Polynomial& a, const Polynomial& b);

class RationalFunction {
 public:
  RationalFunction() = default;
  explicit RationalFunction(Polynomial num);
  RationalFunction(Polynomial num, Polynomial den);  // reduces + canonicalizes

  static RationalFunction zero(const VarTablePtr& vars);
  static RationalFunction constant(const VarTablePtr& vars, const Rat& c);
  static RationalFunction variable(const VarTablePtr& vars, const std::string& name);

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  const VarTablePtr& vars() const { return num_.vars(); }

  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

  RationalFunction operator-() const;
  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator/(const RationalFunction& o) const;  // throws on zero divisor
  bool operator==(const RationalFunction& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const RationalFunction& o) const { return !(*this == o); }

  double evaluate(const std::vector<double>& point) const;

  std::string to_string() const;

 private:
  void normalize();
  Polynomial num_, den_;
};

RationalFunction differentiate(const RationalFunction& f, const std::string& var);
RationalFunction differentiate(const RationalFunction& f, std::size_t var);

// Simultaneous substitution; unbound variables map to themselves.
RationalFunction substitute(const RationalFunction& f,
                            const std::map<std::string, RationalFunction>& bindings);

// Sylvester resultant eliminating `var`; remaining variables stay symbolic.
// Both inputs must have positive degree in `var`.
RationalFunction resultant(const Polynomial& p, const Polynomial& q, const std::string& var);

// Resultant of two univariate polynomials given by coefficient lists
// (index = degree) over the rational-function field.
RationalFunction resultant_field(std::vector<RationalFunction> p,
                                 std::vector<RationalFunction> q);

// Convenience: parse tiny expressions is out of scope; builders below cover use.
RationalFunction rf_var(const VarTablePtr& vars, const std::string& name);
RationalFunction rf_const(const VarTablePtr& vars, const Rat& c);
RationalFunction rf_const(const VarTablePtr& vars, long num, long den = 1);

}  // namespace slelab::exactalg
