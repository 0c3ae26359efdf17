#pragma once

// Linear differential operators with rational-function coefficients, the
// SLE generator builders, commutation and integrability checks, and the
// exact linear algebra behind the kappa->infinity Catalan rank computation.

#include "slelab/exactalg.hpp"

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace slelab::genops {

using exactalg::Polynomial;
using exactalg::Rat;
using exactalg::RationalFunction;
using exactalg::VarTablePtr;

using MultiIndex = std::vector<int>;  // derivative order per declared variable

class DiffOp {
 public:
  DiffOp() = default;
  explicit DiffOp(VarTablePtr vars);

  static DiffOp zero(VarTablePtr vars) { return DiffOp(std::move(vars)); }
  static DiffOp identity(const VarTablePtr& vars);
  static DiffOp partial(const VarTablePtr& vars, const std::string& var, int order = 1);
  static DiffOp multiply(RationalFunction f);  // zero-order multiplication operator

  const VarTablePtr& vars() const { return vars_; }
  const std::map<MultiIndex, RationalFunction>& terms() const { return terms_; }

  bool is_zero() const { return terms_.empty(); }
  int order() const;
  RationalFunction coefficient(const MultiIndex& idx) const;

  DiffOp operator+(const DiffOp& o) const;
  DiffOp operator-(const DiffOp& o) const;
  DiffOp operator-() const;
  DiffOp scaled(const RationalFunction& f) const;  // left-multiply by f
  bool operator==(const DiffOp& o) const { return terms_ == o.terms_; }

  RationalFunction apply(const RationalFunction& f) const;

  void add_term(const MultiIndex& idx, const RationalFunction& coeff);

  std::string to_string() const;

 private:
  VarTablePtr vars_;
  std::map<MultiIndex, RationalFunction> terms_;
};

// Operator composition A∘B with the Leibniz expansion applied exactly.
DiffOp compose(const DiffOp& a, const DiffOp& b);
DiffOp commutator(const DiffOp& a, const DiffOp& b);

// ---------------------------------------------------------------------------
// Product-form functions  psi = prod_i f_i^{e_i}  with linear factors f_i and
// exponents that may be symbolic rational functions (e.g. 2/kappa).  Applying
// a differential operator to psi yields (rational cofactor) * psi, so
// annihilation checks stay exact.

class ProductForm {
 public:
  explicit ProductForm(VarTablePtr vars) : vars_(std::move(vars)) {}

  void add_factor(Polynomial linear_factor, RationalFunction exponent);
  const VarTablePtr& vars() const { return vars_; }

  // Logarithmic derivative d/dvar log psi.
  RationalFunction log_derivative(std::size_t var) const;

  // (op psi) / psi as an exact rational function.
  RationalFunction cofactor(const DiffOp& op) const;

  // Conjugated operator psi^{-1} ∘ op ∘ psi (again rational coefficients).
  DiffOp conjugate(const DiffOp& op) const;

  double evaluate(const std::vector<double>& point,
                  const std::vector<double>& exponent_point) const;

 private:
  VarTablePtr vars_;
  std::vector<std::pair<Polynomial, RationalFunction>> factors_;
};

// ---------------------------------------------------------------------------
// Drift and weight specifications (3.2 parametric drifts, section-4 weights)

struct DriftSpec {
  // b(x, y, z) = rho/(x-y) + sum_i rho_i/(x-z_i)
  RationalFunction rho;
  std::vector<RationalFunction> rho_i;
};

struct WeightSpec {
  // h(x, z) = sum_i mu_i/(x-z_i)^2 + sum_{i<j} nu_ij/((x-z_i)(x-z_j))
  //           + ell_x log f(z)
  std::vector<RationalFunction> mu;
  std::map<std::pair<int, int>, RationalFunction> nu;
  std::optional<RationalFunction> f;  // depends on z variables only
};

// ---------------------------------------------------------------------------
// Generator builders.  Variable naming convention inside a workspace:
// growth point x, companion y, marked points z1..zn, parameters kappa,
// kappatilde, rho1... as needed by the caller.

// (kappa/2) d_xx + b d_x + sum_w 2/(w-x) d_w over the other tracked points.
DiffOp build_generator(const RationalFunction& kappa, const RationalFunction& drift,
                       const std::string& growth, const std::vector<std::string>& others);

RationalFunction drift_from_spec(const DriftSpec& spec, const VarTablePtr& vars,
                                 const std::string& growth, const std::string& companion,
                                 const std::vector<std::string>& marked);

// [L, M] - 4/(y-x)^2 (M - L); the zero operator iff the SLEs commute.
DiffOp commutation_residual(const DiffOp& l, const DiffOp& m, const std::string& x,
                            const std::string& y);

// ---------------------------------------------------------------------------
// n = 0 classification (section 3.2)

struct RhoFamily {
  std::string name;            // "kappa", "kappa-6", "dual"
  std::string kappatilde;      // relation as text, "kappa" or "16/kappa"
  RationalFunction rho;        // in the classification workspace (variable kappa)
  RationalFunction rhotilde;
};

struct ClassifyResult {
  RationalFunction resultant;        // resultant of the two section-3.2 quadratics
  RationalFunction reference_ratio;  // resultant / (12 kt (kt-k)^2 (k kt - 16) / k^3)
  std::vector<RhoFamily> families;
};

ClassifyResult classify_n0();

// ---------------------------------------------------------------------------
// Section 4 integrability system

struct IntegrabilitySystem {
  DiffOp m1;
  DiffOp m2;
};

// Operators of the displayed pair of PDEs, zero-order parts included.
IntegrabilitySystem build_integrability_system(const RationalFunction& kappa,
                                               const RationalFunction& kappatilde,
                                               const WeightSpec& h, int n,
                                               const VarTablePtr& vars);

// h(x, z) assembled from a WeightSpec on the given workspace.
RationalFunction weight_function(const WeightSpec& h, const VarTablePtr& vars,
                                 const std::string& x, const std::vector<std::string>& zs);

// Exact residual of the functional equation (inth) for the given weight.
RationalFunction check_h_equation(const WeightSpec& h, const VarTablePtr& vars,
                                  const std::string& x, const std::string& y,
                                  const std::vector<std::string>& zs);

// Residual of (inth) for the fully symbolic rational weight with n marked
// points (mu_i and nu_ij kept as workspace variables).
RationalFunction generic_weight_residual(int n);

// ell_{0,n} = n/((n+1)(n+2)) d_x^{n+2} + sum_i (d_i d_x^n / (z_i - x)
//             - n! d_i / (z_i - x)^{n+1})
DiffOp build_l0n(int n, int marked_count);
DiffOp build_l0n(int n, const VarTablePtr& vars, const std::string& x,
                 const std::vector<std::string>& zs);

// Order-0 combination [M1,M2] + 4/(x-y)^2 (M1-M2); throws unless order 0.
RationalFunction order0_coefficient(const IntegrabilitySystem& sys);

// ---------------------------------------------------------------------------
// Section 5 multi-SLE system on x1..x_{2n}

struct MultiSleSystem {
  std::vector<DiffOp> growth;    // 2n second-order operators
  DiffOp translation;            // sum d_k
  DiffOp scaling;                // sum x_k d_k - n(1 - 6/kappa)
  DiffOp special;                // sum x_k^2 d_k - (1 - 6/kappa) sum x_k
  VarTablePtr vars;
  RationalFunction kappa;
  std::vector<std::string> points;
};

MultiSleSystem build_multisle_system(int n, const RationalFunction& kappa,
                                     const VarTablePtr& vars);
MultiSleSystem build_multisle_system(int n);  // workspace (x1..x_{2n}, kappa)

// The asymmetric iota-paired operator at growth index k (pairing 2i-1 <-> 2i).
DiffOp multisle_paired_operator(const MultiSleSystem& sys, int k);

// Dimension of homogeneous degree-n polynomial solutions of the
// kappa->infinity limit system, by exact nullspace computation.
int kappa_infinity_rank(int n, int max_degree);

}  // namespace slelab::genops
