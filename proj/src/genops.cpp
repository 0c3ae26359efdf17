#include "slelab/genops.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace slelab::genops {

namespace {

using exactalg::rf_const;
using exactalg::rf_var;

void require_same_vars(const VarTablePtr& a, const VarTablePtr& b) {
  if (a != b && (!a || !b || a->names() != b->names())) {
    throw std::invalid_argument("genops: operators belong to different workspaces");
  }
}

Rat binomial(int n, int k) {
  Rat r(1);
  for (int i = 0; i < k; ++i) {
    r *= Rat(n - i);
    r /= Rat(i + 1);
  }
  return r;
}

RationalFunction nth_derivative(const RationalFunction& f, const MultiIndex& order) {
  RationalFunction g = f;
  for (std::size_t v = 0; v < order.size(); ++v) {
    for (int k = 0; k < order[v]; ++k) g = differentiate(g, v);
  }
  return g;
}

}  // namespace

// ---------------------------------------------------------------------------
// DiffOp

DiffOp::DiffOp(VarTablePtr vars) : vars_(std::move(vars)) {
  if (!vars_) throw std::invalid_argument("genops: null variable table");
}

DiffOp DiffOp::identity(const VarTablePtr& vars) {
  DiffOp op(vars);
  op.add_term(MultiIndex(vars->size(), 0), rf_const(vars, 1));
  return op;
}

DiffOp DiffOp::partial(const VarTablePtr& vars, const std::string& var, int order) {
  DiffOp op(vars);
  MultiIndex idx(vars->size(), 0);
  idx[vars->index(var)] = order;
  op.add_term(idx, rf_const(vars, 1));
  return op;
}

DiffOp DiffOp::multiply(RationalFunction f) {
  DiffOp op(f.vars());
  op.add_term(MultiIndex(f.vars()->size(), 0), f);
  return op;
}

int DiffOp::order() const {
  int d = 0;
  for (const auto& [idx, c] : terms_) {
    int s = 0;
    for (int k : idx) s += k;
    d = std::max(d, s);
  }
  return d;
}

RationalFunction DiffOp::coefficient(const MultiIndex& idx) const {
  auto it = terms_.find(idx);
  if (it == terms_.end()) return RationalFunction::zero(vars_);
  return it->second;
}

void DiffOp::add_term(const MultiIndex& idx, const RationalFunction& coeff) {
  if (coeff.is_zero()) return;
  auto it = terms_.find(idx);
  if (it == terms_.end()) {
    terms_.emplace(idx, coeff);
  } else {
    it->second = it->second + coeff;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
  require_same_vars(vars_, o.vars_);
  DiffOp r = *this;
  for (const auto& [idx, c] : o.terms_) r.add_term(idx, c);
  return r;
}

DiffOp DiffOp::operator-(const DiffOp& o) const {
  require_same_vars(vars_, o.vars_);
  DiffOp r = *this;
  for (const auto& [idx, c] : o.terms_) r.add_term(idx, -c);
  return r;
}

DiffOp DiffOp::operator-() const {
  DiffOp r(vars_);
  for (const auto& [idx, c] : terms_) r.terms_.emplace(idx, -c);
  return r;
}

DiffOp DiffOp::scaled(const RationalFunction& f) const {
  DiffOp r(vars_);
  if (f.is_zero()) return r;
  for (const auto& [idx, c] : terms_) r.add_term(idx, f * c);
  return r;
}

RationalFunction DiffOp::apply(const RationalFunction& f) const {
  RationalFunction acc = RationalFunction::zero(vars_);
  for (const auto& [idx, c] : terms_) {
    acc = acc + c * nth_derivative(f, idx);
  }
  return acc;
}

std::string DiffOp::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [idx, c] : terms_) {
    if (!first) os << " + ";
    os << "(" << c.to_string() << ")";
    for (std::size_t v = 0; v < idx.size(); ++v) {
      if (idx[v] == 0) continue;
      os << " d_" << vars_->name(v);
      if (idx[v] > 1) os << "^" << idx[v];
    }
    first = false;
  }
  return os.str();
}

namespace {

// Enumerate all gamma <= alpha componentwise.
void for_each_sub_index(const MultiIndex& alpha,
                        const std::function<void(const MultiIndex&)>& fn) {
  MultiIndex gamma(alpha.size(), 0);
  while (true) {
    fn(gamma);
    std::size_t v = 0;
    while (v < alpha.size()) {
      if (gamma[v] < alpha[v]) {
        ++gamma[v];
        break;
      }
      gamma[v] = 0;
      ++v;
    }
    if (v == alpha.size()) return;
  }
}

}  // namespace

DiffOp compose(const DiffOp& a, const DiffOp& b) {
  require_same_vars(a.vars(), b.vars());
  DiffOp out(a.vars());
  for (const auto& [alpha, ca] : a.terms()) {
    for (const auto& [beta, cb] : b.terms()) {
      // d^alpha (cb d^beta f) = sum_{gamma<=alpha} C(alpha,gamma) d^gamma(cb)
      //                         d^{alpha-gamma+beta} f
      for_each_sub_index(alpha, [&](const MultiIndex& gamma) {
        Rat mult(1);
        for (std::size_t v = 0; v < alpha.size(); ++v) mult *= binomial(alpha[v], gamma[v]);
        RationalFunction dcb = nth_derivative(cb, gamma);
        if (dcb.is_zero()) return;
        MultiIndex idx(alpha.size());
        for (std::size_t v = 0; v < alpha.size(); ++v) idx[v] = alpha[v] - gamma[v] + beta[v];
        out.add_term(idx, ca * dcb * rf_const(a.vars(), mult));
      });
    }
  }
  return out;
}

DiffOp commutator(const DiffOp& a, const DiffOp& b) {
  return compose(a, b) - compose(b, a);
}

// ---------------------------------------------------------------------------
// ProductForm

void ProductForm::add_factor(Polynomial linear_factor, RationalFunction exponent) {
  if (linear_factor.total_degree() > 1) {
    throw std::invalid_argument("genops: product-form factors must be linear");
  }
  factors_.emplace_back(std::move(linear_factor), std::move(exponent));
}

RationalFunction ProductForm::log_derivative(std::size_t var) const {
  RationalFunction acc = RationalFunction::zero(vars_);
  for (const auto& [f, e] : factors_) {
    Polynomial df = f.derivative(var);
    if (df.is_zero()) continue;
    acc = acc + e * RationalFunction(df, f);
  }
  return acc;
}

RationalFunction ProductForm::cofactor(const DiffOp& op) const {
  require_same_vars(vars_, op.vars());
  // T[alpha] = (d^alpha psi)/psi, built by T[alpha+e_v] = d_v T + L_v T.
  std::map<MultiIndex, RationalFunction> memo;
  std::function<RationalFunction(const MultiIndex&)> t = [&](const MultiIndex& alpha) {
    auto it = memo.find(alpha);
    if (it != memo.end()) return it->second;
    std::size_t v = 0;
    bool all_zero = true;
    for (std::size_t i = 0; i < alpha.size(); ++i) {
      if (alpha[i] > 0) {
        v = i;
        all_zero = false;
        break;
      }
    }
    RationalFunction res = RationalFunction::zero(vars_);
    if (all_zero) {
      res = rf_const(vars_, 1);
    } else {
      MultiIndex beta = alpha;
      beta[v] -= 1;
      RationalFunction tb = t(beta);
      res = differentiate(tb, v) + log_derivative(v) * tb;
    }
    memo.emplace(alpha, res);
    return res;
  };
  RationalFunction acc = RationalFunction::zero(vars_);
  for (const auto& [idx, c] : op.terms()) acc = acc + c * t(idx);
  return acc;
}

DiffOp ProductForm::conjugate(const DiffOp& op) const {
  require_same_vars(vars_, op.vars());
  // psi^{-1} d_v psi = d_v + (d_v log psi), and these commute across v.
  DiffOp out(vars_);
  for (const auto& [idx, c] : op.terms()) {
    DiffOp term = DiffOp::multiply(c);
    for (std::size_t v = 0; v < idx.size(); ++v) {
      if (idx[v] == 0) continue;
      DiffOp dv = DiffOp::partial(vars_, vars_->name(v)) + DiffOp::multiply(log_derivative(v));
      for (int k = 0; k < idx[v]; ++k) term = compose(term, dv);
    }
    out = out + term;
  }
  return out;
}

double ProductForm::evaluate(const std::vector<double>& point,
                             const std::vector<double>& exponent_point) const {
  double acc = 1.0;
  for (const auto& [f, e] : factors_) {
    double base = f.evaluate(point);
    if (base <= 0.0) {
      throw std::domain_error("genops: product form evaluated outside its chamber");
    }
    acc *= std::pow(base, e.evaluate(exponent_point));
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Generators

DiffOp build_generator(const RationalFunction& kappa, const RationalFunction& drift,
                       const std::string& growth, const std::vector<std::string>& others) {
  const VarTablePtr& vars = kappa.vars();
  RationalFunction x = rf_var(vars, growth);
  DiffOp op = DiffOp::partial(vars, growth, 2).scaled(kappa / rf_const(vars, 2));
  op = op + DiffOp::partial(vars, growth).scaled(drift);
  for (const auto& w : others) {
    if (w == growth) throw std::invalid_argument("genops: growth point listed among spectators");
    RationalFunction coeff = rf_const(vars, 2) / (rf_var(vars, w) - x);
    op = op + DiffOp::partial(vars, w).scaled(coeff);
  }
  return op;
}

RationalFunction drift_from_spec(const DriftSpec& spec, const VarTablePtr& vars,
                                 const std::string& growth, const std::string& companion,
                                 const std::vector<std::string>& marked) {
  if (spec.rho_i.size() != marked.size()) {
    throw std::invalid_argument("genops: drift weights do not match marked points");
  }
  RationalFunction x = rf_var(vars, growth);
  RationalFunction b = spec.rho / (x - rf_var(vars, companion));
  for (std::size_t i = 0; i < marked.size(); ++i) {
    b = b + spec.rho_i[i] / (x - rf_var(vars, marked[i]));
  }
  return b;
}

DiffOp commutation_residual(const DiffOp& l, const DiffOp& m, const std::string& x,
                            const std::string& y) {
  const VarTablePtr& vars = l.vars();
  RationalFunction gap = rf_var(vars, y) - rf_var(vars, x);
  RationalFunction coeff = rf_const(vars, 4) / (gap * gap);
  return commutator(l, m) - (m - l).scaled(coeff);
}

// ---------------------------------------------------------------------------
// classify_n0

ClassifyResult classify_n0() {
  auto vars = exactalg::VarTable::make({"kappa", "kappatilde", "rho", "rhotilde"});
  RationalFunction k = rf_var(vars, "kappa");
  RationalFunction kt = rf_var(vars, "kappatilde");
  RationalFunction rho = rf_var(vars, "rho");
  RationalFunction rhot = rf_var(vars, "rhotilde");
  RationalFunction c2 = rf_const(vars, 2), c4 = rf_const(vars, 4), c12 = rf_const(vars, 12);

  // Full system; the first equation eliminates rhotilde.
  RationalFunction s0 = k * rhot - kt * rho;
  RationalFunction s1 = (kt - c4) * rho - rho * rhot + c12 - c2 * k;
  RationalFunction s2 = (k - c4) * rhot - rho * rhot + c12 - c2 * kt;

  std::map<std::string, RationalFunction> elim{{"rhotilde", kt * rho / k}};
  RationalFunction e1 = substitute(s1, elim);
  RationalFunction e2 = substitute(s2, elim);

  // Coefficient lists in rho over the field Q(kappa, kappatilde).
  auto coeffs_in_rho = [&](const RationalFunction& f) {
    std::vector<RationalFunction> cs(3, RationalFunction::zero(vars));
    std::size_t vr = vars->index("rho");
    if (f.den().degree(vr) > 0) {
      throw std::logic_error("classify_n0: denominator unexpectedly involves rho");
    }
    for (const auto& [e, c] : f.num().terms()) {
      exactalg::Exponents r = e;
      int d = r[vr];
      r[vr] = 0;
      Polynomial mono(vars);
      mono.add_term(r, c);
      cs[static_cast<std::size_t>(d)] =
          cs[static_cast<std::size_t>(d)] + RationalFunction(mono, f.den());
    }
    return cs;
  };
  RationalFunction res = exactalg::resultant_field(coeffs_in_rho(e1), coeffs_in_rho(e2));

  RationalFunction reference =
      c12 * kt * (kt - k) * (kt - k) * (k * kt - rf_const(vars, 16)) / (k * k * k);
  RationalFunction ratio = res / reference;

  ClassifyResult out;
  out.resultant = res;
  out.reference_ratio = ratio;

  // Branch kappatilde = kappa: the quadratic factors over Q(kappa) as
  // -(rho - 2)(rho - (kappa - 6)); verified by exact division.
  {
    RationalFunction q = substitute(e1, {{"kappatilde", k}});
    RationalFunction root1 = rf_const(vars, 2);
    RationalFunction root2 = k - rf_const(vars, 6);
    for (const auto& r : {root1, root2}) {
      if (!substitute(q, {{"rho", r}}).is_zero()) {
        throw std::logic_error("classify_n0: expected root fails the quadratic");
      }
    }
    out.families.push_back({"rho=2", "kappa", root1, root1});
    out.families.push_back({"rho=kappa-6", "kappa", root2, root2});
  }

  // Branch kappatilde = 16/kappa: the two quadratics acquire a common factor;
  // its root is the dual drift -kappa/2.
  {
    RationalFunction sixteen_over_k = rf_const(vars, 16) / k;
    RationalFunction q1 = substitute(e1, {{"kappatilde", sixteen_over_k}});
    RationalFunction q2 = substitute(e2, {{"kappatilde", sixteen_over_k}});
    Polynomial g = exactalg::poly_gcd(q1.num(), q2.num());
    std::size_t vr = vars->index("rho");
    if (g.degree(vr) != 1) {
      throw std::logic_error("classify_n0: dual branch common factor is not linear in rho");
    }
    auto cs = [&](int d) {
      Polynomial out_p(vars);
      for (const auto& [e, c] : g.terms()) {
        if (e[vr] != d) continue;
        exactalg::Exponents r = e;
        r[vr] = 0;
        out_p.add_term(r, c);
      }
      return out_p;
    };
    RationalFunction root = -RationalFunction(cs(0)) / RationalFunction(cs(1));
    RationalFunction rho_t = sixteen_over_k * root / k;
    out.families.push_back({"dual", "16/kappa", root, rho_t});
  }

  // Back-substitution check of every family against the full system.
  for (const auto& fam : out.families) {
    RationalFunction ktv = fam.kappatilde == "kappa" ? k : rf_const(vars, 16) / k;
    std::map<std::string, RationalFunction> sub{
        {"kappatilde", ktv}, {"rho", fam.rho}, {"rhotilde", fam.rhotilde}};
    for (const auto& eq : {s0, s1, s2}) {
      if (!substitute(eq, sub).is_zero()) {
        throw std::logic_error("classify_n0: family fails the commutation system");
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Section 4 system

RationalFunction weight_function(const WeightSpec& h, const VarTablePtr& vars,
                                 const std::string& x, const std::vector<std::string>& zs) {
  if (h.mu.size() != zs.size()) {
    throw std::invalid_argument("genops: weight spec size does not match marked points");
  }
  RationalFunction xv = rf_var(vars, x);
  RationalFunction acc = RationalFunction::zero(vars);
  for (std::size_t i = 0; i < zs.size(); ++i) {
    RationalFunction d = xv - rf_var(vars, zs[i]);
    acc = acc + h.mu[i] / (d * d);
  }
  for (const auto& [ij, nu] : h.nu) {
    RationalFunction di = xv - rf_var(vars, zs[static_cast<std::size_t>(ij.first)]);
    RationalFunction dj = xv - rf_var(vars, zs[static_cast<std::size_t>(ij.second)]);
    acc = acc + nu / (di * dj);
  }
  if (h.f) {
    // ell_x log f = sum_i 2/(z_i - x) d_i log f; f depends on z only.
    const RationalFunction& f = *h.f;
    if (!differentiate(f, x).is_zero()) {
      throw std::invalid_argument("genops: weight residual function must not depend on " + x);
    }
    for (const auto& z : zs) {
      RationalFunction df = differentiate(f, z);
      if (df.is_zero()) continue;
      acc = acc + rf_const(vars, 2) / (rf_var(vars, z) - xv) * (df / f);
    }
  }
  return acc;
}

IntegrabilitySystem build_integrability_system(const RationalFunction& kappa,
                                               const RationalFunction& kappatilde,
                                               const WeightSpec& h, int n,
                                               const VarTablePtr& vars) {
  std::vector<std::string> zs;
  for (int i = 1; i <= n; ++i) zs.push_back("z" + std::to_string(i));
  RationalFunction x = rf_var(vars, "x"), y = rf_var(vars, "y");
  RationalFunction one = rf_const(vars, 1), two = rf_const(vars, 2), six = rf_const(vars, 6);

  auto half_system = [&](const RationalFunction& kap, const RationalFunction& kap_other,
                         const std::string& growth, const std::string& other) {
    RationalFunction g = rf_var(vars, growth), o = rf_var(vars, other);
    DiffOp op = DiffOp::partial(vars, growth, 2).scaled(kap / two);
    for (const auto& z : zs) {
      op = op + DiffOp::partial(vars, z).scaled(two / (rf_var(vars, z) - g));
    }
    op = op + DiffOp::partial(vars, other).scaled(two / (o - g));
    RationalFunction gap = o - g;
    RationalFunction zero_order =
        (one - six / kap_other) / (gap * gap) + weight_function(h, vars, growth, zs);
    return op + DiffOp::multiply(zero_order);
  };

  IntegrabilitySystem sys;
  sys.m1 = half_system(kappa, kappatilde, "x", "y");
  sys.m2 = half_system(kappatilde, kappa, "y", "x");
  return sys;
}

RationalFunction check_h_equation(const WeightSpec& h, const VarTablePtr& vars,
                                  const std::string& x, const std::string& y,
                                  const std::vector<std::string>& zs) {
  RationalFunction hx = weight_function(h, vars, x, zs);
  RationalFunction hy = weight_function(h, vars, y, zs);
  RationalFunction xv = rf_var(vars, x), yv = rf_var(vars, y);
  RationalFunction one = rf_const(vars, 1), two = rf_const(vars, 2);

  RationalFunction lhs = differentiate(hy, y) / (yv - xv);
  for (const auto& z : zs) {
    lhs = lhs + differentiate(hy, z) / (rf_var(vars, z) - xv);
  }
  RationalFunction rhs = differentiate(hx, x) / (xv - yv);
  for (const auto& z : zs) {
    rhs = rhs + differentiate(hx, z) / (rf_var(vars, z) - yv);
  }
  RationalFunction gap = xv - yv;
  return lhs - rhs + two * (hx - hy) / (gap * gap);
}

RationalFunction generic_weight_residual(int n) {
  if (n < 1) throw std::invalid_argument("genops: generic weight residual needs n >= 1");
  std::vector<std::string> names{"x", "y"};
  std::vector<std::string> zs;
  for (int i = 1; i <= n; ++i) {
    zs.push_back("z" + std::to_string(i));
    names.push_back(zs.back());
  }
  for (int i = 1; i <= n; ++i) names.push_back("mu" + std::to_string(i));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      names.push_back("nu" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  }
  auto vars = exactalg::VarTable::make(names);
  WeightSpec h;
  for (int i = 1; i <= n; ++i) h.mu.push_back(rf_var(vars, "mu" + std::to_string(i)));
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      h.nu[{i, j}] = rf_var(vars, "nu" + std::to_string(i + 1) + std::to_string(j + 1));
    }
  }
  return check_h_equation(h, vars, "x", "y", zs);
}

DiffOp build_l0n(int n, int marked_count) {
  std::vector<std::string> names{"x"};
  std::vector<std::string> zs;
  for (int i = 1; i <= marked_count; ++i) {
    zs.push_back("z" + std::to_string(i));
    names.push_back(zs.back());
  }
  auto vars = exactalg::VarTable::make(names);
  return build_l0n(n, vars, "x", zs);
}

DiffOp build_l0n(int n, const VarTablePtr& vars, const std::string& x,
                 const std::vector<std::string>& zs) {
  if (n < 0) throw std::invalid_argument("genops: l0n needs n >= 0");
  RationalFunction xv = rf_var(vars, x);
  Rat lead(n, static_cast<long>(n + 1) * (n + 2));
  lead.canonicalize();
  DiffOp op = DiffOp::partial(vars, x, n + 2).scaled(rf_const(vars, lead));
  Rat fact(1);
  for (int i = 2; i <= n; ++i) fact *= i;
  for (const auto& z : zs) {
    RationalFunction d = rf_var(vars, z) - xv;
    MultiIndex mixed(vars->size(), 0);
    mixed[vars->index(z)] = 1;
    mixed[vars->index(x)] = n;
    DiffOp t1(vars);
    t1.add_term(mixed, rf_const(vars, 1) / d);
    RationalFunction dpow = rf_const(vars, 1);
    for (int k = 0; k <= n; ++k) dpow = dpow * d;
    DiffOp t2 = DiffOp::partial(vars, z).scaled(rf_const(vars, fact) / dpow);
    op = op + t1 - t2;
  }
  return op;
}

RationalFunction order0_coefficient(const IntegrabilitySystem& sys) {
  const VarTablePtr& vars = sys.m1.vars();
  RationalFunction gap = rf_var(vars, "x") - rf_var(vars, "y");
  RationalFunction coeff = rf_const(vars, 4) / (gap * gap);
  DiffOp combo = commutator(sys.m1, sys.m2) + (sys.m1 - sys.m2).scaled(coeff);
  MultiIndex zero(vars->size(), 0);
  for (const auto& [idx, c] : combo.terms()) {
    if (idx != zero) {
      throw std::logic_error("genops: order-0 combination has positive-order terms");
    }
  }
  return combo.coefficient(zero);
}

// ---------------------------------------------------------------------------
// Section 5 system

MultiSleSystem build_multisle_system(int n) {
  std::vector<std::string> names;
  for (int i = 1; i <= 2 * n; ++i) names.push_back("x" + std::to_string(i));
  names.push_back("kappa");
  auto vars = exactalg::VarTable::make(names);
  return build_multisle_system(n, rf_var(vars, "kappa"), vars);
}

MultiSleSystem build_multisle_system(int n, const RationalFunction& kappa,
                                     const VarTablePtr& vars) {
  if (n < 1) throw std::invalid_argument("genops: multi-SLE system needs n >= 1");
  MultiSleSystem sys;
  sys.vars = vars;
  sys.kappa = kappa;
  for (int i = 1; i <= 2 * n; ++i) sys.points.push_back("x" + std::to_string(i));

  RationalFunction one = rf_const(vars, 1), two = rf_const(vars, 2), six = rf_const(vars, 6);
  RationalFunction weight = (kappa - six) / kappa;

  for (int k = 0; k < 2 * n; ++k) {
    RationalFunction xk = rf_var(vars, sys.points[static_cast<std::size_t>(k)]);
    DiffOp op = DiffOp::partial(vars, sys.points[static_cast<std::size_t>(k)], 2)
                    .scaled(kappa / two);
    RationalFunction zero_order = RationalFunction::zero(vars);
    for (int l = 0; l < 2 * n; ++l) {
      if (l == k) continue;
      RationalFunction d = rf_var(vars, sys.points[static_cast<std::size_t>(l)]) - xk;
      op = op + DiffOp::partial(vars, sys.points[static_cast<std::size_t>(l)]).scaled(two / d);
      zero_order = zero_order + weight / (d * d);
    }
    sys.growth.push_back(op + DiffOp::multiply(zero_order));
  }

  DiffOp translation(vars), scaling(vars), special(vars);
  RationalFunction sum_x = RationalFunction::zero(vars);
  for (const auto& p : sys.points) {
    RationalFunction xv = rf_var(vars, p);
    translation = translation + DiffOp::partial(vars, p);
    scaling = scaling + DiffOp::partial(vars, p).scaled(xv);
    special = special + DiffOp::partial(vars, p).scaled(xv * xv);
    sum_x = sum_x + xv;
  }
  RationalFunction deg = rf_const(vars, n) * (one - six / kappa);
  sys.translation = translation;
  sys.scaling = scaling - DiffOp::multiply(deg);
  sys.special = special - DiffOp::multiply((one - six / kappa) * sum_x);
  return sys;
}

DiffOp multisle_paired_operator(const MultiSleSystem& sys, int k) {
  const VarTablePtr& vars = sys.vars;
  int n2 = static_cast<int>(sys.points.size());
  auto iota = [](int j) { return (j % 2 == 0) ? j + 1 : j - 1; };  // 0-based pairing
  RationalFunction one = rf_const(vars, 1), two = rf_const(vars, 2), six = rf_const(vars, 6);
  RationalFunction kappa = sys.kappa;

  RationalFunction xk = rf_var(vars, sys.points[static_cast<std::size_t>(k)]);
  DiffOp op =
      DiffOp::partial(vars, sys.points[static_cast<std::size_t>(k)], 2).scaled(kappa / two);
  for (int l = 0; l < n2; ++l) {
    if (l == k) continue;
    RationalFunction d = rf_var(vars, sys.points[static_cast<std::size_t>(l)]) - xk;
    op = op + DiffOp::partial(vars, sys.points[static_cast<std::size_t>(l)]).scaled(two / d);
  }
  RationalFunction dpair =
      xk - rf_var(vars, sys.points[static_cast<std::size_t>(iota(k))]);
  op = op + DiffOp::partial(vars, sys.points[static_cast<std::size_t>(k)])
                .scaled((kappa - six) / dpair);

  // Zero-order sum over the pairs {j, iota(j)} other than the growth pair.
  RationalFunction zero_order = RationalFunction::zero(vars);
  for (int j = 0; j < n2; j += 2) {
    if (j == k - (k % 2)) continue;
    RationalFunction dj = rf_var(vars, sys.points[static_cast<std::size_t>(j)]) - xk;
    RationalFunction dij = rf_var(vars, sys.points[static_cast<std::size_t>(iota(j))]) - xk;
    RationalFunction diff = one / dj - one / dij;
    zero_order = zero_order + (kappa - six) / kappa * diff * diff;
  }
  return op + DiffOp::multiply(zero_order);
}

// ---------------------------------------------------------------------------
// kappa -> infinity Catalan rank

int kappa_infinity_rank(int n, int max_degree) {
  if (n < 1) throw std::invalid_argument("genops: rank needs n >= 1");
  if (max_degree < n) {
    throw std::invalid_argument("genops: max_degree too small to contain degree n");
  }
  const int m = 2 * n;

  // Basis: all exponent vectors of total degree n in 2n variables.
  std::vector<std::vector<int>> basis;
  std::vector<int> cur(static_cast<std::size_t>(m), 0);
  std::function<void(int, int)> gen = [&](int pos, int remaining) {
    if (pos == m - 1) {
      cur[static_cast<std::size_t>(pos)] = remaining;
      basis.push_back(cur);
      return;
    }
    for (int k = 0; k <= remaining; ++k) {
      cur[static_cast<std::size_t>(pos)] = k;
      gen(pos + 1, remaining - k);
    }
  };
  gen(0, n);

  std::map<std::vector<int>, std::size_t> basis_index;
  for (std::size_t i = 0; i < basis.size(); ++i) basis_index.emplace(basis[i], i);

  // Rows: targets of each constraint operator, keyed by (operator id, monomial).
  std::map<std::pair<int, std::vector<int>>, std::map<std::size_t, Rat>> rows;
  auto add_entry = [&](int op_id, const std::vector<int>& target, std::size_t col, Rat v) {
    rows[{op_id, target}][col] += v;
  };

  for (std::size_t col = 0; col < basis.size(); ++col) {
    const auto& e = basis[col];
    // d_kk P = 0 for every k (operator ids 0..m-1).
    for (int k = 0; k < m; ++k) {
      if (e[static_cast<std::size_t>(k)] < 2) continue;
      std::vector<int> t = e;
      t[static_cast<std::size_t>(k)] -= 2;
      Rat c(static_cast<long>(e[static_cast<std::size_t>(k)]) *
            (e[static_cast<std::size_t>(k)] - 1));
      add_entry(k, t, col, c);
    }
    // Translation invariance: sum_k d_k P = 0 (operator id m).
    for (int k = 0; k < m; ++k) {
      if (e[static_cast<std::size_t>(k)] < 1) continue;
      std::vector<int> t = e;
      t[static_cast<std::size_t>(k)] -= 1;
      add_entry(m, t, col, Rat(e[static_cast<std::size_t>(k)]));
    }
    // Special conformal: sum_k x_k^2 d_k P - (sum_k x_k) P = 0 (id m+1);
    // the scaling condition holds automatically for homogeneous degree n.
    for (int k = 0; k < m; ++k) {
      std::vector<int> t = e;
      t[static_cast<std::size_t>(k)] += 1;
      add_entry(m + 1, t, col, Rat(e[static_cast<std::size_t>(k)] - 1));
    }
  }

  // Exact Gaussian elimination for the rank.
  std::vector<std::vector<Rat>> mat;
  for (auto& [key, row] : rows) {
    std::vector<Rat> dense(basis.size(), Rat(0));
    bool nonzero = false;
    for (auto& [col, v] : row) {
      dense[col] = v;
      if (v != 0) nonzero = true;
    }
    if (nonzero) mat.push_back(std::move(dense));
  }

  std::size_t rank = 0;
  for (std::size_t col = 0; col < basis.size() && rank < mat.size(); ++col) {
    std::size_t piv = rank;
    while (piv < mat.size() && mat[piv][col] == 0) ++piv;
    if (piv == mat.size()) continue;
    std::swap(mat[piv], mat[rank]);
    Rat inv = Rat(1) / mat[rank][col];
    for (std::size_t c = col; c < basis.size(); ++c) mat[rank][c] *= inv;
    for (std::size_t r = 0; r < mat.size(); ++r) {
      if (r == rank || mat[r][col] == 0) continue;
      Rat f = mat[r][col];
      for (std::size_t c = col; c < basis.size(); ++c) mat[r][c] -= f * mat[rank][c];
    }
    ++rank;
  }
  return static_cast<int>(basis.size() - rank);
}

}  // namespace slelab::genops
