#include "slelab/exactalg.hpp"

#include <algorithm>
#include <sstream>

namespace slelab::exactalg {

namespace {

void require_same_vars(const VarTablePtr& a, const VarTablePtr& b) {
  if (a != b && (!a || !b || a->names() != b->names())) {
    throw std::invalid_argument("exactalg: values belong to different workspaces");
  }
}

}  // namespace

// ---------------------------------------------------------------------------
// VarTable

VarTable::VarTable(std::vector<std::string> names) : names_(std::move(names)) {}

std::shared_ptr<const VarTable> VarTable::make(std::vector<std::string> names) {
  return std::shared_ptr<const VarTable>(new VarTable(std::move(names)));
}

std::size_t VarTable::index(const std::string& name) const {
  for (std::size_t i = 0; i < names_.size(); ++i) {
    if (names_[i] == name) return i;
  }
  throw std::invalid_argument("exactalg: unknown variable '" + name + "'");
}

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(VarTablePtr vars) : vars_(std::move(vars)) {
  if (!vars_) throw std::invalid_argument("exactalg: null variable table");
}

Polynomial Polynomial::constant(VarTablePtr vars, const Rat& c) {
  Polynomial p(std::move(vars));
  if (c != 0) p.terms_.emplace(Exponents(p.vars_->size(), 0), c);
  return p;
}

Polynomial Polynomial::variable(VarTablePtr vars, const std::string& name) {
  Polynomial p(std::move(vars));
  Exponents e(p.vars_->size(), 0);
  e[p.vars_->index(name)] = 1;
  p.terms_.emplace(std::move(e), Rat(1));
  return p;
}

bool Polynomial::is_constant() const {
  if (terms_.empty()) return true;
  if (terms_.size() > 1) return false;
  const Exponents& e = terms_.begin()->first;
  return std::all_of(e.begin(), e.end(), [](int k) { return k == 0; });
}

Rat Polynomial::constant_value() const {
  if (terms_.empty()) return Rat(0);
  if (!is_constant()) throw std::logic_error("exactalg: polynomial is not constant");
  return terms_.begin()->second;
}

int Polynomial::degree(std::size_t var) const {
  int d = -1;
  for (const auto& [e, c] : terms_) d = std::max(d, e[var]);
  return d;  // -1 for the zero polynomial
}

int Polynomial::total_degree() const {
  int d = -1;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int k : e) s += k;
    d = std::max(d, s);
  }
  return d;
}

const Rat& Polynomial::leading_coefficient() const {
  if (terms_.empty()) throw std::logic_error("exactalg: zero polynomial has no leading term");
  return terms_.rbegin()->second;
}

void Polynomial::add_term(const Exponents& e, const Rat& c) {
  if (c == 0) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator-() const {
  Polynomial r(vars_);
  for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
  return r;
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  require_same_vars(vars_, o.vars_);
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, c);
  return r;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  require_same_vars(vars_, o.vars_);
  Polynomial r = *this;
  for (const auto& [e, c] : o.terms_) r.add_term(e, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  require_same_vars(vars_, o.vars_);
  Polynomial r(vars_);
  Exponents e(vars_->size());
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      r.add_term(e, ca * cb);
    }
  }
  return r;
}

Polynomial Polynomial::operator*(const Rat& c) const {
  Polynomial r(vars_);
  if (c == 0) return r;
  for (const auto& [e, k] : terms_) r.terms_.emplace(e, k * c);
  return r;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  Polynomial r(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponents d = e;
    d[var] -= 1;
    r.add_term(d, c * e[var]);
  }
  return r;
}

double Polynomial::evaluate(const std::vector<double>& point) const {
  double acc = 0.0;
  for (const auto& [e, c] : terms_) {
    double m = c.get_d();
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (int k = 0; k < e[i]; ++k) m *= point[i];
    }
    acc += m;
  }
  return acc;
}

Rat Polynomial::evaluate_exact(const std::vector<Rat>& point) const {
  Rat acc(0);
  for (const auto& [e, c] : terms_) {
    Rat m = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      for (int k = 0; k < e[i]; ++k) m *= point[i];
    }
    acc += m;
  }
  return acc;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Print highest lex term first.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    Rat a = c;
    if (!first) {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    } else if (a < 0) {
      os << "-";
      a = -a;
    }
    bool has_var = std::any_of(e.begin(), e.end(), [](int k) { return k > 0; });
    if (a != 1 || !has_var) os << a.get_str();
    bool star = (a != 1 || !has_var) && has_var;
    if (star) os << "*";
    bool firstv = true;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!firstv) os << "*";
      os << vars_->name(i);
      if (e[i] > 1) os << "^" << e[i];
      firstv = false;
    }
    first = false;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// Exact division and gcd

namespace {

// View of a polynomial as univariate in `var` with Polynomial coefficients.
std::vector<Polynomial> univariate_coeffs(const Polynomial& p, std::size_t var) {
  int d = std::max(p.degree(var), 0);
  std::vector<Polynomial> out(static_cast<std::size_t>(d) + 1, Polynomial::zero(p.vars()));
  for (const auto& [e, c] : p.terms()) {
    Exponents r = e;
    int k = r[var];
    r[var] = 0;
    out[static_cast<std::size_t>(k)].add_term(r, c);
  }
  return out;
}

Polynomial shift_mul(const Polynomial& p, std::size_t var, int k) {
  Polynomial out(p.vars());
  for (const auto& [e, c] : p.terms()) {
    Exponents r = e;
    r[var] += k;
    out.add_term(r, c);
  }
  return out;
}

int pick_main_var(const Polynomial& a, const Polynomial& b) {
  for (int v = static_cast<int>(a.vars()->size()) - 1; v >= 0; --v) {
    if (a.degree(static_cast<std::size_t>(v)) > 0 || b.degree(static_cast<std::size_t>(v)) > 0)
      return v;
  }
  return -1;
}

}  // namespace

std::optional<Polynomial> Polynomial::divide_exact(const Polynomial& divisor) const {
  require_same_vars(vars_, divisor.vars_);
  if (divisor.is_zero()) throw std::invalid_argument("exactalg: division by zero polynomial");
  if (is_zero()) return Polynomial::zero(vars_);
  if (divisor.is_constant()) {
    Rat inv = Rat(1) / divisor.constant_value();
    return *this * inv;
  }
  int v = -1;
  for (int i = static_cast<int>(vars_->size()) - 1; i >= 0; --i) {
    if (divisor.degree(static_cast<std::size_t>(i)) > 0) {
      v = i;
      break;
    }
  }
  auto var = static_cast<std::size_t>(v);
  auto bc = univariate_coeffs(divisor, var);
  const Polynomial& blead = bc.back();
  int db = static_cast<int>(bc.size()) - 1;

  Polynomial rem = *this;
  Polynomial quot(vars_);
  while (!rem.is_zero()) {
    int dr = rem.degree(var);
    if (dr < db) return std::nullopt;
    auto rc = univariate_coeffs(rem, var);
    auto q = rc.back().divide_exact(blead);
    if (!q) return std::nullopt;
    Polynomial qterm = shift_mul(*q, var, dr - db);
    quot = quot + qterm;
    rem = rem - qterm * divisor;
    if (!rem.is_zero() && rem.degree(var) >= dr &&
        static_cast<int>(univariate_coeffs(rem, var).size()) - 1 >= dr) {
      return std::nullopt;  // no progress: not divisible
    }
  }
  return quot;
}

namespace {

// --- Fast coprimality certificate ------------------------------------------
//
// Evaluate all variables but `var` at random integers (retrying when a
// leading coefficient dies) and run a univariate integer-primitive PRS.
// If the image gcd is constant and the leading coefficients survived, the
// polynomials share no factor with positive degree in `var`.  Checking every
// variable present in both inputs certifies full coprimality, which is the
// common case in rational-function normalization.

std::vector<mpz_class> univariate_integer_image(const Polynomial& p, std::size_t var,
                                                const std::vector<long>& point) {
  int d = p.degree(var);
  std::vector<Rat> coeffs(static_cast<std::size_t>(d) + 1, Rat(0));
  for (const auto& [e, c] : p.terms()) {
    Rat m = c;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (i == var) continue;
      for (int k = 0; k < e[i]; ++k) m *= point[i];
    }
    coeffs[static_cast<std::size_t>(e[var])] += m;
  }
  mpz_class denlcm(1);
  for (const auto& c : coeffs) {
    mpz_class g;
    mpz_lcm(g.get_mpz_t(), denlcm.get_mpz_t(), c.get_den().get_mpz_t());
    denlcm = g;
  }
  std::vector<mpz_class> out;
  out.reserve(coeffs.size());
  for (const auto& c : coeffs) {
    Rat scaled = c * Rat(denlcm);
    out.push_back(scaled.get_num());
  }
  while (!out.empty() && out.back() == 0) out.pop_back();
  return out;
}

void strip_integer_content(std::vector<mpz_class>& p) {
  mpz_class g(0);
  for (const auto& c : p) mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
  if (g == 0 || g == 1) return;
  for (auto& c : p) c /= g;
}

bool univariate_gcd_is_constant(std::vector<mpz_class> a, std::vector<mpz_class> b) {
  strip_integer_content(a);
  strip_integer_content(b);
  while (true) {
    if (b.empty()) return a.size() <= 1;
    if (b.size() == 1) return true;
    if (a.size() < b.size()) std::swap(a, b);
    // pseudo remainder of a by b
    while (a.size() >= b.size() && !a.empty()) {
      mpz_class lead = a.back();
      std::size_t shift = a.size() - b.size();
      for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b.back();
      for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= lead * b[i];
      while (!a.empty() && a.back() == 0) a.pop_back();
      strip_integer_content(a);
    }
    std::swap(a, b);
  }
}

// Deterministic evaluation points, varied per retry.
long eval_point(std::size_t var, int attempt) {
  static const long primes[] = {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41};
  return primes[(var * 7 + static_cast<std::size_t>(attempt) * 5) % 12] +
         17 * attempt;
}

bool certainly_coprime_in_var(const Polynomial& a, const Polynomial& b, std::size_t var) {
  for (int attempt = 0; attempt < 4; ++attempt) {
    std::vector<long> point(a.vars()->size(), 0);
    for (std::size_t i = 0; i < point.size(); ++i) point[i] = eval_point(i, attempt);
    auto ia = univariate_integer_image(a, var, point);
    auto ib = univariate_integer_image(b, var, point);
    // Leading coefficients must survive the evaluation for the bound to hold.
    if (static_cast<int>(ia.size()) - 1 != a.degree(var)) continue;
    if (static_cast<int>(ib.size()) - 1 != b.degree(var)) continue;
    return univariate_gcd_is_constant(std::move(ia), std::move(ib));
  }
  return false;
}

bool certainly_coprime(const Polynomial& a, const Polynomial& b) {
  for (std::size_t v = 0; v < a.vars()->size(); ++v) {
    if (a.degree(v) <= 0 || b.degree(v) <= 0) continue;
    if (!certainly_coprime_in_var(a, b, v)) return false;
  }
  return true;
}

Polynomial content_in_var(const Polynomial& p, std::size_t var) {
  auto cs = univariate_coeffs(p, var);
  Polynomial g = Polynomial::zero(p.vars());
  for (const auto& c : cs) {
    if (c.is_zero()) continue;
    g = poly_gcd(g, c);
    if (g.is_constant() && !g.is_zero()) break;
  }
  return g;
}

// Textbook pseudo-remainder: prem(a,b) with lc(b)^{deg a - deg b + 1} a = qb + r.
Polynomial pseudo_rem(Polynomial a, const Polynomial& b, std::size_t var) {
  auto bc = univariate_coeffs(b, var);
  const Polynomial blead = bc.back();
  int db = static_cast<int>(bc.size()) - 1;
  int e = a.degree(var) - db + 1;
  while (!a.is_zero() && a.degree(var) >= db) {
    auto ac = univariate_coeffs(a, var);
    int da = static_cast<int>(ac.size()) - 1;
    Polynomial alead = ac.back();
    a = a * blead - shift_mul(alead * b, var, da - db);
    --e;
  }
  for (int i = 0; i < e; ++i) a = a * blead;
  return a;
}

Polynomial make_monic(const Polynomial& p) {
  if (p.is_zero()) return p;
  Rat lc = p.leading_coefficient();
  return p * (Rat(1) / lc);
}

// Scale to integer coefficients with content 1 (sign of the leading term kept).
Polynomial integer_primitive(const Polynomial& p) {
  mpz_class denlcm(1);
  for (const auto& [e, c] : p.terms()) {
    mpz_class g;
    mpz_lcm(g.get_mpz_t(), denlcm.get_mpz_t(), c.get_den().get_mpz_t());
    denlcm = g;
  }
  mpz_class content(0);
  for (const auto& [e, c] : p.terms()) {
    mpz_class scaled = c.get_num() * (denlcm / c.get_den());
    mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), scaled.get_mpz_t());
  }
  if (content == 0) return p;
  Rat factor(denlcm, content);
  factor.canonicalize();
  return p * factor;
}

Polynomial pow_poly(const Polynomial& p, int k) {
  Polynomial r = Polynomial::constant(p.vars(), Rat(1));
  for (int i = 0; i < k; ++i) r = r * p;
  return r;
}

Polynomial lc_in_var(const Polynomial& p, std::size_t var) {
  return univariate_coeffs(p, var).back();
}

}  // namespace

Polynomial poly_gcd(const Polynomial& a, const Polynomial& b) {
  require_same_vars(a.vars(), b.vars());
  if (a.is_zero()) return make_monic(b);
  if (b.is_zero()) return make_monic(a);
  if (a.is_constant() || b.is_constant()) {
    return Polynomial::constant(a.vars(), Rat(1));
  }
  if (certainly_coprime(a, b)) {
    return Polynomial::constant(a.vars(), Rat(1));
  }
  int v = pick_main_var(a, b);
  auto var = static_cast<std::size_t>(v);
  if (a.degree(var) == 0) return poly_gcd(content_in_var(b, var), a);
  if (b.degree(var) == 0) return poly_gcd(content_in_var(a, var), b);

  Polynomial ca = content_in_var(a, var);
  Polynomial cb = content_in_var(b, var);
  Polynomial cont = poly_gcd(ca, cb);
  Polynomial pa = integer_primitive(*a.divide_exact(ca));
  Polynomial pb = integer_primitive(*b.divide_exact(cb));
  if (pa.degree(var) < pb.degree(var)) std::swap(pa, pb);

  // Subresultant remainder sequence (Collins); the divisions are exact and
  // keep coefficient growth polynomial, unlike the naive pseudo-remainders.
  Polynomial g = Polynomial::constant(a.vars(), Rat(1));
  Polynomial h = Polynomial::constant(a.vars(), Rat(1));
  while (true) {
    int delta = pa.degree(var) - pb.degree(var);
    Polynomial r = pseudo_rem(pa, pb, var);
    if (r.is_zero()) break;
    if (r.degree(var) == 0) {
      pb = Polynomial::constant(a.vars(), Rat(1));
      break;
    }
    Polynomial divisor = g * pow_poly(h, delta);
    auto next = r.divide_exact(divisor);
    if (!next) {
      // Sign conventions of prem can flip exactness; retry with the negation.
      next = (-r).divide_exact(divisor);
    }
    pa = pb;
    pb = next ? *next : r;
    g = lc_in_var(pa, var);
    if (delta >= 1) {
      Polynomial gd = pow_poly(g, delta);
      if (delta == 1) {
        h = gd;
      } else {
        auto hh = gd.divide_exact(pow_poly(h, delta - 1));
        h = hh ? *hh : gd;
      }
    }
  }
  if (pb.degree(var) <= 0) return make_monic(cont);
  Polynomial cpb = content_in_var(pb, var);
  return make_monic(cont * (*pb.divide_exact(cpb)));
}

// ---------------------------------------------------------------------------
// RationalFunction

RationalFunction::RationalFunction(Polynomial num)
    : num_(std::move(num)), den_(Polynomial::constant(num_.vars(), Rat(1))) {}

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  require_same_vars(num_.vars(), den_.vars());
  if (den_.is_zero()) throw std::invalid_argument("exactalg: zero denominator");
  normalize();
}

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = Polynomial::constant(num_.vars(), Rat(1));
    return;
  }
  Polynomial g = poly_gcd(num_, den_);
  if (!g.is_constant()) {
    num_ = *num_.divide_exact(g);
    den_ = *den_.divide_exact(g);
  }
  // Canonical scale: monic denominator (leading lex coefficient exactly 1).
  Rat lc = den_.leading_coefficient();
  Rat inv = Rat(1) / lc;
  num_ = num_ * inv;
  den_ = den_ * inv;
}

RationalFunction RationalFunction::zero(const VarTablePtr& vars) {
  return RationalFunction(Polynomial::zero(vars));
}

RationalFunction RationalFunction::constant(const VarTablePtr& vars, const Rat& c) {
  return RationalFunction(Polynomial::constant(vars, c));
}

RationalFunction RationalFunction::variable(const VarTablePtr& vars, const std::string& name) {
  return RationalFunction(Polynomial::variable(vars, name));
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r = *this;
  r.num_ = -r.num_;
  return r;
}

namespace {

// a/b + c/d with the Henrici small-gcd strategy: both inputs reduced, so the
// only cancellations pass through g = gcd(b, d).
RationalFunction add_reduced(const Polynomial& a, const Polynomial& b, const Polynomial& c,
                             const Polynomial& d, bool negate) {
  Polynomial g = poly_gcd(b, d);
  Polynomial b1 = g.is_constant() ? b : *b.divide_exact(g);
  Polynomial d1 = g.is_constant() ? d : *d.divide_exact(g);
  Polynomial n = negate ? a * d1 - c * b1 : a * d1 + c * b1;
  if (n.is_zero()) return RationalFunction::zero(a.vars());
  Polynomial h = poly_gcd(n, g);
  if (!h.is_constant()) {
    n = *n.divide_exact(h);
    g = *g.divide_exact(h);
  }
  return RationalFunction(n, b1 * d1 * g);
}

}  // namespace

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  return add_reduced(num_, den_, o.num_, o.den_, false);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
  return add_reduced(num_, den_, o.num_, o.den_, true);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
  Polynomial g1 = poly_gcd(num_, o.den_);
  Polynomial g2 = poly_gcd(o.num_, den_);
  Polynomial n1 = g1.is_constant() ? num_ : *num_.divide_exact(g1);
  Polynomial d2 = g1.is_constant() ? o.den_ : *o.den_.divide_exact(g1);
  Polynomial n2 = g2.is_constant() ? o.num_ : *o.num_.divide_exact(g2);
  Polynomial d1 = g2.is_constant() ? den_ : *den_.divide_exact(g2);
  return RationalFunction(n1 * n2, d1 * d2);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
  if (o.is_zero()) throw std::domain_error("exactalg: division by zero rational function");
  Polynomial g1 = poly_gcd(num_, o.num_);
  Polynomial g2 = poly_gcd(o.den_, den_);
  Polynomial n1 = g1.is_constant() ? num_ : *num_.divide_exact(g1);
  Polynomial d2 = g1.is_constant() ? o.num_ : *o.num_.divide_exact(g1);
  Polynomial n2 = g2.is_constant() ? o.den_ : *o.den_.divide_exact(g2);
  Polynomial d1 = g2.is_constant() ? den_ : *den_.divide_exact(g2);
  return RationalFunction(n1 * n2, d1 * d2);
}

double RationalFunction::evaluate(const std::vector<double>& point) const {
  return num_.evaluate(point) / den_.evaluate(point);
}

std::string RationalFunction::to_string() const {
  if (den_.is_constant() && den_.constant_value() == 1) return num_.to_string();
  return "(" + num_.to_string() + ") / (" + den_.to_string() + ")";
}

RationalFunction differentiate(const RationalFunction& f, std::size_t var) {
  // (p/q)' = (p' q - p q') / q^2, with the gcd(q, q') factor cancelled up front.
  const Polynomial& p = f.num();
  const Polynomial& q = f.den();
  Polynomial dq = q.derivative(var);
  if (dq.is_zero()) {
    return RationalFunction(p.derivative(var), q);
  }
  Polynomial d = poly_gcd(q, dq);
  Polynomial t = d.is_constant() ? q : *q.divide_exact(d);
  Polynomial dq_red = d.is_constant() ? dq : *dq.divide_exact(d);
  return RationalFunction(p.derivative(var) * t - p * dq_red, q * t);
}

RationalFunction differentiate(const RationalFunction& f, const std::string& var) {
  return differentiate(f, f.vars()->index(var));
}

RationalFunction substitute(const RationalFunction& f,
                            const std::map<std::string, RationalFunction>& bindings) {
  const VarTablePtr& vars = f.vars();
  std::vector<RationalFunction> values;
  values.reserve(vars->size());
  for (std::size_t i = 0; i < vars->size(); ++i) {
    auto it = bindings.find(vars->name(i));
    if (it == bindings.end()) {
      values.push_back(RationalFunction::variable(vars, vars->name(i)));
    } else {
      require_same_vars(vars, it->second.vars());
      values.push_back(it->second);
    }
  }
  auto eval_poly = [&](const Polynomial& p) {
    RationalFunction acc = RationalFunction::zero(vars);
    for (const auto& [e, c] : p.terms()) {
      RationalFunction m = RationalFunction::constant(vars, c);
      for (std::size_t i = 0; i < e.size(); ++i) {
        for (int k = 0; k < e[i]; ++k) m = m * values[i];
      }
      acc = acc + m;
    }
    return acc;
  };
  RationalFunction den = eval_poly(f.den());
  if (den.is_zero()) {
    throw std::domain_error("exactalg: substitution produced a zero denominator");
  }
  return eval_poly(f.num()) / den;
}

// ---------------------------------------------------------------------------
// Resultants

RationalFunction resultant_field(std::vector<RationalFunction> p,
                                 std::vector<RationalFunction> q) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  while (!q.empty() && q.back().is_zero()) q.pop_back();
  if (p.size() < 2 || q.size() < 2) {
    throw std::invalid_argument("exactalg: resultant needs positive degree in the variable");
  }
  const VarTablePtr vars = p.front().vars();
  std::size_t m = p.size() - 1, n = q.size() - 1;
  std::size_t dim = m + n;
  std::vector<std::vector<RationalFunction>> s(
      dim, std::vector<RationalFunction>(dim, RationalFunction::zero(vars)));
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = 0; k <= m; ++k) s[r][r + k] = p[m - k];
  }
  for (std::size_t r = 0; r < m; ++r) {
    for (std::size_t k = 0; k <= n; ++k) s[n + r][r + k] = q[n - k];
  }
  // Fraction-based Gaussian elimination; determinant accumulated in `det`.
  RationalFunction det = RationalFunction::constant(vars, Rat(1));
  for (std::size_t col = 0; col < dim; ++col) {
    std::size_t piv = col;
    while (piv < dim && s[piv][col].is_zero()) ++piv;
    if (piv == dim) return RationalFunction::zero(vars);
    if (piv != col) {
      std::swap(s[piv], s[col]);
      det = -det;
    }
    det = det * s[col][col];
    RationalFunction inv = RationalFunction::constant(vars, Rat(1)) / s[col][col];
    for (std::size_t r = col + 1; r < dim; ++r) {
      if (s[r][col].is_zero()) continue;
      RationalFunction f = s[r][col] * inv;
      for (std::size_t c = col; c < dim; ++c) {
        s[r][c] = s[r][c] - f * s[col][c];
      }
    }
  }
  return det;
}

RationalFunction resultant(const Polynomial& p, const Polynomial& q, const std::string& var) {
  require_same_vars(p.vars(), q.vars());
  std::size_t v = p.vars()->index(var);
  if (p.degree(v) <= 0 || q.degree(v) <= 0) {
    throw std::invalid_argument("exactalg: resultant needs positive degree in '" + var + "'");
  }
  auto lift = [&](const Polynomial& poly) {
    auto cs = univariate_coeffs(poly, v);
    std::vector<RationalFunction> out;
    out.reserve(cs.size());
    for (auto& c : cs) out.emplace_back(std::move(c));
    return out;
  };
  return resultant_field(lift(p), lift(q));
}

RationalFunction rf_var(const VarTablePtr& vars, const std::string& name) {
  return RationalFunction::variable(vars, name);
}

RationalFunction rf_const(const VarTablePtr& vars, const Rat& c) {
  return RationalFunction::constant(vars, c);
}

RationalFunction rf_const(const VarTablePtr& vars, long num, long den) {
  Rat c(num, den);
  c.canonicalize();
  return RationalFunction::constant(vars, c);
}

}  // namespace slelab::exactalg
