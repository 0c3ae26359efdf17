#include "slelab/flow.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace slelab::flow {

namespace {

double swallow_threshold(double dt_base) { return 1e-6 * std::sqrt(dt_base); }

}  // namespace

// ---------------------------------------------------------------------------
// ChordalChain

ChordalChain::ChordalChain(double w0, double dt_base) : w_(w0), dt_base_(dt_base) {
  if (dt_base <= 0.0) throw std::invalid_argument("flow: dt_base must be positive");
}

std::size_t ChordalChain::add_real_point(std::string label, double x0) {
  RealPoint p;
  p.label = std::move(label);
  p.g = x0;
  p.side = x0 >= w_ ? 1 : -1;
  reals_.push_back(std::move(p));
  return reals_.size() - 1;
}

std::size_t ChordalChain::add_bulk_point(std::string label, Complex z0) {
  if (z0.imag() <= 0.0) throw std::invalid_argument("flow: bulk points need Im z > 0");
  BulkPoint p;
  p.label = std::move(label);
  p.g = z0;
  bulks_.push_back(std::move(p));
  return bulks_.size() - 1;
}

void ChordalChain::kill_real(std::size_t i) {
  reals_[i].alive = false;
  reals_[i].swallow_time = t_;
}

void ChordalChain::advance_marked(double center, double dt, long skip_real) {
  const double thr = swallow_threshold(dt_base_);
  for (std::size_t i = 0; i < reals_.size(); ++i) {
    if (!reals_[i].alive || static_cast<long>(i) == skip_real) continue;
    double u = reals_[i].g - center;
    if (std::abs(u) < thr) {
      kill_real(i);
      continue;
    }
    double unew = std::copysign(std::sqrt(u * u + 4.0 * dt), u);
    reals_[i].deriv *= u / unew;
    reals_[i].g = center + unew;
  }
  for (auto& b : bulks_) {
    if (!b.alive) continue;
    Complex q = b.g - center;
    Complex arg = 1.0 + 4.0 * dt / (q * q);
    if (arg.real() <= 0.0 && std::abs(arg.imag()) < 1e-12) {
      b.alive = false;
      b.swallow_time = t_;
      continue;
    }
    Complex qn = q * std::sqrt(arg);
    b.deriv *= q / qn;
    b.g = center + qn;
    if (b.g.imag() <= 0.0) {
      b.alive = false;
      b.swallow_time = t_;
    }
  }
  t_ += dt;
}

void ChordalChain::step(double dw, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("flow: step needs dt > 0");
  advance_marked(w_, dt);
  w_ += dw;
  const double thr = swallow_threshold(dt_base_);
  for (std::size_t i = 0; i < reals_.size(); ++i) {
    auto& p = reals_[i];
    if (!p.alive) continue;
    double u = p.g - w_;
    int side = u >= 0.0 ? 1 : -1;
    if (std::abs(u) < thr || side != p.side) kill_real(i);
  }
  history_.push_back({dt, dw});
}

double ChordalChain::distance_proxy(std::size_t bulk_index) const {
  const auto& b = bulks_[bulk_index];
  if (!b.alive) throw std::domain_error("flow: distance proxy of a swallowed point");
  return std::abs(b.g - w_) / std::abs(b.deriv);
}

void ChordalChain::rescale(double lambda) {
  if (lambda <= 0.0) throw std::invalid_argument("flow: rescale needs lambda > 0");
  for (auto& p : reals_) {
    if (!p.alive) continue;
    p.g = (p.g - w_) / lambda;
    p.deriv /= lambda;
  }
  for (auto& b : bulks_) {
    if (!b.alive) continue;
    b.g = (b.g - w_) / lambda;
    b.deriv /= lambda;
  }
  w_ = 0.0;
  t_ /= lambda * lambda;
  history_.clear();
  rescaled_ = true;
}

std::vector<Complex> trace_points(const std::vector<StepRecord>& history, double w0,
                                  const std::vector<double>& times) {
  // Cumulative times and driving values after each step.
  std::vector<double> cum_t(history.size()), cum_w(history.size());
  double t = 0.0, w = w0;
  for (std::size_t k = 0; k < history.size(); ++k) {
    t += history[k].dt;
    cum_t[k] = t;
    cum_w[k] = w;  // driving during step k (before the increment)
    w += history[k].dw;
  }
  std::vector<Complex> out;
  out.reserve(times.size());
  for (double want : times) {
    long k = -1;
    for (std::size_t i = 0; i < cum_t.size(); ++i) {
      if (cum_t[i] <= want + 1e-15) k = static_cast<long>(i);
    }
    if (k < 0) {
      out.push_back(Complex(w0, 0.0));
      continue;
    }
    // Tip of step k, pulled back through the earlier slit maps.
    Complex z(cum_w[static_cast<std::size_t>(k)],
              2.0 * std::sqrt(history[static_cast<std::size_t>(k)].dt));
    for (long j = k - 1; j >= 0; --j) {
      Complex dz = z - cum_w[static_cast<std::size_t>(j)];
      Complex arg = 1.0 - 4.0 * history[static_cast<std::size_t>(j)].dt / (dz * dz);
      z = cum_w[static_cast<std::size_t>(j)] + dz * std::sqrt(arg);
    }
    out.push_back(z);
  }
  return out;
}

void write_driving_csv(std::ostream& os, const std::vector<StepRecord>& history, double w0) {
  os << "t,w\n";
  os.precision(17);
  double t = 0.0, w = w0;
  os << t << "," << w << "\n";
  for (const auto& s : history) {
    t += s.dt;
    w += s.dw;
    os << t << "," << w << "\n";
  }
}

std::vector<StepRecord> read_driving_csv(std::istream& is, double* w0) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("t,w", 0) != 0) {
    throw std::runtime_error("flow: driving CSV must start with header 't,w'");
  }
  std::vector<StepRecord> out;
  double prev_t = 0.0, prev_w = 0.0;
  bool first = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string a, b;
    if (!std::getline(row, a, ',') || !std::getline(row, b)) {
      throw std::runtime_error("flow: malformed driving CSV row");
    }
    double t = std::stod(a), w = std::stod(b);
    if (first) {
      if (w0) *w0 = w;
      prev_t = t;
      prev_w = w;
      first = false;
      continue;
    }
    out.push_back({t - prev_t, w - prev_w});
    prev_t = t;
    prev_w = w;
  }
  return out;
}

// ---------------------------------------------------------------------------
// RadialChain

namespace {

double wrap_angle(double a) {
  while (a > M_PI) a -= 2.0 * M_PI;
  while (a < -M_PI) a += 2.0 * M_PI;
  return a;
}

Complex radial_rhs(Complex z, Complex xi) { return -z * (z + xi) / (z - xi); }

}  // namespace

RadialChain::RadialChain(double theta0, double dt_base) : theta_(theta0), dt_base_(dt_base) {
  if (dt_base <= 0.0) throw std::invalid_argument("flow: dt_base must be positive");
}

std::size_t RadialChain::add_angle_point(std::string label, double alpha0) {
  AnglePoint p;
  p.label = std::move(label);
  p.alpha = alpha0;
  angles_.push_back(std::move(p));
  return angles_.size() - 1;
}

std::size_t RadialChain::add_disk_point(std::string label, Complex z0) {
  if (std::abs(z0) >= 1.0) throw std::invalid_argument("flow: disk points need |z| < 1");
  DiskPoint p;
  p.label = std::move(label);
  p.z = z0;
  disks_.push_back(std::move(p));
  return disks_.size() - 1;
}

double RadialChain::conformal_radius0() const { return std::exp(-t_); }

void RadialChain::step(double dtheta, double dt) {
  if (dt <= 0.0) throw std::invalid_argument("flow: step needs dt > 0");
  // Substep when marked structure sits close to the driving singularity.
  double gap = M_PI;
  for (const auto& p : angles_) {
    if (p.alive) gap = std::min(gap, std::abs(wrap_angle(p.alpha - theta_)));
  }
  Complex xi = std::polar(1.0, theta_);
  for (const auto& d : disks_) {
    if (d.alive) gap = std::min(gap, std::abs(d.z - xi));
  }
  int nsub = 1;
  if (gap > 1e-12) {
    nsub = std::max(1, static_cast<int>(std::ceil(dt / (0.05 * gap * gap))));
  }
  nsub = std::min(nsub, 4096);
  double h = dt / nsub;
  const double thr = 1e-6 * std::sqrt(dt_base_);

  for (int s = 0; s < nsub; ++s) {
    for (auto& p : angles_) {
      if (!p.alive) continue;
      double rel = wrap_angle(p.alpha - theta_);
      if (std::abs(rel) < thr) {
        p.alive = false;
        p.swallow_time = t_;
        continue;
      }
      // implicit midpoint for d alpha/dt = cot((alpha - theta)/2)
      double mid = rel;
      for (int it = 0; it < 3; ++it) {
        double next = rel + h * (1.0 / std::tan(0.5 * (0.5 * (rel + mid))));
        mid = next;
      }
      double relmid = 0.5 * (rel + mid);
      double drift = 1.0 / std::tan(0.5 * relmid);
      double relnew = rel + h * drift;
      if (relnew * rel <= 0.0) {
        p.alive = false;
        p.swallow_time = t_;
        continue;
      }
      p.logq += h * (-0.5 / (std::sin(0.5 * relmid) * std::sin(0.5 * relmid)));
      p.alpha = theta_ + relnew;
    }
    for (auto& d : disks_) {
      if (!d.alive) continue;
      Complex mid = d.z;
      for (int it = 0; it < 3; ++it) {
        mid = d.z + 0.5 * h * radial_rhs(mid, xi);
      }
      if (std::abs(mid - xi) < thr) {
        d.alive = false;
        continue;
      }
      Complex dd = mid - xi;
      d.deriv *= std::exp(h * (-(mid * mid - 2.0 * xi * mid - xi * xi) / (dd * dd)));
      d.z = d.z + h * radial_rhs(mid, xi);
      if (std::abs(d.z) >= 1.0) d.alive = false;
    }
    t_ += h;
  }
  theta_ += dtheta;
  history_.push_back({dt, dtheta});
}

double RadialChain::radius_proxy(std::size_t disk_index) const {
  const auto& d = disks_[disk_index];
  if (!d.alive) throw std::domain_error("flow: radius proxy of a swallowed point");
  double r = std::abs(d.z);
  return (1.0 - r * r) / std::abs(d.deriv);
}

double radial_slit_depth(double duration) {
  // The constant-driving hull is the radial segment [1 - eps, 1] e^{i angle};
  // d rho/d sigma = rho(rho+1)/(rho-1) integrates in closed form to
  // sigma = ln((2 - eps)^2 / (4(1 - eps))), eps = 1 - rho, so
  // eps(sigma) = 2(sqrt(q^2 + q) - q) with q = e^sigma - 1.
  double q = std::expm1(duration);
  return 2.0 * (std::sqrt(q * q + q) - q);
}

std::vector<Complex> radial_slit_polyline(double angle, double duration, int npoints) {
  if (npoints < 2) throw std::invalid_argument("flow: polyline needs at least 2 points");
  double eps_tip = radial_slit_depth(duration);
  std::vector<Complex> out;
  out.reserve(static_cast<std::size_t>(npoints) + 1);
  Complex dir = std::polar(1.0, angle);
  out.push_back(dir);  // base on the circle
  for (int k = 1; k <= npoints; ++k) {
    out.push_back((1.0 - eps_tip * k / npoints) * dir);
  }
  return out;
}

}  // namespace slelab::flow
